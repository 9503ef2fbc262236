#include "mobmap/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mobmap {

namespace {

// regularized upper incomplete gamma Q(a, x), series + continued fraction
double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    auto gln = std::lgamma(a);
    if (x < a + 1.0) {
        // series for P(a,x)
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - gln);
        return 1.0 - p;
    }
    // continued fraction for Q(a,x)
    double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0) return 1.0;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

double chi_square_pvalue(double stat, int dof) { return gamma_q(dof / 2.0, stat / 2.0); }

double chi_square_gof(const std::vector<long long>& observed, const std::vector<double>& expected) {
    if (observed.size() != expected.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
    double stat = 0;
    int dof = -1;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0) throw std::invalid_argument("chi_square_gof: nonpositive expected count");
        double d = observed[i] - expected[i];
        stat += d * d / expected[i];
        dof++;
    }
    if (dof < 1) throw std::invalid_argument("chi_square_gof: needs >= 2 cells");
    return chi_square_pvalue(stat, dof);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    double ne = double(a.size()) * b.size() / double(a.size() + b.size());
    double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    return kolmogorov_q(lambda);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_normal_pvalue(std::vector<double> a) {
    std::sort(a.begin(), a.end());
    double n = double(a.size());
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double c = normal_cdf(a[i]);
        d = std::max(d, std::fabs(c - double(i) / n));
        d = std::max(d, std::fabs(double(i + 1) / n - c));
    }
    double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    return kolmogorov_q(lambda);
}

double energy_permutation_pvalue(const std::vector<std::vector<double>>& a,
                                 const std::vector<std::vector<double>>& b, int permutations,
                                 std::uint64_t seed, int threads) {
    int n = int(a.size()), m = int(b.size());
    int tot = n + m;
    if (n < 2 || m < 2) throw std::invalid_argument("energy test: too few samples");
    size_t dim = a[0].size();
    std::vector<float> pts(size_t(tot) * dim);
    for (int i = 0; i < n; ++i)
        for (size_t k = 0; k < dim; ++k) pts[i * dim + k] = float(a[i][k]);
    for (int j = 0; j < m; ++j)
        for (size_t k = 0; k < dim; ++k) pts[(n + j) * dim + k] = float(b[j][k]);

    // flat upper-triangle distance matrix
    std::vector<float> dmat(size_t(tot) * (tot - 1) / 2);
    {
        std::vector<std::thread> ws;
        int nthreads = std::max(1, threads);
        for (int w = 0; w < nthreads; ++w)
            ws.emplace_back([&, w] {
                for (int i = w; i < tot; i += nthreads) {
                    size_t base = size_t(i) * (i - 1) / 2;
                    for (int j = 0; j < i; ++j) {
                        double s = 0;
                        for (size_t k = 0; k < dim; ++k) {
                            double d = double(pts[i * dim + k]) - double(pts[j * dim + k]);
                            s += d * d;
                        }
                        dmat[base + j] = float(std::sqrt(s));
                    }
                }
            });
        for (auto& t : ws) t.join();
    }

    auto energy_stat = [&](const std::vector<char>& in_a) {
        double saa = 0, sbb = 0, sab = 0;
        for (int i = 1; i < tot; ++i) {
            size_t base = size_t(i) * (i - 1) / 2;
            for (int j = 0; j < i; ++j) {
                double d = dmat[base + j];
                if (in_a[i] & in_a[j])
                    saa += d;
                else if (!in_a[i] && !in_a[j])
                    sbb += d;
                else
                    sab += d;
            }
        }
        return 2.0 * sab / (double(n) * m) - 2.0 * saa / (double(n) * n) - 2.0 * sbb / (double(m) * m);
    };

    std::vector<char> labels(tot, 0);
    for (int i = 0; i < n; ++i) labels[i] = 1;
    double observed = energy_stat(labels);

    std::atomic<int> higher{0};
    {
        std::vector<std::thread> ws;
        int nthreads = std::max(1, threads);
        for (int w = 0; w < nthreads; ++w)
            ws.emplace_back([&, w] {
                Rng rng(seed + 0x1234567 * (w + 1));
                std::vector<char> perm = labels;
                int cnt = 0;
                for (int p = w; p < permutations; p += nthreads) {
                    for (int i = tot - 1; i > 0; --i) {
                        int j = int(rng.below(i + 1));
                        std::swap(perm[i], perm[j]);
                    }
                    if (energy_stat(perm) >= observed) cnt++;
                }
                higher += cnt;
            });
        for (auto& t : ws) t.join();
    }
    return double(1 + higher.load()) / double(permutations + 1);
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    int n = int(x.size());
    if (n < 2 || y.size() != x.size()) throw std::invalid_argument("fit_slope: need >= 2 points");
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (int i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    if (n > 2) f.stderr_slope = std::sqrt(sse / (n - 2) / sxx);
    return f;
}

}  // namespace mobmap
