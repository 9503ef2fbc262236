#include "mobmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mobmap {

double d_circ(const PathFunction& Z, double x, double y) {
    if (x < 0 || x > 1 || y < 0 || y > 1) throw std::domain_error("d_circ: outside [0,1]");
    if (x > y) std::swap(x, y);
    double inner = Z.interval_min(x, y);
    double outer = std::min(Z.interval_min(y, 1.0), Z.interval_min(0.0, x));
    return Z.at(x) + Z.at(y) - 2.0 * std::max(inner, outer);
}

SnakeSample brownian_snake_sample(int N, Rng& rng) {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("brownian_snake_sample: N must be even, >= 2");
    int M = N / 2;
    // cycle lemma: uniform word of M ups and M+1 downs has exactly one rotation
    // that first hits -1 at its last step; dropping that step leaves a uniform
    // nonnegative lattice excursion of length N
    std::vector<int> steps(2 * M + 1, -1);
    for (int i = 0; i < M; ++i) steps[i] = 1;
    for (int i = 2 * M; i > 0; --i) std::swap(steps[i], steps[int(rng.below(i + 1))]);
    int sum = 0, min_sum = 0, argmin = 2 * M;
    for (int i = 0; i < 2 * M + 1; ++i) {
        sum += steps[i];
        if (sum < min_sum) {
            min_sum = sum;
            argmin = i;
        }
    }
    std::vector<int> walk(N + 1, 0);
    {
        int pos = (argmin + 1) % (2 * M + 1);
        for (int i = 0; i < N; ++i) {
            walk[i + 1] = walk[i] + steps[pos];
            pos = (pos + 1) % (2 * M + 1);
        }
    }

    SnakeSample s;
    s.e.N = N;
    s.e.v.resize(N + 1);
    double scale = 1.0 / std::sqrt(double(N));
    for (int i = 0; i <= N; ++i) s.e.v[i] = walk[i] * scale;

    // labels: one independent Gaussian increment per excursion up-step, popped
    // on the matching down-step; Var(increment) = step height of e
    s.Z.N = N;
    s.Z.v.assign(N + 1, 0.0);
    std::vector<double> stack;
    double z = 0.0;
    double sd = std::sqrt(scale);
    for (int i = 0; i < N; ++i) {
        if (walk[i + 1] > walk[i]) {
            double g = sd * rng.gauss();
            stack.push_back(g);
            z += g;
        } else {
            z -= stack.back();
            stack.pop_back();
        }
        s.Z.v[i + 1] = z;
    }
    return s;
}

std::vector<std::vector<double>> d_star_grid(const PathFunction& Z,
                                             const std::vector<double>& grid_points,
                                             double zero_tol) {
    int n = int(grid_points.size());
    std::vector<std::vector<double>> dc(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dc[i][j] = dc[j][i] = d_circ(Z, grid_points[i], grid_points[j]);

    // contract near-zero pairs
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dc[i][j] <= zero_tol) comp[find(i)] = find(j);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double w = find(i) == find(j) ? 0.0 : dc[i][j];
            d[i][j] = std::min(d[i][j], w);
        }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

MobileGeodesics MobileGeodesics::build(const TypedTree& mobile, MapSign sign) {
    MobileGeodesics g;
    g.mobile = mobile;
    g.theta = contour(mobile);
    g.lab2 = mobile.labels2();
    for (int i = 0; i < int(g.theta.size()); ++i)
        if (mobile.type[g.theta[i]] == 1) g.type1_indices.push_back(i);
    auto inv = bdg_inverse(mobile, sign);
    g.map = std::move(inv.map);
    g.map_vertex_of = std::move(inv.map_vertex_of);
    g.map_dist.resize(g.map.V);
    for (int v = 0; v < g.map.V; ++v) {
        auto row = bfs_distance(g.map, v);
        g.map_dist[v].assign(row.begin(), row.end());
    }
    return g;
}

void MobileGeodesics::build_rmq() {
    int n = int(theta.size());
    int levels = 1;
    while ((1 << levels) <= n) ++levels;
    rmq_.assign(levels, std::vector<std::int64_t>(n));
    for (int i = 0; i < n; ++i) rmq_[0][i] = lab2[theta[i]];
    for (int l = 1; l < levels; ++l)
        for (int i = 0; i + (1 << l) <= n; ++i)
            rmq_[l][i] = std::min(rmq_[l - 1][i], rmq_[l - 1][i + (1 << (l - 1))]);
}

long long MobileGeodesics::range_min2(int a, int b) const {
    if (!rmq_.empty()) {
        int len = b - a + 1;
        int l = 31 - __builtin_clz(len);
        return std::min(rmq_[l][a], rmq_[l][b - (1 << l) + 1]);
    }
    long long m = std::numeric_limits<long long>::max();
    for (int k = a; k <= b; ++k) m = std::min(m, (long long)lab2[theta[k]]);
    return m;
}

long long MobileGeodesics::delta_circ2(int i, int j) const {
    if (mobile.type[theta[i]] != 1 || mobile.type[theta[j]] != 1)
        throw std::invalid_argument("delta_circ: contour vertices must have type 1");
    if (i > j) std::swap(i, j);
    int N = int(theta.size()) - 1;
    long long inner = range_min2(i, j);
    long long outer = std::min(range_min2(j, N), range_min2(0, i));
    return lab2[theta[i]] + lab2[theta[j]] - 2 * std::max(inner, outer) + 4;  // +2 doubled
}

int MobileGeodesics::delta(int i, int j) const {
    int u = map_vertex_of[theta[i]], v = map_vertex_of[theta[j]];
    if (u < 0 || v < 0) throw std::invalid_argument("delta: contour vertices must have type 1");
    return map_dist[u][v];
}

RescaledMatrices rescaled_map_distance_matrix(const MobileGeodesics& g, double scale, int n, int grid) {
    if (scale <= 0) throw std::invalid_argument("rescaled_map_distance_matrix: scale must be positive");
    double factor = scale / std::pow(double(n), 0.25);
    int m = int(g.type1_indices.size());
    // values on the type-1 index grid
    std::vector<std::vector<double>> D(m, std::vector<double>(m)), Dc = D;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            D[a][b] = g.delta(g.type1_indices[a], g.type1_indices[b]);
            Dc[a][b] = 0.5 * double(g.delta_circ2(g.type1_indices[a], g.type1_indices[b]));
        }
    int N = int(g.theta.size()) - 1;
    // bracketing type-1 indices with linear weights for a contour coordinate
    auto bracket = [&](double x) {
        double cx = x * N;
        int lo = 0, hi = m - 1;
        // last type-1 index <= cx (clamped)
        while (lo < hi) {
            int mid = (lo + hi + 1) / 2;
            if (g.type1_indices[mid] <= cx)
                lo = mid;
            else
                hi = mid - 1;
        }
        int a = lo, b = std::min(lo + 1, m - 1);
        double ia = g.type1_indices[a], ib = g.type1_indices[b];
        double w = (ib > ia) ? std::clamp((cx - ia) / (ib - ia), 0.0, 1.0) : 0.0;
        if (cx <= ia) w = 0.0;
        return std::tuple<int, int, double>(a, b, w);
    };
    RescaledMatrices out;
    out.D.assign(grid, std::vector<double>(grid, 0.0));
    out.Dcirc = out.D;
    for (int r = 0; r < grid; ++r) {
        auto [a1, b1, w1] = bracket(double(r) / (grid - 1));
        for (int s = 0; s < grid; ++s) {
            auto [a2, b2, w2] = bracket(double(s) / (grid - 1));
            auto bil = [&](const std::vector<std::vector<double>>& M) {
                return (1 - w1) * (1 - w2) * M[a1][a2] + (1 - w1) * w2 * M[a1][b2] +
                       w1 * (1 - w2) * M[b1][a2] + w1 * w2 * M[b1][b2];
            };
            out.D[r][s] = factor * bil(D);
            out.Dcirc[r][s] = factor * bil(Dc);
        }
    }
    return out;
}

void FiniteMetricMeasureSpace::check_valid() const {
    int n = size();
    if (int(dist.size()) != n) throw std::invalid_argument("mm-space: size mismatch");
    double wsum = 0;
    for (double w : weights) {
        if (w < 0) throw std::invalid_argument("mm-space: negative weight");
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-9) throw std::invalid_argument("mm-space: weights must sum to 1");
    for (int i = 0; i < n; ++i) {
        if (std::fabs(dist[i][i]) > 1e-12) throw std::invalid_argument("mm-space: nonzero diagonal");
        for (int j = 0; j < n; ++j) {
            if (std::fabs(dist[i][j] - dist[j][i]) > 1e-12) throw std::invalid_argument("mm-space: asymmetric");
            for (int k = 0; k < n; ++k)
                if (dist[i][j] > dist[i][k] + dist[k][j] + 1e-9)
                    throw std::invalid_argument("mm-space: triangle inequality fails");
        }
    }
}

namespace {

constexpr int kGhCap = 7;

// distortion candidates: all |dX(i,i') - dY(j,j')|
std::vector<double> distortion_candidates(const FiniteMetricMeasureSpace& X,
                                          const FiniteMetricMeasureSpace& Y) {
    std::vector<double> cand{0.0};
    for (int i = 0; i < X.size(); ++i)
        for (int i2 = 0; i2 < X.size(); ++i2)
            for (int j = 0; j < Y.size(); ++j)
                for (int j2 = 0; j2 < Y.size(); ++j2)
                    cand.push_back(std::fabs(X.dist[i][i2] - Y.dist[j][j2]));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return cand;
}

// subsets of Y whose diameter is <= delta (candidate per-x assignment masks)
std::vector<int> y_clique_masks(const FiniteMetricMeasureSpace& Y, double delta) {
    int m = Y.size();
    std::vector<int> out;
    for (int mask = 1; mask < (1 << m); ++mask) {
        bool good = true;
        for (int j = 0; j < m && good; ++j)
            if (mask >> j & 1)
                for (int j2 = j + 1; j2 < m && good; ++j2)
                    if (mask >> j2 & 1 && Y.dist[j][j2] > delta + 1e-12) good = false;
        if (good) out.push_back(mask);
    }
    return out;
}

// is there a correspondence with distortion <= delta?
bool correspondence_feasible(const FiniteMetricMeasureSpace& X, const FiniteMetricMeasureSpace& Y,
                             double delta) {
    int n = X.size(), m = Y.size();
    auto ok = [&](int i, int j, int i2, int j2) {
        return std::fabs(X.dist[i][i2] - Y.dist[j][j2]) <= delta + 1e-12;
    };
    auto masks = y_clique_masks(Y, delta);
    std::vector<int> chosen(n, 0);
    std::function<bool(int, int)> rec = [&](int i, int covered) {
        if (i == n) return covered == (1 << m) - 1;
        for (int mask : masks) {
            bool good = true;
            for (int i2 = 0; i2 < i && good; ++i2)
                for (int j = 0; j < m && good; ++j)
                    if (mask >> j & 1)
                        for (int j2 = 0; j2 < m && good; ++j2)
                            if (chosen[i2] >> j2 & 1 && !ok(i, j, i2, j2)) good = false;
            if (!good) continue;
            chosen[i] = mask;
            if (rec(i + 1, covered | mask)) return true;
        }
        chosen[i] = 0;
        return false;
    };
    return rec(0, 0);
}

// max coupling mass placeable on allowed pairs: bipartite max flow with
// augmenting paths (residual arcs included)
double max_coupling_mass(const std::vector<double>& mu, const std::vector<double>& nu,
                         const std::vector<std::vector<char>>& allowed) {
    int n = int(mu.size()), m = int(nu.size());
    std::vector<std::vector<double>> f(n, std::vector<double>(m, 0.0));
    std::vector<double> out_x(n, 0.0), in_y(m, 0.0);
    const double eps = 1e-13;
    while (true) {
        // BFS over residual graph: source -> x (if out_x < mu), x -> y (allowed),
        // y -> x (if f > 0), y -> sink (if in_y < nu)
        std::vector<int> from_x(n, -2), from_y(m, -2);  // -2 unvisited, -1 from source
        std::deque<std::pair<int, int>> q;              // (side 0=x 1=y, index)
        for (int i = 0; i < n; ++i)
            if (mu[i] - out_x[i] > eps) {
                from_x[i] = -1;
                q.push_back({0, i});
            }
        int hit = -1;
        while (!q.empty() && hit < 0) {
            auto [side, idx] = q.front();
            q.pop_front();
            if (side == 0) {
                for (int j = 0; j < m; ++j)
                    if (allowed[idx][j] && from_y[j] == -2) {
                        from_y[j] = idx;
                        if (nu[j] - in_y[j] > eps) {
                            hit = j;
                            break;
                        }
                        q.push_back({1, j});
                    }
            } else {
                for (int i = 0; i < n; ++i)
                    if (f[i][idx] > eps && from_x[i] == -2) {
                        from_x[i] = idx;
                        q.push_back({0, i});
                    }
            }
        }
        if (hit < 0) break;
        // reconstruct path and bottleneck
        double push = nu[hit] - in_y[hit];
        {
            int j = hit;
            while (true) {
                int i = from_y[j];
                if (from_x[i] == -1) {
                    push = std::min(push, mu[i] - out_x[i]);
                    break;
                }
                int jprev = from_x[i];
                push = std::min(push, f[i][jprev]);
                j = jprev;
            }
        }
        {
            int j = hit;
            in_y[j] += push;
            while (true) {
                int i = from_y[j];
                f[i][j] += push;
                if (from_x[i] == -1) {
                    out_x[i] += push;
                    break;
                }
                int jprev = from_x[i];
                f[i][jprev] -= push;
                j = jprev;
            }
        }
    }
    double flow = 0;
    for (double v : out_x) flow += v;
    return flow;
}

}  // namespace

double gh_distance_exact(const FiniteMetricMeasureSpace& X, const FiniteMetricMeasureSpace& Y) {
    if (X.size() > kGhCap || Y.size() > kGhCap) throw std::invalid_argument("gh_distance_exact: size cap is 7");
    auto cand = distortion_candidates(X, Y);
    int lo = 0, hi = int(cand.size()) - 1;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (correspondence_feasible(X, Y, cand[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return cand[lo] / 2.0;
}

double ghp_distance_exact(const FiniteMetricMeasureSpace& X, const FiniteMetricMeasureSpace& Y) {
    if (X.size() > kGhCap || Y.size() > kGhCap) throw std::invalid_argument("ghp_distance_exact: size cap is 7");
    int n = X.size(), m = Y.size();
    // enumerate correspondences as pairwise-compatible pair sets via maximal
    // candidate masks per distortion level; for the small sizes in scope a
    // direct search over per-x masks is exact and fast enough
    double best = std::numeric_limits<double>::infinity();
    auto cand = distortion_candidates(X, Y);
    for (double delta : cand) {
        if (delta / 2.0 >= best) break;
        // greedy-complete search for the coupling-optimal correspondence at
        // this distortion level: we take ALL pairs compatible with everything
        // else chosen; since compatibility is pairwise, the best correspondence
        // for the coupling term is a maximal clique. For the sizes in scope we
        // search masks per x directly.
        auto ok = [&](int i, int j, int i2, int j2) {
            return std::fabs(X.dist[i][i2] - Y.dist[j][j2]) <= delta + 1e-12;
        };
        auto masks = y_clique_masks(Y, delta);
        std::vector<int> chosen(n, 0);
        double best_mass = -1;
        std::function<void(int, int)> rec = [&](int i, int covered) {
            if (i == n) {
                if (covered != (1 << m) - 1) return;
                std::vector<std::vector<char>> allowed(n, std::vector<char>(m, 0));
                for (int a = 0; a < n; ++a)
                    for (int j = 0; j < m; ++j) allowed[a][j] = (chosen[a] >> j) & 1;
                best_mass = std::max(best_mass, max_coupling_mass(X.weights, Y.weights, allowed));
                return;
            }
            for (int mask : masks) {
                bool good = true;
                for (int i2 = 0; i2 < i && good; ++i2)
                    for (int j = 0; j < m && good; ++j)
                        if (mask >> j & 1)
                            for (int j2 = 0; j2 < m && good; ++j2)
                                if (chosen[i2] >> j2 & 1 && !ok(i, j, i2, j2)) good = false;
                if (!good) continue;
                chosen[i] = mask;
                rec(i + 1, covered | mask);
            }
            chosen[i] = 0;
        };
        rec(0, 0);
        if (best_mass < 0) continue;  // no correspondence at this distortion
        double val = std::max(delta / 2.0, 1.0 - best_mass);
        best = std::min(best, val);
    }
    return best;
}

}  // namespace mobmap
