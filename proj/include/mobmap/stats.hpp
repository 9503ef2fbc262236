#pragma once

#include "mobmap/rng.hpp"

#include <vector>

namespace mobmap {

// upper-tail p-value of a chi-square statistic
double chi_square_pvalue(double stat, int dof);

// chi-square goodness-of-fit p-value against given expected counts
double chi_square_gof(const std::vector<long long>& observed, const std::vector<double>& expected);

// two-sample Kolmogorov-Smirnov p-value (asymptotic)
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

// one-sample KS against the standard normal
double ks_normal_pvalue(std::vector<double> a);

double normal_cdf(double x);

// Energy-distance permutation test between two samples of d-dimensional
// points; returns the permutation p-value ((1 + #higher) / (B + 1)).
// Deterministic given the seed; the pairwise distance matrix is cached in
// memory (float) and scanned once per permutation.
double energy_permutation_pvalue(const std::vector<std::vector<double>>& a,
                                 const std::vector<std::vector<double>>& b, int permutations,
                                 std::uint64_t seed, int threads = 2);

struct SlopeFit {
    double slope = 0, intercept = 0, stderr_slope = 0;
};

// OLS fit of y against x (used on log-log points for scaling exponents)
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mobmap
