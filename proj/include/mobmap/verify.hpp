#pragma once

#include "mobmap/bdg.hpp"
#include "mobmap/laws.hpp"
#include "mobmap/metrics.hpp"
#include "mobmap/mobile.hpp"
#include "mobmap/rng.hpp"

#include <map>
#include <string>
#include <vector>

namespace mobmap {

struct TestReport {
    std::string name;
    std::string mode;  // exact | chi-square | KS | regression | energy
    double statistic = 0;
    double threshold = 0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::map<std::string, long long> sizes;
    std::string note;

    std::string to_json() const;
};

std::string reports_to_json(const std::vector<TestReport>& reports);
bool all_pass(const std::vector<TestReport>& reports);

// ----- sampling-law plumbing ---------------------------------------------

// A law with both an exact enumerator view (ValidLaw) and a sampler; the
// corpus covers multitype shapes, repeated child types and k in {1,2,3}.
struct CorpusLaw {
    std::string name;
    ValidLaw law;
};

std::vector<CorpusLaw> builtin_law_corpus();

// Sibling-shape-dependent displacements: a deliberately non-valid law whose
// joint subtree law differs from its symmetrization (sensitivity control).
struct AdversarialLaw {
    TypedTree base_shape_a, base_shape_b;  // two shapes, equal probability
    TypedTree sample(Rng& rng) const;
    // enumerate the exact joint law pieces (used by the eqdist control)
    std::vector<std::pair<TypedTree, Rational>> outcomes() const;
    static AdversarialLaw make();
};

// ----- verification suites -------------------------------------------------

// Exact Lemma-style oracle: the joint law of (spanned subtree with branch
// displacements zeroed, sample addresses) is identical under the law and its
// symmetrization. Exact rational equality.
TestReport eqdist_check(const CorpusLaw& law, int k, int max_vertices);
std::vector<TestReport> eqdist_suite(int k_max, int max_vertices);

// Finite-n contour/label finite-dimensional comparison between an ensemble and
// its symmetrization (energy permutation test), plus the adversarial control.
TestReport fdd_compare_mobile(const MobileParams& params, int n1, int k, int samples,
                              std::uint64_t seed, int permutations = 999);
TestReport fdd_compare_adversarial(int k, int samples, std::uint64_t seed, int permutations = 999);

// Exact centering audit of the uniform-labeling displacement family.
std::vector<TestReport> centering_audit(int max_children);

// Monte Carlo scaling exponents over an ensemble of Boltzmann maps.
enum class ScalingFunctional { LabelRange, DistancePair, Height };
struct ScalingResult {
    std::vector<TestReport> reports;
};
ScalingResult scaling_estimate(const WeightSeq& q, const std::vector<int>& n_list, int reps,
                               const std::vector<ScalingFunctional>& functionals, std::uint64_t seed,
                               int threads = 2);

// Snake-limit functional comparisons at finite n (documented tolerances).
std::vector<TestReport> snake_compare(const WeightSeq& q, int n, int samples, std::uint64_t seed);

// Bijection audit: enumeration cardinalities, round trips, the label-distance
// identity, the distance upper bound, and the Boltzmann pushforward at the
// smallest feasible size; plus the flipped-chirality negative control.
std::vector<TestReport> bijection_audit(int max_edges, const std::set<int>& q_support);

// Deterministic encoding identities on enumerated and random trees
// (contour-distance = tree distance; time-change bounds; displacement
// invariances under reordering).
std::vector<TestReport> identity_suite(std::uint64_t seed);

// Snake sampler covariance audit: empirical Cov(Z(s),Z(t)) vs mean running
// minimum of e at a 3x3 grid of times.
TestReport snake_covariance_check(int N, int samples, std::uint64_t seed, double rel_tol);

// GH/GHP solver audit: brute-force distortion search agreement on random
// 4-point instances and the two-point formula.
std::vector<TestReport> gh_audit(int instances, std::uint64_t seed);

}  // namespace mobmap
