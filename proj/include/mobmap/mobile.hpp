#pragma once

#include "mobmap/laws.hpp"
#include "mobmap/planar_map.hpp"
#include "mobmap/rng.hpp"
#include "mobmap/tree.hpp"

#include <map>
#include <string>
#include <vector>

namespace mobmap {

// Mobiles are 4-type labeled plane trees: type 1 = map vertices, type 2 =
// flags on equal-label edges, types 3/4 = face vertices by parent type.
// Face degrees: a type-3 vertex with (k type-1, k' type-2) children encodes a
// face of degree 2k+k'+2, a type-4 vertex one of degree 2k+k'+1.

struct MobileParams {
    WeightSeq q;          // original weights
    double scale = 1.0;   // criticality rescaling: effective weights are scale*q
    double Zplus = 0.0;   // > 1
    double Zzero = 0.0;   // >= 0
    double alpha = 0.0;   // zeta3 normalizer
    double beta = 0.0;    // zeta4 normalizer
    int K = 0;            // max child count of zeta3/zeta4 supports
    double residual = 0.0;
    double spectral_radius = 0.0;  // mean-matrix criticality diagnostic

    double effective_weight(int degree) const { return scale * q.weight_of_degree(degree); }
};

// Solve the consistency system for (Zplus, Zzero) with a criticality rescaling
// search on the weights; alpha and beta follow by normalization. Throws when q
// admits no positive-map family.
MobileParams solve_constants(const WeightSeq& q, double tolerance = 1e-12);

// reproducibility record of a solve
std::string params_to_json(const MobileParams& p);

// The four offspring laws with double weights (sampling/numerics form;
// exact-rational families for the oracles are built separately).
struct MobileOffspring {
    double geom_p;                                    // type 1: P(k) = p(1-p)^k
    std::vector<std::tuple<int, int, double>> z3;     // (k, k', prob)
    std::vector<std::tuple<int, int, double>> z4;
    double sum1, sum3, sum4;                          // normalization diagnostics
};

MobileOffspring mobile_offspring(const MobileParams& params);

// All admissible displacement vectors (doubled units, relative to the parent
// label) around a type-3/4 vertex with the given ordered child types; the law
// is uniform over them. Types 1/2 force zero displacements on their children.
std::vector<std::vector<std::int64_t>> admissible_labelings(int parent_type, const CType& ctype);

// Exact-rational uniform-labeling family over all (parent, ctype) entries with
// at most max_children children (the displacement family of the mobile law).
DisplacementFamily bdg_displacement_family(int max_children);

struct MobileCheck {
    bool ok = true;
    std::string why;
};

// Full structural + admissibility validation of a mobile (both root types).
MobileCheck check_mobile(const TypedTree& t);

// Conditioned mobile sampler. sign selects the root convention: Plus = type-1
// root (conditioned to have a child), Null = type-2 root with two type-4
// children. n1 is the exact number of type-1 vertices. Rejection sampling with
// a counting-only first pass; the accepted attempt is rebuilt by replaying the
// generator, then children of face vertices are shuffled (uniform arrangement)
// and labels drawn uniformly among admissible ones.
class MobileSampler {
public:
    MobileSampler(const MobileParams& params);

    TypedTree sample(int n1, MapSign sign, Rng& rng, long long attempt_cap = 1LL << 26,
                     long long vertex_cap = -1) const;  // default cap: 64*n1+4096

    // counting-only attempt; returns final type-1 count or -1 on cap overflow
    long long attempt_count(int n1_limit, MapSign sign, Rng& rng, long long vertex_cap) const;

    const MobileParams& params() const { return params_; }

private:
    MobileParams params_;
    double p1_;
    std::vector<double> cum3_, cum4_;
    std::vector<std::pair<int, int>> kk3_, kk4_;
    mutable std::map<std::string, std::vector<std::vector<std::int64_t>>> label_cache_;

    TypedTree build(int n1, MapSign sign, Rng& rng) const;
    friend struct MobileSamplerTest;
};

// GW probability of a mobile shape under the solved offspring laws, together
// with the uniform-labeling factor (used by the pushforward cross-check).
double mobile_shape_prob(const MobileParams& params, const TypedTree& shape);
double mobile_labeled_prob(const MobileParams& params, const TypedTree& mobile);

// Exhaustive enumeration of labeled mobiles: exactly n1 type-1 vertices, map
// edge count (n1 + 1) + F - 2 <= max_map_edges, all face degrees in `degrees`
// (empty = no filter). sign as in MobileSampler.
std::vector<TypedTree> enumerate_mobile_shapes(int n1, int max_map_edges, MapSign sign,
                                               const std::set<int>& degrees = {});
std::vector<TypedTree> enumerate_labeled_mobiles(int n1, int max_map_edges, MapSign sign,
                                                 const std::set<int>& degrees = {});
long long count_labelings(const TypedTree& shape);

}  // namespace mobmap
