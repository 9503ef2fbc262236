#pragma once

#include "mobmap/rational.hpp"
#include "mobmap/rng.hpp"
#include "mobmap/tree.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobmap {

// Exact probability table over canonically-serialized outcomes.
struct FiniteDistribution {
    std::map<std::string, Rational> p;

    void add(const std::string& key, const Rational& w);
    Rational total() const;
    bool operator==(const FiniteDistribution& o) const { return p == o.p; }
    void normalize();                 // divide by total (exact)
    std::string to_csv() const;       // key,numerator,denominator
};

using CType = std::vector<std::uint8_t>;  // child type vector

// Finite-support distribution over displacement vectors (doubled units).
struct DispDist {
    std::vector<std::pair<std::vector<std::int64_t>, Rational>> atoms;

    void check(int arity) const;  // weights positive, sum 1, arity match
    const std::vector<std::int64_t>& sample(Rng& rng) const;
};

// The per-(parent type, child type vector) displacement family of a valid law.
struct DisplacementFamily {
    std::map<std::string, DispDist> entries;

    static std::string key(int parent_type, const CType& ctype);
    void set(int parent_type, const CType& ctype, DispDist d);
    bool has(int parent_type, const CType& ctype) const;
    const DispDist& get(int parent_type, const CType& ctype) const;  // throws if missing
};

// pi^sym: average over all child permutations, exact rational weights.
// Requires the family to be closed under permutations of present keys.
DisplacementFamily symmetrize_family(const DisplacementFamily& fam);

enum class Centering { Local, Centered };

// Local: every coordinate mean of every entry is zero.
// Centered: coordinate-mean sums vanish within each (parent, count-class).
bool centering_check(const DisplacementFamily& fam, Centering mode);

// Offspring distributions over ordered child-type vectors; permutation
// invariance is part of the contract.
struct OffspringFamily {
    std::map<int, std::vector<std::pair<CType, Rational>>> per_type;

    void check_permutation_invariant() const;  // throws on violation
    // split a count-class weight uniformly over its distinct arrangements
    void add_count_class(int parent_type, const std::map<int, int>& counts, const Rational& w);
};

struct GwResult {
    std::optional<TypedTree> tree;  // nullopt on population overflow
    long long generated = 0;
};

// Breadth-light generation with a hard vertex cap (supercritical protection).
GwResult gw_sample(const OffspringFamily& off, int root_type, Rng& rng, long long vertex_cap);

struct Exhaustion : std::runtime_error {
    long long attempts;
    explicit Exhaustion(long long a)
        : std::runtime_error("rejection sampling exhausted after " + std::to_string(a) + " attempts"),
          attempts(a) {}
};

// Rejection sampling until the count of type-q vertices equals m.
TypedTree gw_sample_conditioned(const OffspringFamily& off, int root_type, int target_type,
                                int target_count, Rng& rng, long long attempt_cap,
                                long long vertex_cap);

// A valid law: symmetric shape law (explicit table or GW) plus displacement family.
struct ShapeAtom {
    TypedTree shape;  // displacements all zero
    Rational prob;
};

struct GwSpec {
    OffspringFamily off;
    int root_type = 0;
    std::optional<std::pair<int, int>> condition;  // (type, exact count)
    long long vertex_cap = 1 << 20;
    long long attempt_cap = 1 << 24;
};

struct ValidLaw {
    std::vector<ShapeAtom> shapes;  // used when gw is absent
    std::optional<GwSpec> gw;
    DisplacementFamily disp;
};

// Check an explicit shape table for symmetry (equal weight across reorderings).
bool shape_law_is_symmetric(const std::vector<ShapeAtom>& shapes);

// Symmetrized shape table: average over all child reorderings.
std::vector<ShapeAtom> symmetrize_shape_law(const std::vector<ShapeAtom>& shapes);

// Sample a shape, then draw each vertex's displacement vector independently
// from its (type, child types) entry.
TypedTree valid_sample(const ValidLaw& law, Rng& rng);

// Exact law of the labeled tree as a FiniteDistribution over canonical keys.
// The law's support must lie within max_vertices; conditioned GW laws are
// renormalized by the exact event mass.
FiniteDistribution exact_law_enumeration(const ValidLaw& law, int max_vertices,
                                         long long outcome_cap = 200000);

// All typed shapes of the law together with exact probabilities (helper used
// by the distribution oracles; same caveats as exact_law_enumeration).
std::vector<ShapeAtom> enumerate_shapes(const ValidLaw& law, int max_vertices);

// Enumerate every sigma in P_t (product of child permutations); calls f with
// each ChildPerms-like vector of position maps.
void for_each_perm_vector(const TypedTree& t,
                          const std::function<void(const std::vector<std::vector<int>>&)>& f);

}  // namespace mobmap
