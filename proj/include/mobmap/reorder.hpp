#pragma once

#include "mobmap/rng.hpp"
#include "mobmap/tree.hpp"

#include <vector>

namespace mobmap {

// One permutation of {0..k(v)-1} per vertex, bound to a specific tree shape.
// perm[v][i] is the new position of v's i-th child.
struct ChildPerms {
    std::vector<std::vector<int>> perm;

    static ChildPerms identity(const TypedTree& t);
    static ChildPerms uniform(const TypedTree& t, Rng& rng);
    // identity forced on the given vertices (branchpoint-restricted draws)
    static ChildPerms uniform_fixing(const TypedTree& t, const std::vector<char>& fixed, Rng& rng);

    void check_bound(const TypedTree& t) const;  // throws on shape mismatch
};

struct PermutedTree {
    TypedTree tree;
    std::vector<std::int32_t> new_of_old;  // vertex map t -> sigma(t)
};

// Reorder children at every vertex; types stay with vertices, displacements
// follow their edges.
PermutedTree apply_permutation(const TypedTree& t, const ChildPerms& sigma);

// Inverse vector bound to sigma(t): applying it to sigma(t) restores t.
ChildPerms invert_perm(const TypedTree& t, const ChildPerms& sigma);

// Uniform reordering draw (the symmetrization of a single tree).
TypedTree sample_symmetrization(const TypedTree& t, Rng& rng);

// Subtree spanned by sampled vertices and their ancestors, in the plane order
// inherited from t.
struct SpannedSubtree {
    TypedTree sub;
    std::vector<std::int32_t> sample_vertex;  // per sample index: vertex of sub
    std::vector<std::int32_t> orig_of_sub;    // per sub vertex: vertex of t
    std::vector<std::int32_t> branch_orig;    // branchpoints, as vertices of t
};

SpannedSubtree spanning_subtree(const TypedTree& t, const std::vector<int>& samples);

// tree plus the sample-index -> subtree-address map
std::string spanned_to_json(const SpannedSubtree& s);

// Vertices of t with at least two children whose subtrees contain samples.
std::vector<std::int32_t> branchpoints(const TypedTree& t, const std::vector<int>& samples);

// Zero the displacement of every edge leaving a subtree vertex of out-degree >= 2.
SpannedSubtree zero_branch_displacements(const SpannedSubtree& s);

// Draw sigma uniform among vectors fixing the branchpoints, apply it, zero the
// displacements on branchpoint child edges, and map the samples through sigma.
struct RestrictedSym {
    TypedTree tree;
    std::vector<int> samples;
};
RestrictedSym branch_restricted_symmetrize(const TypedTree& t, const std::vector<int>& samples, Rng& rng);

}  // namespace mobmap
