#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mobmap {

// Rooted plane tree with per-vertex types and per-edge displacements.
// Vertices are indexed in lexicographic Ulam-Harris order (= DFS preorder),
// so parent[v] < v and children lists are sorted. Displacements and labels
// are half-integers stored doubled (disp2), keeping all label arithmetic
// exact; disp2[0] (the root) is always 0.
struct TypedTree {
    std::vector<std::int32_t> parent;              // parent[0] == -1
    std::vector<std::uint8_t> type;                // small-integer type space
    std::vector<std::int64_t> disp2;               // doubled displacement on edge parent->v
    std::vector<std::vector<std::int32_t>> kids;   // children in plane order

    int size() const { return int(parent.size()); }
    int kcount(int v) const { return int(kids[v].size()); }

    // Ulam-Harris address (1-based child indices), root = empty path.
    std::vector<int> address(int v) const;
    std::string address_str(int v) const;
    int at_address(const std::vector<int>& addr) const;  // -1 if absent

    std::vector<std::int64_t> labels2() const;  // doubled label per vertex
    std::vector<std::int32_t> depths() const;
    int height() const;

    void check_valid() const;  // throws on malformed structure
};

// Build from lexicographic-order arrays: child counts per vertex and doubled
// displacements per non-root vertex (both in lex order).
TypedTree tree_from_lex(const std::vector<std::uint8_t>& types,
                        const std::vector<int>& kcounts,
                        const std::vector<std::int64_t>& disp2_nonroot);

// Single-type, zero-displacement convenience.
TypedTree tree_from_kcounts(const std::vector<int>& kcounts, std::uint8_t type = 0);

// Depth-first contour exploration theta(0..2|t|-2); [0] for a single vertex.
std::vector<std::int32_t> contour(const TypedTree& t);

// Graph distance matrix of the tree (BFS oracle for small trees).
std::vector<std::vector<int>> tree_distance_matrix(const TypedTree& t);

// Piecewise-linear function on [0,1] sampled at i/N. All interval extrema are
// exact: a piecewise-linear function attains them at breakpoints or interval
// endpoints.
struct PathFunction {
    int N = 0;
    std::vector<double> v;  // size N+1

    double at(double x) const;
    double interval_min(double a, double b) const;
    double interval_max(double a, double b) const;
    double sup_abs() const;
    bool is_excursion(double tol = 0.0) const;

    static PathFunction zero(int N = 1);
};

struct TreeLikePath {
    PathFunction zeta;  // excursion
    PathFunction f;
    double tolerance = 0.0;
};

// Contour process C and label process Z on the grid of size 2|t|-2.
// For |t| = 1 both are identically zero on [0,1] (degenerate-tree convention).
PathFunction contour_process(const TypedTree& t);
PathFunction label_process(const TypedTree& t);

// Height process H(i/|t|) = depth(v_i) and lex label process S(i/|t|) = label(v_i),
// with the final grid point wrapping to the root.
std::pair<PathFunction, PathFunction> height_lex_processes(const TypedTree& t);

// Counts first visits of type-q vertices strictly before each contour time.
PathFunction type_count_process(const TypedTree& t, std::uint8_t q);

// Dist_C(x,y) = C(x) + C(y) - 2 inf over [x, y].
double dist_on_contour(const PathFunction& C, double x, double y);

// The farther-from-root of the two contour vertices straddling y in [0,1).
// Uniform y yields a uniform non-root vertex; |t| >= 2 required.
int vertex_at(const TypedTree& t, double y);

struct LexTimeChange {
    std::vector<std::int64_t> j;  // j(i) = 2i - depth(v_i), j(|t|) = 2|t|-2
    PathFunction phi;             // phi(s) = sup{i : j(i) <= s(2|t|-2)} / |t|
};
LexTimeChange lex_time_change(const TypedTree& t);

// Endpoint conditions plus: Dist_zeta(x,y) <= tol implies |f(x)-f(y)| <= tol
// over all grid pairs (union of the two grids).
bool check_tree_like(const TreeLikePath& p);

// Canonical serialization: preorder "type:k:disp2" triples. This is the exact
// outcome key used by distribution oracles.
std::string canonical_key(const TypedTree& t);

// JSON round-trip, format {"types":[...],"children":[...],"disp2":[...]}.
std::string tree_to_json(const TypedTree& t);
TypedTree tree_from_json(const std::string& json_text);

// "s,value" CSV of a PathFunction.
std::string path_to_csv(const PathFunction& f);

// All plane-tree child-count profiles with exactly n vertices (Catalan family),
// each profile in lex order, usable with tree_from_kcounts.
std::vector<std::vector<int>> plane_tree_profiles(int n);

}  // namespace mobmap
