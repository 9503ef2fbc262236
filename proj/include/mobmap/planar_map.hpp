#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mobmap {

// Rooted (optionally pointed) planar map as a rotation system. Darts are
// 0..2E-1; alpha pairs the two darts of each edge, rot is the next dart
// counterclockwise around the dart's origin vertex. The root dart is the
// oriented root edge, origin = tail. The vertex map (V=1, E=0, one face of
// degree 0) is the instance with no darts.
struct HalfEdgeMap {
    std::vector<std::int32_t> alpha;
    std::vector<std::int32_t> rot;
    std::int32_t root = -1;
    std::int32_t pointed = -1;             // vertex id, or -1
    std::vector<std::int32_t> dart_vertex; // derived: origin vertex per dart
    int V = 1;

    int darts() const { return int(alpha.size()); }
    int edges() const { return darts() / 2; }
    bool is_vertex_map() const { return darts() == 0; }
    int root_tail() const { return dart_vertex[root]; }
    int root_head() const { return dart_vertex[alpha[root]]; }

    // fill dart_vertex/V from rot orbits; throws on malformed input
    void finalize();
    void check_valid() const;  // involution, connectivity, Euler V-E+F=2

    // orbits of rot∘alpha; each orbit is one face (lists darts in order)
    std::vector<std::vector<std::int32_t>> faces() const;
    int face_of_dart(int d) const;  // index into faces() order

    static HalfEdgeMap vertex_map();
};

// One entry per face; the vertex map yields {0}.
std::vector<int> face_degrees(const HalfEdgeMap& m);

struct WeightSeq {
    std::vector<std::pair<int, double>> q;  // (degree, weight), finite support

    double weight_of_degree(int deg) const;
    int max_degree() const;
    // finite support with q_p > 0 for some odd p >= 3
    bool admissible_odd() const;
};

double boltzmann_weight(const HalfEdgeMap& m, const WeightSeq& q);

enum class MapSign { Plus, Null, Minus };

std::vector<int> bfs_distance(const HalfEdgeMap& m, int v);

// Sign of a pointed rooted map from the BFS labels of the root edge ends;
// the vertex map is Plus by convention.
MapSign classify_sign(const HalfEdgeMap& m);

HalfEdgeMap reverse_root(const HalfEdgeMap& m);

// Canonical dart relabeling from the root (rooted maps are rigid, so equal
// canonical forms mean equal rooted maps).
std::string canonical_form(const HalfEdgeMap& m);

// All rooted connected planar maps with E <= max_edges, up to root-preserving
// isomorphism, whose face degrees all lie in `degrees` (empty = no filter).
// max_edges <= 6; beware E=6 takes a while.
std::vector<HalfEdgeMap> enumerate_maps(int max_edges, const std::set<int>& degrees = {});

// Every pointing of every enumerated rooted map.
std::vector<HalfEdgeMap> enumerate_pointed_maps(int max_edges, const std::set<int>& degrees = {});

// Line-based map file format.
std::string map_to_text(const HalfEdgeMap& m);
HalfEdgeMap map_from_text(const std::string& text);

}  // namespace mobmap
