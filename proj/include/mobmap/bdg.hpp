#pragma once

#include "mobmap/mobile.hpp"
#include "mobmap/planar_map.hpp"
#include "mobmap/rng.hpp"
#include "mobmap/tree.hpp"

namespace mobmap {

struct MobileOfMap {
    TypedTree mobile;
    std::vector<std::int32_t> map_vertex_of;  // per mobile vertex: map vertex id, or -1
};

// Forward construction for positive or null pointed rooted maps: label vertices
// by distance to the point, subdivide equal-label edges with flags, add one
// vertex per face, and hang each descending corner of a face traversal off the
// face vertex. `flip_face_op` traverses faces against the vertex rotation
// (a deliberately inconsistent chirality, kept as a mutation control); it is
// expected to break on most maps.
MobileOfMap bdg_forward(const HalfEdgeMap& m, bool flip_face_op = false);

struct MapOfMobile {
    HalfEdgeMap map;
    std::vector<std::int32_t> map_vertex_of;  // per mobile vertex: map vertex id, or -1
    int pointed_vertex = -1;
};

// Inverse via successor chaining over the corners of labeled (type-1/2)
// vertices in contour order. Accepted on oracle evidence only: round trips,
// cardinalities and the label-distance identity over enumerated maps.
MapOfMobile bdg_inverse(const TypedTree& mobile, MapSign sign);

// Conditioned mobile sample pushed through the inverse; the output has exactly
// n_vertices vertices and all face degrees in the support of q.
struct BoltzmannSample {
    HalfEdgeMap map;
    TypedTree mobile;
    std::vector<std::int32_t> map_vertex_of;
};
BoltzmannSample boltzmann_sample(const MobileParams& params, int n_vertices, MapSign sign, Rng& rng,
                                 long long attempt_cap = 1LL << 26);

// Rooted+pointed canonical key (canonical_form plus the point's canonical id).
std::string canonical_pointed_form(const HalfEdgeMap& m);

namespace detail {
// Corner-ordering conventions of the inverse; the defaults are the calibrated
// ones. Exposed so tests can demonstrate that other conventions fail.
void set_inverse_conventions(bool corner_reverse, bool out_first, bool incoming_desc,
                             bool point_reverse, bool root_swap, bool null_root_swap,
                             bool succ_backward, bool root_second);
void set_forward_vertex_forward(bool forward);
void set_inverse_reorientation(bool odd, bool even);
}  // namespace detail

}  // namespace mobmap
