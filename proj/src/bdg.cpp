#include "mobmap/bdg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mobmap {

namespace {

// Inverse-construction conventions (pinned by the round-trip oracle over all
// enumerated maps with <= 4 edges; see tests/test_bdg.cpp).
struct InverseConventions {
    bool corner_reverse;    // read a vertex's corners against contour order
    bool out_first;         // outgoing dart before incoming ones within a corner
    bool incoming_desc;     // incoming darts by decreasing source distance
    bool point_reverse;     // reverse rotation around the added point
    bool root_swap;         // orient the recovered root edge the other way
    bool null_root_swap;    // same, null case
    bool succ_backward;     // successor scans backward in contour order
    bool root_second;       // root edge arc leaves the root's second corner
};
// Conventions pinned jointly by two oracles: the exhaustive round trip over
// all pointed maps with <= 4 edges, and the label-distance inequality
// (delta <= delta°) over sampled maps, which separates the mirror-mixed
// variants that still round-trip. Both sides of the mobile are read clockwise
// in map orientation (face orbits are clockwise; map-vertex children reversed
// against the rotation), and the corner machinery runs directly on it.
InverseConventions g_inv = {true, true, true, false, false, false, false, false};
bool g_fwd_vertex_forward = false;
bool g_inv_reorient_odd = false;   // re-orient face-vertex children in the inverse
bool g_inv_reorient_even = false;  // re-orient map-vertex children in the inverse

struct AugmentedMap {
    std::vector<int> alpha, rot, orig;   // orig = origin vertex per dart
    std::vector<std::int64_t> vlab2;     // doubled label per vertex
    std::vector<std::uint8_t> is_flag;   // per vertex
    int nverts = 0;
    std::vector<int> flag_of_dart;       // per original dart: flag subdividing its edge, or -1
};

AugmentedMap augment(const HalfEdgeMap& m) {
    AugmentedMap a;
    int n = m.darts();
    a.alpha.assign(m.alpha.begin(), m.alpha.end());
    a.rot.assign(m.rot.begin(), m.rot.end());
    a.orig.assign(m.dart_vertex.begin(), m.dart_vertex.end());
    auto dist = bfs_distance(m, m.pointed);
    a.vlab2.resize(m.V);
    for (int v = 0; v < m.V; ++v) a.vlab2[v] = 2LL * dist[v];
    a.is_flag.assign(m.V, 0);
    a.nverts = m.V;
    a.flag_of_dart.assign(n, -1);
    for (int d = 0; d < n; ++d) {
        int ad = m.alpha[d];
        if (d > ad) continue;
        if (a.vlab2[a.orig[d]] != a.vlab2[a.orig[ad]]) continue;
        // subdivide: flag z with darts n1 (paired with d) and n2 (paired with ad)
        int z = a.nverts++;
        a.vlab2.push_back(a.vlab2[a.orig[d]] + 1);
        a.is_flag.push_back(1);
        a.flag_of_dart[d] = a.flag_of_dart[ad] = z;
        int n1 = int(a.alpha.size());
        int n2 = n1 + 1;
        a.alpha.push_back(d);
        a.alpha.push_back(ad);
        a.alpha[d] = n1;
        a.alpha[ad] = n2;
        a.rot.push_back(n2);
        a.rot.push_back(n1);
        a.orig.push_back(z);
        a.orig.push_back(z);
    }
    return a;
}

}  // namespace

MobileOfMap bdg_forward(const HalfEdgeMap& m, bool flip_face_op) {
    if (m.is_vertex_map()) throw std::invalid_argument("bdg_forward: vertex map has no mobile");
    if (m.pointed < 0) throw std::invalid_argument("bdg_forward: map must be pointed");
    MapSign sign = classify_sign(m);
    if (sign == MapSign::Minus)
        throw std::invalid_argument("bdg_forward: negative map (reverse_root first)");

    AugmentedMap a = augment(m);
    int nd = int(a.alpha.size());

    std::vector<int> rot_inv(nd);
    for (int d = 0; d < nd; ++d) rot_inv[a.rot[d]] = d;
    auto fnext = [&](int d) { return flip_face_op ? rot_inv[a.alpha[d]] : a.rot[a.alpha[d]]; };

    std::vector<int> face_of(nd, -1);
    std::vector<std::vector<int>> face_darts;
    for (int d = 0; d < nd; ++d) {
        if (face_of[d] >= 0) continue;
        int f = int(face_darts.size());
        face_darts.push_back({});
        for (int x = d; face_of[x] < 0; x = fnext(x)) {
            face_of[x] = f;
            face_darts[f].push_back(x);
        }
    }

    auto target = [&](int d) { return a.orig[a.alpha[d]]; };

    // one tree edge per descending dart, joining origin(d) to face_of(d)
    std::vector<int> eid(nd, -1);
    int nedges = 0;
    for (int d = 0; d < nd; ++d)
        if (a.vlab2[a.orig[d]] > a.vlab2[target(d)]) eid[d] = nedges++;

    std::vector<std::vector<int>> around_vertex(a.nverts), around_face(face_darts.size());
    {
        std::vector<int> some_dart(a.nverts, -1);
        for (int d = 0; d < nd; ++d)
            if (some_dart[a.orig[d]] < 0) some_dart[a.orig[d]] = d;
        for (int v = 0; v < a.nverts; ++v) {
            if (some_dart[v] < 0) continue;
            int x = some_dart[v];
            do {
                if (eid[x] >= 0) around_vertex[v].push_back(eid[x]);
                x = a.rot[x];
            } while (x != some_dart[v]);
        }
        // children of map vertices are read against the vertex rotation (the
        // face traversal fixes the face-vertex side; this side is fixed by the
        // delta <= delta° oracle on sampled maps)
        if (!g_fwd_vertex_forward)
            for (auto& L : around_vertex) std::reverse(L.begin(), L.end());
        for (size_t f = 0; f < face_darts.size(); ++f)
            for (int d : face_darts[f])
                if (eid[d] >= 0) around_face[f].push_back(eid[d]);
    }

    std::vector<std::pair<int, int>> ends(nedges);  // (augmented vertex, face)
    for (int d = 0; d < nd; ++d)
        if (eid[d] >= 0) ends[eid[d]] = {a.orig[d], face_of[d]};

    int mobile_count = (a.nverts - 1) + int(face_darts.size());  // all but the point
    if (nedges != mobile_count - 1)
        throw std::runtime_error("bdg_forward: construction is not a tree (edge count)");

    int root_vertex, first_edge;
    if (sign == MapSign::Plus) {
        int d = a.alpha[m.root];  // descending dart e+ -> e-
        root_vertex = a.orig[d];
        if (eid[d] < 0) throw std::runtime_error("bdg_forward: root dart not descending");
        first_edge = eid[d];  // the face left of (e-, e+)
    } else {
        int z = a.flag_of_dart[m.root];
        if (z < 0) throw std::runtime_error("bdg_forward: null root edge not subdivided");
        root_vertex = z;
        int toward_eplus = a.alpha[m.alpha[m.root]];  // z's dart on the e+ side
        if (eid[toward_eplus] < 0) throw std::runtime_error("bdg_forward: flag dart not descending");
        first_edge = eid[toward_eplus];
    }

    // iterative preorder DFS; children of a vertex are its cyclic tree edges
    // read from the one after the parent edge (from the designated first edge
    // at the root)
    struct Node { int id; bool is_face; int via_edge; std::int64_t lab2; int parent_idx; };
    auto ordered_children = [&](int id, bool is_face, int via_edge) {
        const auto& L = is_face ? around_face[id] : around_vertex[id];
        int k = int(L.size());
        std::vector<int> out;
        int want = via_edge < 0 ? first_edge : via_edge;
        int pos = -1;
        for (int i = 0; i < k; ++i)
            if (L[i] == want) { pos = i; break; }
        if (pos < 0) throw std::runtime_error("bdg_forward: inconsistent incidence");
        int from = via_edge < 0 ? 0 : 1;
        for (int i = from; i < k; ++i) out.push_back(L[(pos + i) % k]);
        if (via_edge < 0) {
            // the designated first edge itself is a child edge of the root
        }
        return out;
    };

    std::vector<std::uint8_t> types;
    std::vector<int> ks;
    std::vector<std::int64_t> abs2;
    std::vector<int> parent_idx;
    std::vector<std::int32_t> corresp;

    std::vector<Node> stack;
    stack.push_back({root_vertex, false, -1, a.vlab2[root_vertex], -1});
    while (!stack.empty()) {
        Node node = stack.back();
        stack.pop_back();
        int me = int(types.size());
        if (me > mobile_count) throw std::runtime_error("bdg_forward: construction is not a tree (cycle)");
        auto children = ordered_children(node.id, node.is_face, node.via_edge);
        std::uint8_t ty;
        if (!node.is_face)
            ty = a.is_flag[node.id] ? 2 : 1;
        else
            ty = a.is_flag[ends[node.via_edge].first] ? 4 : 3;
        types.push_back(ty);
        ks.push_back(int(children.size()));
        abs2.push_back(node.lab2);
        parent_idx.push_back(node.parent_idx);
        corresp.push_back(!node.is_face && !a.is_flag[node.id] ? node.id : -1);
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
            int e = *it;
            if (!node.is_face)
                stack.push_back({ends[e].second, true, e, node.lab2, me});
            else {
                int mv = ends[e].first;
                stack.push_back({mv, false, e, a.vlab2[mv], me});
            }
        }
    }
    if (int(types.size()) != mobile_count)
        throw std::runtime_error("bdg_forward: construction is not a tree (disconnected)");

    std::vector<std::int64_t> disp2;
    for (size_t i = 1; i < types.size(); ++i) disp2.push_back(abs2[i] - abs2[parent_idx[i]]);

    MobileOfMap out;
    out.mobile = tree_from_lex(types, ks, disp2);
    out.map_vertex_of = corresp;
    return out;
}

MapOfMobile bdg_inverse(const TypedTree& t, MapSign sign) {
    auto chk = check_mobile(t);
    if (!chk.ok) throw std::invalid_argument("bdg_inverse: invalid mobile: " + chk.why);
    if (sign == MapSign::Plus && t.type[0] != 1)
        throw std::invalid_argument("bdg_inverse: positive mobile must have a type-1 root");
    if (sign == MapSign::Null && t.type[0] != 2)
        throw std::invalid_argument("bdg_inverse: null mobile must have a type-2 root");
    if (sign == MapSign::Minus) throw std::invalid_argument("bdg_inverse: sign must be + or 0");
    if (t.size() == 1)
        throw std::invalid_argument("bdg_inverse: degenerate single-vertex mobile");

    // The mobile convention reads face-vertex children along the face orbit,
    // which runs against the vertex orientation; re-orient those children so
    // the corner machinery works on a coherently embedded tree.
    TypedTree tc;
    std::vector<int> new_of_old(t.size());
    if (!g_inv_reorient_odd && !g_inv_reorient_even) {
        tc = t;
        for (int v = 0; v < t.size(); ++v) new_of_old[v] = v;
    } else {
        std::vector<std::vector<std::int32_t>> kids = t.kids;
        for (int v = 0; v < t.size(); ++v) {
            bool odd = t.type[v] == 3 || t.type[v] == 4;
            if ((odd && g_inv_reorient_odd) || (!odd && g_inv_reorient_even))
                std::reverse(kids[v].begin(), kids[v].end());
        }
        std::vector<int> order;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
        }
        std::vector<std::uint8_t> types;
        std::vector<int> ks;
        std::vector<std::int64_t> d2;
        for (size_t i = 0; i < order.size(); ++i) {
            types.push_back(t.type[order[i]]);
            ks.push_back(int(kids[order[i]].size()));
            if (i > 0) d2.push_back(t.disp2[order[i]]);
        }
        tc = tree_from_lex(types, ks, d2);
        for (int i = 0; i < int(order.size()); ++i) new_of_old[order[i]] = i;
    }

    auto l2 = tc.labels2();

    // corners of labeled (type 1/2) vertices in contour order
    std::vector<int> corner_vertex;
    {
        auto theta = contour(tc);
        for (size_t i = 0; i + 1 < theta.size(); ++i) {
            int v = theta[i];
            if (tc.type[v] == 1 || tc.type[v] == 2) corner_vertex.push_back(v);
        }
    }
    int P = int(corner_vertex.size());
    if (P == 0) throw std::invalid_argument("bdg_inverse: no labeled corners");

    // successor: first later corner (cyclically) at label lab2 - step
    std::vector<int> succ(P, -1);  // -1 = the added point
    {
        std::map<std::int64_t, std::vector<int>> by_label;
        for (int p = 0; p < P; ++p) by_label[l2[corner_vertex[p]]].push_back(p);
        for (int p = 0; p < P; ++p) {
            std::int64_t want = l2[corner_vertex[p]] - (tc.type[corner_vertex[p]] == 1 ? 2 : 1);
            auto it = by_label.find(want);
            if (it == by_label.end()) continue;
            const auto& ps = it->second;
            if (!g_inv.succ_backward) {
                auto jt = std::upper_bound(ps.begin(), ps.end(), p);
                succ[p] = (jt == ps.end()) ? ps.front() : *jt;
            } else {
                auto jt = std::lower_bound(ps.begin(), ps.end(), p);
                succ[p] = (jt == ps.begin()) ? ps.back() : *std::prev(jt);
            }
        }
    }

    // one arc per corner; darts 2p (at source) and 2p+1 (at target)
    std::vector<std::vector<int>> incoming(P);
    std::vector<int> point_incoming;
    for (int p = 0; p < P; ++p) {
        if (succ[p] >= 0)
            incoming[succ[p]].push_back(p);
        else
            point_incoming.push_back(p);
    }
    if (point_incoming.empty()) throw std::runtime_error("bdg_inverse: no arc reaches the point");

    int nd = 2 * P;
    std::vector<int> alpha(nd), rot(nd, -1);
    for (int p = 0; p < P; ++p) {
        alpha[2 * p] = 2 * p + 1;
        alpha[2 * p + 1] = 2 * p;
    }

    std::vector<std::vector<int>> corners_of(tc.size());
    for (int p = 0; p < P; ++p) corners_of[corner_vertex[p]].push_back(p);

    auto corner_darts = [&](int p) {
        std::vector<int> ds;
        auto inc = incoming[p];
        std::sort(inc.begin(), inc.end(), [&](int x, int y) {
            int dx = (p - x + P) % P, dy = (p - y + P) % P;
            return g_inv.incoming_desc ? dx > dy : dx < dy;
        });
        if (g_inv.out_first) ds.push_back(2 * p);
        for (int s : inc) ds.push_back(2 * s + 1);
        if (!g_inv.out_first) ds.push_back(2 * p);
        return ds;
    };

    std::vector<std::vector<int>> vertex_cycle(tc.size());
    for (int v = 0; v < tc.size(); ++v) {
        if (corners_of[v].empty()) continue;
        auto cs = corners_of[v];
        if (g_inv.corner_reverse) std::reverse(cs.begin(), cs.end());
        for (int p : cs)
            for (int d : corner_darts(p)) vertex_cycle[v].push_back(d);
    }
    std::vector<int> point_cycle;
    {
        auto ps = point_incoming;
        if (g_inv.point_reverse) std::reverse(ps.begin(), ps.end());
        for (int p : ps) point_cycle.push_back(2 * p + 1);
    }

    auto close_cycle = [&](const std::vector<int>& cyc) {
        for (size_t i = 0; i < cyc.size(); ++i) rot[cyc[i]] = cyc[(i + 1) % cyc.size()];
    };
    for (int v = 0; v < tc.size(); ++v)
        if (!vertex_cycle[v].empty()) close_cycle(vertex_cycle[v]);
    close_cycle(point_cycle);

    // contract flags (each has exactly its two outgoing darts)
    std::vector<char> dead(nd, 0);
    for (int v = 0; v < tc.size(); ++v) {
        if (tc.type[v] != 2) continue;
        auto& cyc = vertex_cycle[v];
        if (cyc.size() != 2) throw std::runtime_error("bdg_inverse: flag degree != 2");
        int d1 = cyc[0], d2 = cyc[1];
        int o1 = alpha[d1], o2 = alpha[d2];
        alpha[o1] = o2;
        alpha[o2] = o1;
        dead[d1] = dead[d2] = 1;
    }

    int root_dart;
    if (sign == MapSign::Plus) {
        int rc = new_of_old[0];
        int which = g_inv.root_second && corners_of[rc].size() > 1 ? 1 : 0;
        int p0 = corners_of[rc][which];
        root_dart = g_inv.root_swap ? 2 * p0 : alpha[2 * p0];
    } else {
        auto& cyc = vertex_cycle[new_of_old[0]];  // the contracted root flag
        int a1 = alpha[cyc[0]], a2 = alpha[cyc[1]];
        root_dart = g_inv.null_root_swap ? a2 : a1;
    }

    std::vector<int> newid(nd, -1);
    int live = 0;
    for (int d = 0; d < nd; ++d)
        if (!dead[d]) newid[d] = live++;
    HalfEdgeMap m;
    m.alpha.resize(live);
    m.rot.resize(live);
    for (int d = 0; d < nd; ++d) {
        if (dead[d]) continue;
        m.alpha[newid[d]] = newid[alpha[d]];
        m.rot[newid[d]] = newid[rot[d]];
    }
    m.root = newid[root_dart];
    m.finalize();

    MapOfMobile out;
    out.map_vertex_of.assign(t.size(), -1);
    for (int v = 0; v < t.size(); ++v) {
        int w = new_of_old[v];
        if (t.type[v] == 1 && !vertex_cycle[w].empty())
            out.map_vertex_of[v] = m.dart_vertex[newid[vertex_cycle[w][0]]];
    }
    out.pointed_vertex = m.dart_vertex[newid[point_cycle[0]]];
    m.pointed = out.pointed_vertex;
    m.check_valid();
    out.map = std::move(m);
    return out;
}

BoltzmannSample boltzmann_sample(const MobileParams& params, int n_vertices, MapSign sign, Rng& rng,
                                 long long attempt_cap) {
    MobileSampler sampler(params);
    TypedTree mobile = sampler.sample(n_vertices - 1, sign, rng, attempt_cap);
    auto inv = bdg_inverse(mobile, sign);
    if (inv.map.V != n_vertices) throw std::runtime_error("boltzmann_sample: vertex count mismatch");
    BoltzmannSample out;
    out.map = std::move(inv.map);
    out.mobile = std::move(mobile);
    out.map_vertex_of = std::move(inv.map_vertex_of);
    return out;
}

std::string canonical_pointed_form(const HalfEdgeMap& m) {
    if (m.is_vertex_map()) return "vertexmap|pt";
    std::string base = canonical_form(m);
    int n = m.darts();
    std::vector<int> label(n, -1);
    std::vector<int> order;
    label[m.root] = 0;
    order.push_back(m.root);
    for (size_t i = 0; i < order.size(); ++i) {
        int d = order[i];
        for (int e : {m.alpha[d], m.rot[d]})
            if (label[e] < 0) {
                label[e] = int(order.size());
                order.push_back(e);
            }
    }
    int pt = -1;
    if (m.pointed >= 0) {
        pt = n;
        for (int d = 0; d < n; ++d)
            if (m.dart_vertex[d] == m.pointed) pt = std::min(pt, label[d]);
    }
    return base + "|pt:" + std::to_string(pt);
}

namespace detail {
void set_inverse_conventions(bool corner_reverse, bool out_first, bool incoming_desc,
                             bool point_reverse, bool root_swap, bool null_root_swap,
                             bool succ_backward, bool root_second) {
    g_inv = {corner_reverse, out_first, incoming_desc, point_reverse, root_swap, null_root_swap,
             succ_backward, root_second};
}
void set_forward_vertex_forward(bool forward) { g_fwd_vertex_forward = forward; }
void set_inverse_reorientation(bool odd, bool even) {
    g_inv_reorient_odd = odd;
    g_inv_reorient_even = even;
}
}  // namespace detail

}  // namespace mobmap
