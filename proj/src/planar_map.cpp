#include "mobmap/planar_map.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mobmap {

void HalfEdgeMap::finalize() {
    int n = darts();
    dart_vertex.assign(n, -1);
    V = 0;
    for (int d = 0; d < n; ++d) {
        if (dart_vertex[d] >= 0) continue;
        int v = V++;
        int x = d;
        do {
            dart_vertex[x] = v;
            x = rot[x];
        } while (x != d);
    }
    if (n == 0) V = 1;
}

void HalfEdgeMap::check_valid() const {
    int n = darts();
    if (n == 0) {
        if (pointed > 0) throw std::invalid_argument("map: bad pointed vertex");
        return;
    }
    if (int(rot.size()) != n) throw std::invalid_argument("map: rot size");
    for (int d = 0; d < n; ++d) {
        if (alpha[d] < 0 || alpha[d] >= n || alpha[d] == d || alpha[alpha[d]] != d)
            throw std::invalid_argument("map: alpha not a fixed-point-free involution");
        if (rot[d] < 0 || rot[d] >= n) throw std::invalid_argument("map: rot out of range");
    }
    std::vector<char> hit(n, 0);
    for (int d = 0; d < n; ++d) hit[rot[d]]++;
    for (int d = 0; d < n; ++d)
        if (hit[d] != 1) throw std::invalid_argument("map: rot not a permutation");
    // connectivity on darts under <alpha, rot>
    std::vector<char> vis(n, 0);
    std::deque<int> q{0};
    vis[0] = 1;
    int seen = 1;
    while (!q.empty()) {
        int d = q.front();
        q.pop_front();
        for (int e : {alpha[d], rot[d]})
            if (!vis[e]) {
                vis[e] = 1;
                seen++;
                q.push_back(e);
            }
    }
    if (seen != n) throw std::invalid_argument("map: not connected");
    if (root < 0 || root >= n) throw std::invalid_argument("map: bad root dart");
    // Euler characteristic (planarity)
    int F = int(faces().size());
    if (V - edges() + F != 2) throw std::invalid_argument("map: not planar (Euler)");
    if (pointed >= V) throw std::invalid_argument("map: bad pointed vertex");
}

std::vector<std::vector<std::int32_t>> HalfEdgeMap::faces() const {
    int n = darts();
    std::vector<std::vector<std::int32_t>> fs;
    std::vector<char> vis(n, 0);
    for (int d = 0; d < n; ++d) {
        if (vis[d]) continue;
        fs.push_back({});
        int x = d;
        do {
            vis[x] = 1;
            fs.back().push_back(x);
            x = rot[alpha[x]];
        } while (x != d);
    }
    return fs;
}

int HalfEdgeMap::face_of_dart(int d) const {
    auto fs = faces();
    for (int i = 0; i < int(fs.size()); ++i)
        for (int x : fs[i])
            if (x == d) return i;
    return -1;
}

HalfEdgeMap HalfEdgeMap::vertex_map() {
    HalfEdgeMap m;
    m.V = 1;
    m.root = -1;
    return m;
}

std::vector<int> face_degrees(const HalfEdgeMap& m) {
    if (m.is_vertex_map()) return {0};
    std::vector<int> out;
    for (auto& f : m.faces()) out.push_back(int(f.size()));
    std::sort(out.begin(), out.end());
    return out;
}

double WeightSeq::weight_of_degree(int deg) const {
    for (auto& [d, w] : q)
        if (d == deg) return w;
    return 0.0;
}

int WeightSeq::max_degree() const {
    int m = 0;
    for (auto& [d, w] : q)
        if (w > 0) m = std::max(m, d);
    return m;
}

bool WeightSeq::admissible_odd() const {
    for (auto& [d, w] : q)
        if (d >= 3 && d % 2 == 1 && w > 0) return true;
    return false;
}

double boltzmann_weight(const HalfEdgeMap& m, const WeightSeq& q) {
    if (m.is_vertex_map()) return 1.0;
    double w = 1.0;
    for (int deg : face_degrees(m)) w *= q.weight_of_degree(deg);
    return w;
}

std::vector<int> bfs_distance(const HalfEdgeMap& m, int v) {
    std::vector<int> dist(m.V, -1);
    dist[v] = 0;
    if (m.is_vertex_map()) return dist;
    // vertex adjacency via darts
    std::vector<std::vector<int>> out(m.V);
    for (int d = 0; d < m.darts(); ++d) out[m.dart_vertex[d]].push_back(m.dart_vertex[m.alpha[d]]);
    std::deque<int> q{v};
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : out[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

MapSign classify_sign(const HalfEdgeMap& m) {
    if (m.pointed < 0) throw std::invalid_argument("classify_sign: map is not pointed");
    if (m.is_vertex_map()) return MapSign::Plus;
    auto dist = bfs_distance(m, m.pointed);
    int dm = dist[m.root_tail()], dp = dist[m.root_head()];
    if (dm == dp) return MapSign::Null;
    return dm == dp - 1 ? MapSign::Plus : MapSign::Minus;
}

HalfEdgeMap reverse_root(const HalfEdgeMap& m) {
    if (m.is_vertex_map()) throw std::invalid_argument("reverse_root: vertex map has no root edge");
    HalfEdgeMap r = m;
    r.root = m.alpha[m.root];
    return r;
}

std::string canonical_form(const HalfEdgeMap& m) {
    if (m.is_vertex_map()) return "vertexmap";
    int n = m.darts();
    std::vector<int> label(n, -1);
    std::vector<int> order;
    label[m.root] = 0;
    order.push_back(m.root);
    // BFS over darts with deterministic generator order (alpha then rot)
    for (size_t i = 0; i < order.size(); ++i) {
        int d = order[i];
        for (int e : {m.alpha[d], m.rot[d]})
            if (label[e] < 0) {
                label[e] = int(order.size());
                order.push_back(e);
            }
    }
    std::string s;
    s.reserve(n * 6);
    for (int i = 0; i < n; ++i) {
        s += std::to_string(label[m.alpha[order[i]]]);
        s += ',';
        s += std::to_string(label[m.rot[order[i]]]);
        s += ';';
    }
    return s;
}

static bool degrees_ok(const HalfEdgeMap& m, const std::set<int>& degrees) {
    if (degrees.empty()) return true;
    for (int d : face_degrees(m))
        if (!degrees.count(d)) return false;
    return true;
}

std::vector<HalfEdgeMap> enumerate_maps(int max_edges, const std::set<int>& degrees) {
    if (max_edges > 6) throw std::invalid_argument("enumerate_maps: cap is 6 edges");
    std::vector<HalfEdgeMap> out;
    {
        HalfEdgeMap vm = HalfEdgeMap::vertex_map();
        if (degrees.empty() || degrees.count(0)) out.push_back(vm);
    }
    for (int E = 1; E <= max_edges; ++E) {
        int n = 2 * E;
        // alpha fixed to the standard pairing, root fixed to dart 0; every rooted
        // map admits such a labeling, and canonical forms dedupe the repeats.
        std::vector<int> alpha(n), rotp(n);
        for (int i = 0; i < E; ++i) {
            alpha[2 * i] = 2 * i + 1;
            alpha[2 * i + 1] = 2 * i;
        }
        std::iota(rotp.begin(), rotp.end(), 0);
        std::set<std::string> seen;
        do {
            // connectivity over <alpha, rot>
            std::vector<char> vis(n, 0);
            int stack[12], top = 0;
            stack[top++] = 0;
            vis[0] = 1;
            int cnt = 1;
            while (top) {
                int d = stack[--top];
                int e1 = alpha[d], e2 = rotp[d];
                if (!vis[e1]) { vis[e1] = 1; cnt++; stack[top++] = e1; }
                if (!vis[e2]) { vis[e2] = 1; cnt++; stack[top++] = e2; }
            }
            if (cnt != n) continue;
            // genus-0 check: V - E + F = 2
            int V = 0, F = 0;
            {
                std::vector<char> dv(n, 0);
                for (int d = 0; d < n; ++d)
                    if (!dv[d]) {
                        V++;
                        for (int x = d; !dv[x]; x = rotp[x]) dv[x] = 1;
                    }
                std::vector<char> df(n, 0);
                for (int d = 0; d < n; ++d)
                    if (!df[d]) {
                        F++;
                        for (int x = d; !df[x]; x = rotp[alpha[x]]) df[x] = 1;
                    }
            }
            if (V - E + F != 2) continue;
            HalfEdgeMap m;
            m.alpha.assign(alpha.begin(), alpha.end());
            m.rot.assign(rotp.begin(), rotp.end());
            m.root = 0;
            m.finalize();
            if (!degrees_ok(m, degrees)) continue;
            std::string key = canonical_form(m);
            if (seen.insert(key).second) out.push_back(std::move(m));
        } while (std::next_permutation(rotp.begin(), rotp.end()));
    }
    return out;
}

std::vector<HalfEdgeMap> enumerate_pointed_maps(int max_edges, const std::set<int>& degrees) {
    std::vector<HalfEdgeMap> out;
    for (auto& m : enumerate_maps(max_edges, degrees))
        for (int v = 0; v < m.V; ++v) {
            HalfEdgeMap p = m;
            p.pointed = v;
            out.push_back(std::move(p));
        }
    return out;
}

std::string map_to_text(const HalfEdgeMap& m) {
    std::ostringstream os;
    os << "E " << m.edges() << "\n";
    os << "alpha";
    for (int x : m.alpha) os << ' ' << x;
    os << "\nrot";
    for (int x : m.rot) os << ' ' << x;
    os << "\nroot " << m.root << "\npoint " << m.pointed << "\n";
    return os.str();
}

HalfEdgeMap map_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    HalfEdgeMap m;
    int E = -1;
    while (is >> tok) {
        if (tok == "E") {
            is >> E;
            m.alpha.resize(2 * E);
            m.rot.resize(2 * E);
        } else if (tok == "alpha") {
            for (auto& x : m.alpha) is >> x;
        } else if (tok == "rot") {
            for (auto& x : m.rot) is >> x;
        } else if (tok == "root") {
            is >> m.root;
        } else if (tok == "point") {
            is >> m.pointed;
        } else {
            throw std::invalid_argument("map_from_text: unknown token " + tok);
        }
    }
    if (E < 0) throw std::invalid_argument("map_from_text: missing E");
    m.finalize();
    if (E > 0) m.check_valid();
    return m;
}

}  // namespace mobmap
