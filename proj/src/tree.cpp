#include "mobmap/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mobmap {

std::vector<int> TypedTree::address(int v) const {
    std::vector<int> path;
    while (parent[v] >= 0) {
        int p = parent[v];
        const auto& ks = kids[p];
        int idx = int(std::lower_bound(ks.begin(), ks.end(), v) - ks.begin());
        path.push_back(idx + 1);
        v = p;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::string TypedTree::address_str(int v) const {
    auto a = address(v);
    if (a.empty()) return "e";  // root
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(a[i]);
    }
    return s;
}

int TypedTree::at_address(const std::vector<int>& addr) const {
    int v = 0;
    for (int step : addr) {
        if (step < 1 || step > kcount(v)) return -1;
        v = kids[v][step - 1];
    }
    return v;
}

std::vector<std::int64_t> TypedTree::labels2() const {
    std::vector<std::int64_t> l(size());
    l[0] = 0;
    for (int v = 1; v < size(); ++v) l[v] = l[parent[v]] + disp2[v];
    return l;
}

std::vector<std::int32_t> TypedTree::depths() const {
    std::vector<std::int32_t> d(size());
    d[0] = 0;
    for (int v = 1; v < size(); ++v) d[v] = d[parent[v]] + 1;
    return d;
}

int TypedTree::height() const {
    auto d = depths();
    return *std::max_element(d.begin(), d.end());
}

void TypedTree::check_valid() const {
    int n = size();
    if (n < 1) throw std::invalid_argument("tree: empty");
    if (int(type.size()) != n || int(disp2.size()) != n || int(kids.size()) != n)
        throw std::invalid_argument("tree: inconsistent array sizes");
    if (parent[0] != -1 || disp2[0] != 0) throw std::invalid_argument("tree: bad root");
    for (int v = 1; v < n; ++v) {
        if (parent[v] < 0 || parent[v] >= v) throw std::invalid_argument("tree: bad parent order");
    }
    std::vector<int> seen(n, 0);
    for (int v = 0; v < n; ++v)
        for (int c : kids[v]) {
            if (c <= v || c >= n || parent[c] != v) throw std::invalid_argument("tree: bad child link");
            seen[c]++;
        }
    for (int v = 1; v < n; ++v)
        if (seen[v] != 1) throw std::invalid_argument("tree: child multiplicity");
}

TypedTree tree_from_lex(const std::vector<std::uint8_t>& types,
                        const std::vector<int>& kcounts,
                        const std::vector<std::int64_t>& disp2_nonroot) {
    int n = int(kcounts.size());
    if (n < 1) throw std::invalid_argument("tree_from_lex: empty");
    if (int(types.size()) != n) throw std::invalid_argument("tree_from_lex: types size");
    if (int(disp2_nonroot.size()) != n - 1) throw std::invalid_argument("tree_from_lex: disp2 size");

    TypedTree t;
    t.parent.assign(n, -1);
    t.type = types;
    t.disp2.assign(n, 0);
    t.kids.assign(n, {});
    // preorder reconstruction: stack of (vertex, children still owed)
    std::vector<std::pair<int, int>> stack;
    stack.push_back({0, kcounts[0]});
    for (int v = 1; v < n; ++v) {
        while (!stack.empty() && stack.back().second == 0) stack.pop_back();
        if (stack.empty()) throw std::invalid_argument("tree_from_lex: child counts do not form a tree");
        int p = stack.back().first;
        stack.back().second--;
        t.parent[v] = p;
        t.kids[p].push_back(v);
        t.disp2[v] = disp2_nonroot[v - 1];
        stack.push_back({v, kcounts[v]});
    }
    while (!stack.empty() && stack.back().second == 0) stack.pop_back();
    if (!stack.empty()) throw std::invalid_argument("tree_from_lex: child counts exceed vertex count");
    return t;
}

TypedTree tree_from_kcounts(const std::vector<int>& kcounts, std::uint8_t type) {
    std::vector<std::uint8_t> types(kcounts.size(), type);
    std::vector<std::int64_t> d(kcounts.empty() ? 0 : kcounts.size() - 1, 0);
    return tree_from_lex(types, kcounts, d);
}

std::vector<std::int32_t> contour(const TypedTree& t) {
    int n = t.size();
    std::vector<std::int32_t> theta;
    theta.reserve(2 * n - 1);
    std::vector<int> next_child(n, 0);
    int v = 0;
    theta.push_back(0);
    for (int step = 1; step <= 2 * n - 2; ++step) {
        if (next_child[v] < t.kcount(v)) {
            v = t.kids[v][next_child[v]++];
        } else {
            v = t.parent[v];
        }
        theta.push_back(v);
    }
    return theta;
}

std::vector<std::vector<int>> tree_distance_matrix(const TypedTree& t) {
    int n = t.size();
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, 0));
    for (int s = 0; s < n; ++s) {
        auto& row = dist[s];
        std::vector<char> vis(n, 0);
        std::deque<int> q{s};
        vis[s] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            auto relax = [&](int w) {
                if (w >= 0 && !vis[w]) {
                    vis[w] = 1;
                    row[w] = row[u] + 1;
                    q.push_back(w);
                }
            };
            relax(t.parent[u]);
            for (int c : t.kids[u]) relax(c);
        }
    }
    return dist;
}

double PathFunction::at(double x) const {
    if (x < 0.0 || x > 1.0) throw std::domain_error("PathFunction: argument outside [0,1]");
    double pos = x * N;
    int i = int(std::floor(pos));
    if (i >= N) return v[N];
    double frac = pos - i;
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

double PathFunction::interval_min(double a, double b) const {
    if (a > b) std::swap(a, b);
    double m = std::min(at(a), at(b));
    int lo = int(std::ceil(a * N));
    int hi = int(std::floor(b * N));
    for (int i = std::max(lo, 0); i <= std::min(hi, N); ++i) m = std::min(m, v[i]);
    return m;
}

double PathFunction::interval_max(double a, double b) const {
    if (a > b) std::swap(a, b);
    double m = std::max(at(a), at(b));
    int lo = int(std::ceil(a * N));
    int hi = int(std::floor(b * N));
    for (int i = std::max(lo, 0); i <= std::min(hi, N); ++i) m = std::max(m, v[i]);
    return m;
}

double PathFunction::sup_abs() const {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

bool PathFunction::is_excursion(double tol) const {
    if (std::fabs(v.front()) > tol || std::fabs(v.back()) > tol) return false;
    for (double x : v)
        if (x < -tol) return false;
    return true;
}

PathFunction PathFunction::zero(int N) {
    PathFunction f;
    f.N = N;
    f.v.assign(N + 1, 0.0);
    return f;
}

PathFunction contour_process(const TypedTree& t) {
    if (t.size() == 1) return PathFunction::zero();
    auto theta = contour(t);
    auto d = t.depths();
    PathFunction f;
    f.N = 2 * t.size() - 2;
    f.v.resize(f.N + 1);
    for (int i = 0; i <= f.N; ++i) f.v[i] = d[theta[i]];
    return f;
}

PathFunction label_process(const TypedTree& t) {
    if (t.size() == 1) return PathFunction::zero();
    auto theta = contour(t);
    auto l2 = t.labels2();
    PathFunction f;
    f.N = 2 * t.size() - 2;
    f.v.resize(f.N + 1);
    for (int i = 0; i <= f.N; ++i) f.v[i] = double(l2[theta[i]]) / 2.0;
    return f;
}

std::pair<PathFunction, PathFunction> height_lex_processes(const TypedTree& t) {
    int n = t.size();
    auto d = t.depths();
    auto l2 = t.labels2();
    PathFunction H, S;
    H.N = S.N = n;
    H.v.resize(n + 1);
    S.v.resize(n + 1);
    for (int i = 0; i < n; ++i) {
        H.v[i] = d[i];
        S.v[i] = double(l2[i]) / 2.0;
    }
    H.v[n] = 0.0;  // v_{|t|} wraps to the root
    S.v[n] = 0.0;
    return {H, S};
}

PathFunction type_count_process(const TypedTree& t, std::uint8_t q) {
    if (t.size() == 1) {
        return PathFunction::zero();  // same degenerate convention as C and Z
    }
    auto theta = contour(t);
    std::vector<char> visited(t.size(), 0);
    PathFunction f;
    f.N = 2 * t.size() - 2;
    f.v.resize(f.N + 1);
    long long count = 0;
    f.v[0] = 0;
    for (int i = 1; i <= f.N; ++i) {
        int u = theta[i - 1];
        if (!visited[u]) {
            visited[u] = 1;
            if (t.type[u] == q) count++;
        }
        f.v[i] = double(count);
    }
    return f;
}

double dist_on_contour(const PathFunction& C, double x, double y) {
    if (x < 0 || x > 1 || y < 0 || y > 1) throw std::domain_error("dist_on_contour: outside [0,1]");
    return C.at(x) + C.at(y) - 2.0 * C.interval_min(x, y);
}

int vertex_at(const TypedTree& t, double y) {
    if (t.size() < 2) throw std::invalid_argument("vertex_at: tree has no non-root vertex");
    if (y < 0.0 || y >= 1.0) throw std::domain_error("vertex_at: y outside [0,1)");
    int n = 2 * t.size() - 2;
    int i = int(std::floor(n * y));
    auto theta = contour(t);
    int a = theta[i], b = theta[i + 1];
    auto d = t.depths();
    return d[a] >= d[b] ? a : b;
}

LexTimeChange lex_time_change(const TypedTree& t) {
    int n = t.size();
    if (n < 2) throw std::invalid_argument("lex_time_change: needs |t| >= 2");
    auto d = t.depths();
    LexTimeChange tc;
    tc.j.resize(n + 1);
    for (int i = 0; i < n; ++i) tc.j[i] = 2LL * i - d[i];
    tc.j[n] = 2LL * n - 2;
    int N = 2 * n - 2;
    tc.phi.N = N;
    tc.phi.v.resize(N + 1);
    // j is strictly increasing, so sup{i : j(i) <= s N} advances monotonically
    int i = 0;
    for (int k = 0; k <= N; ++k) {
        while (i + 1 <= n && tc.j[i + 1] <= k) ++i;
        tc.phi.v[k] = double(i) / double(n);
    }
    return tc;
}

bool check_tree_like(const TreeLikePath& p) {
    double tol = p.tolerance;
    if (!p.zeta.is_excursion(tol)) return false;
    if (std::fabs(p.f.at(0.0)) > tol || std::fabs(p.f.at(1.0)) > tol) return false;
    std::vector<double> grid;
    for (int i = 0; i <= p.zeta.N; ++i) grid.push_back(double(i) / p.zeta.N);
    if (p.f.N != p.zeta.N)
        for (int i = 0; i <= p.f.N; ++i) grid.push_back(double(i) / p.f.N);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    int m = int(grid.size());
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            double dz = dist_on_contour(p.zeta, grid[a], grid[b]);
            if (dz <= tol && std::fabs(p.f.at(grid[a]) - p.f.at(grid[b])) > tol) return false;
        }
    return true;
}

std::string canonical_key(const TypedTree& t) {
    std::string s;
    for (int v = 0; v < t.size(); ++v) {
        s += std::to_string(int(t.type[v]));
        s += ':';
        s += std::to_string(t.kcount(v));
        s += ':';
        s += std::to_string((long long)t.disp2[v]);
        s += ';';
    }
    return s;
}

std::string tree_to_json(const TypedTree& t) {
    nlohmann::json j;
    j["types"] = std::vector<int>(t.type.begin(), t.type.end());
    std::vector<int> ks(t.size());
    for (int v = 0; v < t.size(); ++v) ks[v] = t.kcount(v);
    j["children"] = ks;
    std::vector<long long> d;
    for (int v = 1; v < t.size(); ++v) d.push_back((long long)t.disp2[v]);
    j["disp2"] = d;
    return j.dump();
}

TypedTree tree_from_json(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    std::vector<int> ti = j.at("types").get<std::vector<int>>();
    std::vector<std::uint8_t> types(ti.begin(), ti.end());
    std::vector<int> ks = j.at("children").get<std::vector<int>>();
    std::vector<std::int64_t> d = j.at("disp2").get<std::vector<std::int64_t>>();
    return tree_from_lex(types, ks, d);
}

std::string path_to_csv(const PathFunction& f) {
    std::ostringstream os;
    os << "s,value\n";
    os.precision(17);
    for (int i = 0; i <= f.N; ++i) os << double(i) / f.N << "," << f.v[i] << "\n";
    return os.str();
}

std::vector<std::vector<int>> plane_tree_profiles(int n) {
    // Enumerate Lukasiewicz-style: choose k(v) for v = 0..n-1 in preorder such
    // that the running count of owed children stays positive until the end.
    std::vector<std::vector<int>> out;
    std::vector<int> acc;
    acc.reserve(n);
    std::function<void(int, int)> rec = [&](int placed, int owed) {
        if (placed == n) {
            if (owed == 0) out.push_back(acc);
            return;
        }
        if (owed == 0) return;
        int restv = n - placed;  // vertices left to place, including this one
        for (int k = 0; k <= restv - owed; ++k) {
            acc.push_back(k);
            rec(placed + 1, owed - 1 + k);
            acc.pop_back();
        }
    };
    rec(0, 1);
    return out;
}

}  // namespace mobmap
