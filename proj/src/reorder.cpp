#include "mobmap/reorder.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace mobmap {

ChildPerms ChildPerms::identity(const TypedTree& t) {
    ChildPerms p;
    p.perm.resize(t.size());
    for (int v = 0; v < t.size(); ++v) {
        p.perm[v].resize(t.kcount(v));
        for (int i = 0; i < t.kcount(v); ++i) p.perm[v][i] = i;
    }
    return p;
}

static void shuffle_perm(std::vector<int>& p, Rng& rng) {
    for (int i = int(p.size()) - 1; i > 0; --i) {
        int j = int(rng.below(i + 1));
        std::swap(p[i], p[j]);
    }
}

ChildPerms ChildPerms::uniform(const TypedTree& t, Rng& rng) {
    ChildPerms p = identity(t);
    for (auto& pv : p.perm) shuffle_perm(pv, rng);
    return p;
}

ChildPerms ChildPerms::uniform_fixing(const TypedTree& t, const std::vector<char>& fixed, Rng& rng) {
    ChildPerms p = identity(t);
    for (int v = 0; v < t.size(); ++v)
        if (!fixed[v]) shuffle_perm(p.perm[v], rng);
    return p;
}

void ChildPerms::check_bound(const TypedTree& t) const {
    if (int(perm.size()) != t.size()) throw std::invalid_argument("ChildPerms: size mismatch");
    for (int v = 0; v < t.size(); ++v) {
        if (int(perm[v].size()) != t.kcount(v)) throw std::invalid_argument("ChildPerms: arity mismatch");
        std::vector<char> seen(perm[v].size(), 0);
        for (int x : perm[v]) {
            if (x < 0 || x >= int(perm[v].size()) || seen[x]) throw std::invalid_argument("ChildPerms: not a permutation");
            seen[x] = 1;
        }
    }
}

PermutedTree apply_permutation(const TypedTree& t, const ChildPerms& sigma) {
    sigma.check_bound(t);
    int n = t.size();
    PermutedTree out;
    out.new_of_old.assign(n, -1);
    auto& nt = out.tree;
    nt.parent.reserve(n);
    nt.type.reserve(n);
    nt.disp2.reserve(n);
    nt.kids.reserve(n);

    // DFS in the *new* plane order, allocating new indices in preorder.
    struct Frame { int old_v; int new_parent; std::int64_t d2; };
    std::vector<Frame> stack{{0, -1, 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        int nv = nt.size();
        nt.parent.push_back(f.new_parent);
        nt.type.push_back(t.type[f.old_v]);
        nt.disp2.push_back(f.d2);
        nt.kids.push_back({});
        if (f.new_parent >= 0) nt.kids[f.new_parent].push_back(nv);
        out.new_of_old[f.old_v] = nv;
        int k = t.kcount(f.old_v);
        // reordered children: position sigma[v][i] holds old child i
        std::vector<int> ordered(k);
        for (int i = 0; i < k; ++i) ordered[sigma.perm[f.old_v][i]] = t.kids[f.old_v][i];
        for (int i = k - 1; i >= 0; --i) stack.push_back({ordered[i], nv, t.disp2[ordered[i]]});
    }
    return out;
}

ChildPerms invert_perm(const TypedTree& t, const ChildPerms& sigma) {
    sigma.check_bound(t);
    auto mapped = apply_permutation(t, sigma);
    ChildPerms inv;
    inv.perm.resize(t.size());
    for (int v = 0; v < t.size(); ++v) {
        int nv = mapped.new_of_old[v];
        auto& pv = inv.perm[nv];
        pv.resize(sigma.perm[v].size());
        for (int i = 0; i < int(pv.size()); ++i) pv[sigma.perm[v][i]] = i;
    }
    return inv;
}

TypedTree sample_symmetrization(const TypedTree& t, Rng& rng) {
    return apply_permutation(t, ChildPerms::uniform(t, rng)).tree;
}

static std::vector<char> ancestor_closure(const TypedTree& t, const std::vector<int>& samples) {
    std::vector<char> keep(t.size(), 0);
    for (int s : samples) {
        if (s < 0 || s >= t.size()) throw std::invalid_argument("unknown vertex in sample vector");
        for (int v = s; v >= 0 && !keep[v]; v = t.parent[v]) keep[v] = 1;
    }
    return keep;
}

SpannedSubtree spanning_subtree(const TypedTree& t, const std::vector<int>& samples) {
    auto keep = ancestor_closure(t, samples);
    SpannedSubtree out;
    std::vector<std::int32_t> sub_of_orig(t.size(), -1);
    for (int v = 0; v < t.size(); ++v) {
        if (!keep[v]) continue;
        int sv = out.sub.size();
        sub_of_orig[v] = sv;
        out.orig_of_sub.push_back(v);
        out.sub.parent.push_back(v == 0 ? -1 : sub_of_orig[t.parent[v]]);
        out.sub.type.push_back(t.type[v]);
        out.sub.disp2.push_back(v == 0 ? 0 : t.disp2[v]);
        out.sub.kids.push_back({});
        if (v != 0) out.sub.kids[sub_of_orig[t.parent[v]]].push_back(sv);
    }
    for (int s : samples) out.sample_vertex.push_back(sub_of_orig[s]);
    for (int sv = 0; sv < out.sub.size(); ++sv)
        if (out.sub.kcount(sv) >= 2) out.branch_orig.push_back(out.orig_of_sub[sv]);
    return out;
}

std::string spanned_to_json(const SpannedSubtree& s) {
    nlohmann::json j = nlohmann::json::parse(tree_to_json(s.sub));
    nlohmann::json u = nlohmann::json::array();
    for (auto v : s.sample_vertex) u.push_back(s.sub.address_str(v));
    j["samples"] = u;
    return j.dump();
}

std::vector<std::int32_t> branchpoints(const TypedTree& t, const std::vector<int>& samples) {
    return spanning_subtree(t, samples).branch_orig;
}

SpannedSubtree zero_branch_displacements(const SpannedSubtree& s) {
    SpannedSubtree out = s;
    for (int v = 0; v < out.sub.size(); ++v)
        if (out.sub.kcount(v) >= 2)
            for (int c : out.sub.kids[v]) out.sub.disp2[c] = 0;
    return out;
}

RestrictedSym branch_restricted_symmetrize(const TypedTree& t, const std::vector<int>& samples, Rng& rng) {
    auto br = branchpoints(t, samples);
    std::vector<char> fixed(t.size(), 0);
    for (int b : br) fixed[b] = 1;
    auto sigma = ChildPerms::uniform_fixing(t, fixed, rng);
    auto mapped = apply_permutation(t, sigma);
    RestrictedSym out;
    out.tree = std::move(mapped.tree);
    for (int b : br)
        for (int c : out.tree.kids[mapped.new_of_old[b]]) out.tree.disp2[c] = 0;
    out.samples.reserve(samples.size());
    for (int s : samples) out.samples.push_back(mapped.new_of_old[s]);
    return out;
}

}  // namespace mobmap
