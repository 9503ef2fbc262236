#include "doctest.h"

#include "mobmap/laws.hpp"
#include "mobmap/reorder.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace mobmap;

namespace {
TypedTree star2ab() { return tree_from_lex({0, 1, 2}, {2, 0, 0}, {10, 14}); }
TypedTree path3() { return tree_from_lex({0, 0, 0}, {1, 1, 0}, {2, -4}); }
}  // namespace

TEST_CASE("apply_permutation on a star") {
    auto t = star2ab();
    ChildPerms sigma = ChildPerms::identity(t);
    sigma.perm[0] = {1, 0};
    auto mapped = apply_permutation(t, sigma);
    CHECK(mapped.tree.type == std::vector<std::uint8_t>{0, 2, 1});
    CHECK(mapped.tree.disp2 == std::vector<std::int64_t>{0, 14, 10});
    CHECK(mapped.new_of_old[1] == 2);

    auto id = apply_permutation(t, ChildPerms::identity(t));
    CHECK(canonical_key(id.tree) == canonical_key(t));

    Rng rng(5);
    auto p = path3();
    CHECK(canonical_key(sample_symmetrization(p, rng)) == canonical_key(p));
}

TEST_CASE("invert_perm restores the tree") {
    auto t = tree_from_lex({0, 1, 2, 3}, {3, 0, 0, 0}, {2, 4, 6});
    ChildPerms sigma = ChildPerms::identity(t);
    sigma.perm[0] = {1, 2, 0};  // a 3-cycle
    auto mapped = apply_permutation(t, sigma);
    auto tau = invert_perm(t, sigma);
    auto back = apply_permutation(mapped.tree, tau);
    CHECK(canonical_key(back.tree) == canonical_key(t));
    CHECK(tau.perm[0] == std::vector<int>{2, 0, 1});

    // involution case
    ChildPerms swap = ChildPerms::identity(t);
    swap.perm[0] = {1, 0, 2};
    auto tau2 = invert_perm(t, swap);
    CHECK(tau2.perm[0] == std::vector<int>{1, 0, 2});
}

TEST_CASE("uniform symmetrization frequencies") {
    auto t = tree_from_lex({0, 1, 2, 3}, {3, 0, 0, 0}, {0, 0, 0});
    Rng rng(99);
    std::map<std::string, int> freq;
    int samples = 60000;
    for (int i = 0; i < samples; ++i) freq[canonical_key(sample_symmetrization(t, rng))]++;
    CHECK(freq.size() == 6);
    for (auto& [k, c] : freq) CHECK(std::abs(c - samples / 6) < 5 * std::sqrt(samples / 6.0));
}

TEST_CASE("spanning subtree and branchpoints") {
    // root with leaf child 1 and internal child 2 (which has child 21)
    auto t = tree_from_lex({0, 0, 0, 0}, {2, 0, 1, 0}, {2, 4, 6});
    {
        auto s = spanning_subtree(t, {3});  // vertex "2.1"
        CHECK(s.sub.size() == 3);
        CHECK(s.sub.address_str(s.sample_vertex[0]) == "1.1");
        CHECK(s.branch_orig.empty());
        // displacements pushed forward
        CHECK(s.sub.disp2 == std::vector<std::int64_t>{0, 4, 6});
    }
    {
        auto s = spanning_subtree(t, {0});
        CHECK(s.sub.size() == 1);
    }
    {
        auto s = spanning_subtree(t, {1, 3});
        CHECK(s.branch_orig == std::vector<std::int32_t>{0});
        auto z = zero_branch_displacements(s);
        CHECK(z.sub.disp2[1] == 0);
        CHECK(z.sub.disp2[2] == 0);  // root is a branchpoint
        CHECK(z.sub.disp2[3] == 6);  // degree-1 vertex keeps its child edge
    }
}

TEST_CASE("spanned subtree serialization") {
    auto t = tree_from_lex({0, 0, 0, 0}, {2, 0, 1, 0}, {2, 4, 6});
    auto s = spanning_subtree(t, {3, 1});
    auto j = spanned_to_json(s);
    CHECK(j.find("\"samples\":[\"2.1\",\"1\"]") != std::string::npos);
}

TEST_CASE("branchpoints on a complete binary tree") {
    // height-2 binary: root, 1 (children 11, 12), 2
    auto t = tree_from_lex({0, 0, 0, 0, 0}, {2, 2, 0, 0, 0}, {1, 1, 1, 1});
    auto br = branchpoints(t, {2, 3, 4});  // 11, 12, 2
    std::set<int> s(br.begin(), br.end());
    CHECK(s == std::set<int>{0, 1});
    CHECK(branchpoints(t, {2, 2, 2}).empty());
}

TEST_CASE("branch_restricted_symmetrize invariance") {
    // the sampled structure (subtree, zeroed displacements, addresses) is
    // unchanged by the restricted symmetrization, deterministically per draw
    Rng rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        // random small tree with random displacements
        int n = 2 + int(rng.below(7));
        auto profs = plane_tree_profiles(n);
        auto t = tree_from_kcounts(profs[rng.below(profs.size())]);
        for (int v = 1; v < t.size(); ++v) t.disp2[v] = std::int64_t(rng.below(9)) - 4;
        for (int v = 0; v < t.size(); ++v) t.type[v] = std::uint8_t(rng.below(3));
        int k = 1 + int(rng.below(3));
        std::vector<int> samples;
        for (int i = 0; i < k; ++i) samples.push_back(int(rng.below(t.size())));

        auto base = zero_branch_displacements(spanning_subtree(t, samples));
        auto rs = branch_restricted_symmetrize(t, samples, rng);
        auto after = zero_branch_displacements(spanning_subtree(rs.tree, rs.samples));

        CHECK(canonical_key(base.sub) == canonical_key(after.sub));
        for (int i = 0; i < k; ++i)
            CHECK(base.sub.address_str(base.sample_vertex[i]) ==
                  after.sub.address_str(after.sample_vertex[i]));
        // lexicographic order of samples is preserved
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                CHECK((samples[i] < samples[j]) == (rs.samples[i] < rs.samples[j]));
    }
}

TEST_CASE("path and displacement invariance under reordering") {
    Rng rng(21);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 2 + int(rng.below(9));
        auto profs = plane_tree_profiles(n);
        auto t = tree_from_kcounts(profs[rng.below(profs.size())]);
        for (int v = 1; v < t.size(); ++v) t.disp2[v] = std::int64_t(rng.below(9)) - 4;
        auto sigma = ChildPerms::uniform(t, rng);
        auto mapped = apply_permutation(t, sigma);
        auto dm = tree_distance_matrix(t);
        auto dm2 = tree_distance_matrix(mapped.tree);
        auto l1 = t.labels2();
        auto l2v = mapped.tree.labels2();
        std::int64_t md1 = 0, md2 = 0;
        for (auto d : t.disp2) md1 = std::max(md1, std::abs(d));
        for (auto d : mapped.tree.disp2) md2 = std::max(md2, std::abs(d));
        CHECK(md1 == md2);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                CHECK(dm[u][v] == dm2[mapped.new_of_old[u]][mapped.new_of_old[v]]);
                CHECK(l1[u] - l1[v] == l2v[mapped.new_of_old[u]] - l2v[mapped.new_of_old[v]]);
            }
    }
}

TEST_CASE("restricted permutation count") {
    // |P_{(t,v)}| = product of k! over non-branchpoints: check by enumeration
    Rng rng(3);
    for (int iter = 0; iter < 30; ++iter) {
        int n = 2 + int(rng.below(6));
        auto profs = plane_tree_profiles(n);
        auto t = tree_from_kcounts(profs[rng.below(profs.size())]);
        std::vector<int> samples{int(rng.below(t.size())), int(rng.below(t.size()))};
        auto br = branchpoints(t, samples);
        std::set<int> brs(br.begin(), br.end());
        long long expect = 1;
        for (int v = 0; v < t.size(); ++v) {
            if (brs.count(v)) continue;
            for (int i = 2; i <= t.kcount(v); ++i) expect *= i;
        }
        // enumerate vectors fixing branchpoints
        long long count = 0;
        for_each_perm_vector(t, [&](const std::vector<std::vector<int>>& pv) {
            for (int b : brs) {
                for (int i = 0; i < int(pv[b].size()); ++i)
                    if (pv[b][i] != i) return;
            }
            count++;
        });
        CHECK(count == expect);
    }
}
