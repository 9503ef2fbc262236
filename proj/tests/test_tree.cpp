#include "doctest.h"

#include "mobmap/rng.hpp"
#include "mobmap/stats.hpp"
#include "mobmap/tree.hpp"

#include <cmath>

using namespace mobmap;

namespace {
// path tree root-1-11 with displacements (+1, -2), i.e. doubled (2, -4)
TypedTree path3() { return tree_from_lex({0, 0, 0}, {1, 1, 0}, {2, -4}); }
// star with two children, displacements (5, 7) doubled (10, 14)
TypedTree star2() { return tree_from_lex({0, 0, 0}, {2, 0, 0}, {10, 14}); }
TypedTree single() { return tree_from_lex({0}, {0}, {}); }
}  // namespace

TEST_CASE("contour exploration") {
    CHECK(contour(single()) == std::vector<std::int32_t>{0});
    CHECK(contour(path3()) == std::vector<std::int32_t>{0, 1, 2, 1, 0});
    CHECK(contour(star2()) == std::vector<std::int32_t>{0, 1, 0, 2, 0});
}

TEST_CASE("contour and label processes") {
    auto t = path3();
    auto C = contour_process(t);
    auto Z = label_process(t);
    CHECK(C.v == std::vector<double>{0, 1, 2, 1, 0});
    CHECK(Z.v == std::vector<double>{0, 1, -1, 1, 0});

    auto C1 = contour_process(single());
    CHECK(C1.is_excursion());
    CHECK(C1.at(0.37) == 0.0);

    auto t2 = tree_from_lex({0, 0, 0}, {2, 0, 0}, {10, 10});
    CHECK(label_process(t2).v == std::vector<double>{0, 5, 0, 5, 0});
}

TEST_CASE("height and lex label processes") {
    auto [H, S] = height_lex_processes(path3());
    CHECK(H.v == std::vector<double>{0, 1, 2, 0});
    CHECK(S.v == std::vector<double>{0, 1, -1, 0});

    auto [H1, S1] = height_lex_processes(single());
    CHECK(H1.v == std::vector<double>{0, 0});
    CHECK(S1.v == std::vector<double>{0, 0});

    auto t = tree_from_lex({0, 0, 0}, {2, 0, 0}, {10, 14});
    auto [H2, S2] = height_lex_processes(t);
    CHECK(S2.v == std::vector<double>{0, 5, 7, 0});
}

TEST_CASE("type count process") {
    {
        auto t = path3();  // all vertices type 0
        auto f = type_count_process(t, 0);
        CHECK(f.v == std::vector<double>{0, 1, 2, 3, 3});
        CHECK(type_count_process(t, 9).v == std::vector<double>{0, 0, 0, 0, 0});
    }
    {
        auto t = tree_from_lex({7, 0, 0}, {2, 0, 0}, {0, 0});  // only root type 7
        CHECK(type_count_process(t, 7).v == std::vector<double>{0, 1, 1, 1, 1});
    }
}

TEST_CASE("first-visit counts sum to the vertex count") {
    for (int n = 2; n <= 12; ++n)
        for (auto& prof : plane_tree_profiles(n)) {
            auto t = tree_from_kcounts(prof);
            for (int v = 0; v < t.size(); ++v) t.type[v] = std::uint8_t(v % 3);
            double total = 0;
            for (int q = 0; q < 3; ++q) total += type_count_process(t, std::uint8_t(q)).v.back();
            CHECK(total == double(t.size()));
        }
}

TEST_CASE("dist_on_contour") {
    auto C = contour_process(path3());
    CHECK(dist_on_contour(C, 0.25, 0.75) == doctest::Approx(0.0));
    CHECK(dist_on_contour(C, 0.5, 1.0) == doctest::Approx(2.0));
    CHECK(dist_on_contour(C, 0.4, 0.4) == doctest::Approx(0.0));
    CHECK_THROWS(dist_on_contour(C, -0.1, 0.5));
}

TEST_CASE("vertex_at") {
    auto t = path3();
    CHECK(vertex_at(t, 0.3) == 2);  // vertex 11
    CHECK(vertex_at(t, 0.0) == 1);
    auto s = star2();
    CHECK(vertex_at(s, 0.6) == 2);
    CHECK_THROWS(vertex_at(single(), 0.5));
}

TEST_CASE("vertex_at is uniform over non-root vertices") {
    // fixed 6-vertex tree, chi-square over the 5 non-root vertices
    auto t = tree_from_kcounts({2, 2, 0, 1, 0, 0});
    Rng rng(42);
    std::vector<long long> counts(6, 0);
    int samples = 100000;
    for (int i = 0; i < samples; ++i) counts[vertex_at(t, rng.uniform())]++;
    CHECK(counts[0] == 0);
    std::vector<long long> obs(counts.begin() + 1, counts.end());
    std::vector<double> expect(5, samples / 5.0);
    CHECK(chi_square_gof(obs, expect) > 0.001);
}

TEST_CASE("lex time change") {
    auto tc = lex_time_change(path3());
    CHECK(tc.j == std::vector<std::int64_t>{0, 1, 2, 4});
    auto tc2 = lex_time_change(star2());
    CHECK(tc2.j == std::vector<std::int64_t>{0, 1, 3, 4});
    CHECK(tc2.j.front() == 0);
    CHECK(tc2.j.back() == 2 * 3 - 2);
    CHECK_THROWS(lex_time_change(single()));
}

TEST_CASE("check_tree_like") {
    {
        auto t = path3();
        TreeLikePath p{contour_process(t), label_process(t), 0.0};
        CHECK(check_tree_like(p));
    }
    {
        // f distinguishes two contour times of the same vertex
        PathFunction f;
        f.N = 4;
        f.v = {0, 0, 0.5, 1, 0};
        TreeLikePath p{contour_process(path3()), f, 0.0};
        CHECK_FALSE(check_tree_like(p));
    }
    {
        TreeLikePath p{PathFunction::zero(4), PathFunction::zero(4), 0.0};
        CHECK(check_tree_like(p));
    }
}

TEST_CASE("tree JSON round trip") {
    auto t = tree_from_lex({1, 3, 1, 2}, {1, 2, 0, 0}, {0, -2, 1});
    auto t2 = tree_from_json(tree_to_json(t));
    CHECK(canonical_key(t) == canonical_key(t2));
}

TEST_CASE("plane tree counts are Catalan") {
    CHECK(plane_tree_profiles(1).size() == 1);
    CHECK(plane_tree_profiles(2).size() == 1);
    CHECK(plane_tree_profiles(3).size() == 2);
    CHECK(plane_tree_profiles(4).size() == 5);
    CHECK(plane_tree_profiles(5).size() == 14);
    CHECK(plane_tree_profiles(8).size() == 429);
}

TEST_CASE("addresses") {
    auto t = path3();
    CHECK(t.address_str(2) == "1.1");
    CHECK(t.at_address({1, 1}) == 2);
    CHECK(t.at_address({2}) == -1);
}
