#include "doctest.h"

#include "mobmap/metrics.hpp"
#include "mobmap/stats.hpp"

#include <cmath>

using namespace mobmap;

TEST_CASE("d_circ") {
    PathFunction Z;
    Z.N = 4;
    Z.v = {0, 1, -1, 1, 0};
    CHECK(d_circ(Z, 0.25, 0.5) == doctest::Approx(2.0));  // 1 + (-1) - 2*(-1)
    CHECK(d_circ(Z, 0.3, 0.3) == doctest::Approx(0.0));
    PathFunction C;
    C.N = 2;
    C.v = {5, 5, 5};
    CHECK(d_circ(C, 0.1, 0.9) == doctest::Approx(0.0));
    CHECK_THROWS(d_circ(Z, -0.1, 0.5));
}

TEST_CASE("d_star_grid") {
    PathFunction Z;
    Z.N = 4;
    Z.v = {0, 1, -1, 1, 0};
    std::vector<double> pts{0.0, 0.25, 0.5, 0.75};
    auto D = d_star_grid(Z, pts, 1e-9);
    int n = int(pts.size());
    for (int i = 0; i < n; ++i) {
        CHECK(D[i][i] == 0.0);
        for (int j = 0; j < n; ++j) {
            CHECK(D[i][j] == doctest::Approx(D[j][i]));
            CHECK(D[i][j] <= d_circ(Z, pts[i], pts[j]) + 1e-12);
            for (int k = 0; k < n; ++k) CHECK(D[i][j] <= D[i][k] + D[k][j] + 1e-12);
        }
    }
    // with two points, D* = D°
    std::vector<double> two{0.25, 0.5};
    auto D2 = d_star_grid(Z, two, 1e-9);
    CHECK(D2[0][1] == doctest::Approx(d_circ(Z, 0.25, 0.5)));
    // adding grid points can only shrink distances
    std::vector<double> more = pts;
    more.push_back(0.6);
    more.push_back(0.9);
    auto D3 = d_star_grid(Z, more, 1e-9);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(D3[i][j] <= D[i][j] + 1e-12);
}

TEST_CASE("brownian snake sampler basics") {
    Rng rng(5);
    auto s = brownian_snake_sample(64, rng);
    CHECK(s.e.v.front() == 0.0);
    CHECK(s.e.v.back() == 0.0);
    CHECK(s.e.is_excursion());
    CHECK(s.Z.v.front() == 0.0);
    CHECK(s.Z.v.back() == doctest::Approx(0.0));
    CHECK_THROWS(brownian_snake_sample(63, rng));
    // tree-like at grid resolution
    TreeLikePath p{s.e, s.Z, 1e-9};
    CHECK(check_tree_like(p));
}

TEST_CASE("snake labels are conditionally normal") {
    // Z(s) | e is N(0, e(s)), so the per-sample normalization is exactly
    // standard normal (skipping the grid-zero excursion values)
    Rng rng(31);
    int samples = 10000;
    std::vector<double> normalized;
    for (int i = 0; i < samples; ++i) {
        auto s = brownian_snake_sample(256, rng);
        double e = s.e.at(0.5);
        if (e > 0) normalized.push_back(s.Z.at(0.5) / std::sqrt(e));
    }
    CHECK(ks_normal_pvalue(normalized) > 0.001);
}

TEST_CASE("gh distance basics") {
    FiniteMetricMeasureSpace X, Y;
    X.dist = {{0, 2}, {2, 0}};
    X.weights = {0.5, 0.5};
    Y.dist = {{0, 5}, {5, 0}};
    Y.weights = {0.5, 0.5};
    X.check_valid();
    CHECK(gh_distance_exact(X, X) == doctest::Approx(0.0));
    CHECK(gh_distance_exact(X, Y) == doctest::Approx(1.5));
    CHECK(gh_distance_exact(Y, X) == doctest::Approx(1.5));
    // weight-only perturbation: GH zero, GHP positive
    FiniteMetricMeasureSpace Xw = X;
    Xw.weights = {0.9, 0.1};
    CHECK(gh_distance_exact(X, Xw) == doctest::Approx(0.0));
    CHECK(ghp_distance_exact(X, Xw) > 0.0);
    CHECK(ghp_distance_exact(X, X) == doctest::Approx(0.0));
}

TEST_CASE("delta inequalities on enumerated maps") {
    // delta <= delta° for every type-1 contour pair, all maps with <= 3 edges
    for (auto& m : enumerate_pointed_maps(3, {})) {
        if (m.is_vertex_map()) continue;
        auto s = classify_sign(m);
        if (s == MapSign::Minus) continue;
        auto fw = bdg_forward(m);
        auto g = MobileGeodesics::build(fw.mobile, s);
        int cnt = int(g.type1_indices.size());
        for (int a = 0; a < cnt; ++a)
            for (int b = 0; b < cnt; ++b) {
                int i = g.type1_indices[a], j = g.type1_indices[b];
                long long dc2 = g.delta_circ2(i, j);
                CHECK(2LL * g.delta(i, j) <= dc2);
                if (i == j) CHECK(dc2 == 4);  // the formula keeps its +2
            }
    }
}

TEST_CASE("rescaled matrices") {
    WeightSeq q;
    q.q = {{5, 1.0}};
    auto params = solve_constants(q);
    Rng rng(2);
    auto bs = boltzmann_sample(params, 11, MapSign::Plus, rng);
    auto g = MobileGeodesics::build(bs.mobile, MapSign::Plus);
    // on the type-1 lattice itself the diagonal vanishes and delta° keeps +2
    for (int i : g.type1_indices) {
        CHECK(g.delta(i, i) == 0);
        CHECK(g.delta_circ2(i, i) == 4);
    }
    auto R = rescaled_map_distance_matrix(g, 1.0, 11, 8);
    auto R2 = rescaled_map_distance_matrix(g, 2.0, 11, 8);
    for (int a = 0; a < 8; ++a) {
        CHECK(R.D[a][a] >= 0.0);
        for (int b = 0; b < 8; ++b) {
            CHECK(R.D[a][b] <= R.Dcirc[a][b] + 1e-9);
            CHECK(R2.D[a][b] == doctest::Approx(2.0 * R.D[a][b]));
            CHECK(R2.Dcirc[a][b] == doctest::Approx(2.0 * R.Dcirc[a][b]));
        }
    }
}
