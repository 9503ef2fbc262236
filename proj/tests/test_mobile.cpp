#include "doctest.h"

#include "mobmap/mobile.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace mobmap;

TEST_CASE("admissible labelings: small cases") {
    {  // type-3 parent, one type-1 child: displacements -1, 0, +1
        auto labs = admissible_labelings(3, {1});
        std::set<std::int64_t> got;
        for (auto& x : labs) got.insert(x[0]);
        CHECK(got == std::set<std::int64_t>{-2, 0, 2});
    }
    {  // type-4 parent, one type-1 child: -1/2, +1/2
        auto labs = admissible_labelings(4, {1});
        std::set<std::int64_t> got;
        for (auto& x : labs) got.insert(x[0]);
        CHECK(got == std::set<std::int64_t>{-1, 1});
    }
    {  // types 1/2 force zero displacements on face children
        auto labs = admissible_labelings(1, CType(3, 3));
        CHECK(labs.size() == 1);
        CHECK(labs[0] == std::vector<std::int64_t>(3, 0));
    }
}

TEST_CASE("labeling counts match the multinomial coefficients") {
    // the count over all arrangements of (k type-1, k' type-2) children equals
    // binom(2k+k'+1; k+1, k, k') for type 3 and binom(2k+k'; k, k, k') for type 4
    auto multinom = [](int n, int a, int b, int c) {
        long long r = 1;
        int num = n;
        long long den = 1;
        for (int p : {a, b, c})
            for (int i = 1; i <= p; ++i) {
                r *= num--;
                den *= i;
            }
        return r / den;
    };
    for (int k = 0; k <= 2; ++k)
        for (int kp = 0; kp <= 3; ++kp) {
            if (k + kp == 0 || k + kp > 4) continue;
            CType base(k, 1);
            base.resize(k + kp, 2);
            std::sort(base.begin(), base.end());
            long long total3 = 0, total4 = 0;
            do {
                total3 += (long long)admissible_labelings(3, base).size();
                total4 += (long long)admissible_labelings(4, base).size();
            } while (std::next_permutation(base.begin(), base.end()));
            CHECK(total3 == multinom(2 * k + kp + 1, k + 1, k, kp));
            CHECK(total4 == multinom(2 * k + kp, k, k, kp));
        }
}

TEST_CASE("solve_constants on quadrangulations") {
    WeightSeq q;
    q.q = {{4, 1.0}};
    auto p = solve_constants(q);
    CHECK(p.scale == doctest::Approx(1.0 / 12.0).epsilon(1e-4));
    CHECK(p.Zplus == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(p.Zzero == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(p.spectral_radius == doctest::Approx(1.0).epsilon(1e-3));
    auto off = mobile_offspring(p);
    CHECK(off.geom_p == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(std::fabs(off.sum3 - 1.0) < 1e-8);
}

TEST_CASE("solve_constants rejects degenerate weights") {
    WeightSeq q;
    q.q = {{1, 1.0}};
    CHECK_THROWS(solve_constants(q));
}

TEST_CASE("pentagonal constants give a critical family") {
    WeightSeq q;
    q.q = {{5, 1.0}};
    auto p = solve_constants(q);
    CHECK(p.Zzero > 0.0);  // odd degrees need flags
    CHECK(p.spectral_radius == doctest::Approx(1.0).epsilon(1e-3));
    auto off = mobile_offspring(p);
    CHECK(std::fabs(off.sum3 - 1.0) < 1e-8);
    CHECK(std::fabs(off.sum4 - 1.0) < 1e-8);
}

TEST_CASE("pentagonal offspring supports") {
    WeightSeq q;
    q.q = {{5, 1.0}};
    auto off = mobile_offspring(solve_constants(q));
    // faces of degree 5: type-3 pairs satisfy 2k+k'+2 = 5, type-4 ones 2k+k'+1 = 5
    std::set<std::pair<int, int>> s3, s4;
    for (auto& [k, kp, pr] : off.z3) s3.insert({k, kp});
    for (auto& [k, kp, pr] : off.z4) s4.insert({k, kp});
    CHECK(s3 == std::set<std::pair<int, int>>{{0, 3}, {1, 1}});
    CHECK(s4 == std::set<std::pair<int, int>>{{0, 4}, {1, 2}, {2, 0}});
}

TEST_CASE("mobile sampler structural validity") {
    WeightSeq q;
    q.q = {{5, 1.0}};
    auto params = solve_constants(q);
    MobileSampler sampler(params);
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        auto t = sampler.sample(25, MapSign::Plus, rng);
        int n1 = 0;
        for (auto ty : t.type)
            if (ty == 1) n1++;
        CHECK(n1 == 25);
        auto chk = check_mobile(t);
        INFO(chk.why);
        CHECK(chk.ok);
        CHECK(t.kcount(0) >= 1);
    }
    for (int i = 0; i < 20; ++i) {
        auto t = sampler.sample(25, MapSign::Null, rng);
        auto chk = check_mobile(t);
        INFO(chk.why);
        CHECK(chk.ok);
        CHECK(t.type[0] == 2);
        CHECK(t.kcount(0) == 2);
    }
}

TEST_CASE("check_mobile rejects bad structures") {
    {  // type-1 child of type 1
        auto t = tree_from_lex({1, 1}, {1, 0}, {0});
        CHECK_FALSE(check_mobile(t).ok);
    }
    {  // label parity violation: type-3 child with half-integer displacement
        auto t = tree_from_lex({1, 3}, {1, 0}, {1});
        CHECK_FALSE(check_mobile(t).ok);
    }
    {  // cyclic constraint violated: drop of 2 into a type-1 child
        auto t = tree_from_lex({1, 3, 1}, {1, 1, 0}, {0, -4});
        CHECK_FALSE(check_mobile(t).ok);
    }
    {  // good mobile
        auto t = tree_from_lex({1, 3, 1}, {1, 1, 0}, {0, -2});
        CHECK(check_mobile(t).ok);
    }
}

TEST_CASE("mobile enumeration matches by-hand counts") {
    // quadrangulation mobiles with 2 type-1 vertices: one shape, 3 labelings
    auto shapes = enumerate_mobile_shapes(2, 4, MapSign::Plus, {4});
    CHECK(shapes.size() == 1);
    auto labeled = enumerate_labeled_mobiles(2, 4, MapSign::Plus, {4});
    CHECK(labeled.size() == 3);
    for (auto& t : labeled) CHECK(check_mobile(t).ok);
    // no bare-root mobile: positive mobiles carry at least one face
    for (auto& t : shapes) CHECK(t.kcount(0) >= 1);
}

TEST_CASE("labeled probabilities are uniform for p-angulations") {
    WeightSeq q;
    q.q = {{5, 1.0}};
    auto params = solve_constants(q);
    auto mobiles = enumerate_labeled_mobiles(4, 5, MapSign::Plus, {5});
    REQUIRE(!mobiles.empty());
    double lo = 1e300, hi = 0;
    for (auto& t : mobiles) {
        double pr = mobile_labeled_prob(params, t);
        lo = std::min(lo, pr);
        hi = std::max(hi, pr);
    }
    CHECK((hi - lo) / hi < 1e-8);
}
