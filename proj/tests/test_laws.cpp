#include "doctest.h"

#include "mobmap/laws.hpp"
#include "mobmap/stats.hpp"
#include "mobmap/verify.hpp"

#include <map>

using namespace mobmap;

TEST_CASE("rational arithmetic") {
    Rational a(1, 3), b(1, 6);
    CHECK((a + b) == Rational(1, 2));
    CHECK((a - b) == Rational(1, 6));
    CHECK((a * b) == Rational(1, 18));
    CHECK((a / b) == Rational(2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4).str() == "-1/2");
    CHECK(Rational(7, 3) > Rational(2));
}

TEST_CASE("symmetrize_family") {
    DisplacementFamily fam;
    auto as_map = [](const DispDist& d) {
        std::map<std::vector<std::int64_t>, Rational> m;
        for (auto& [x, w] : d.atoms) m[x] += w;
        return m;
    };
    {  // k = 1: symmetrization is the identity
        DispDist d;
        d.atoms = {{{4}, Rational(1, 3)}, {{-2}, Rational(2, 3)}};
        fam.set(0, {1}, d);
        auto sym = symmetrize_family(fam);
        CHECK(as_map(sym.get(0, {1})) == as_map(d));
    }
    {  // distinct types: the two permutation terms coincide after relabeling
        DisplacementFamily f2;
        DispDist dab, dba;
        dab.atoms = {{{1, 2}, Rational(1)}};
        dba.atoms = {{{2, 1}, Rational(1)}};
        f2.set(0, {1, 2}, dab);
        f2.set(0, {2, 1}, dba);
        auto sym = symmetrize_family(f2);
        CHECK(as_map(sym.get(0, {1, 2})) == as_map(dab));
    }
    {  // repeated types: two-term average
        DisplacementFamily f3;
        DispDist d;
        d.atoms = {{{1, 2}, Rational(1)}};
        f3.set(0, {1, 1}, d);
        auto sym = symmetrize_family(f3);
        std::map<std::vector<std::int64_t>, Rational> got;
        for (auto& [x, w] : sym.get(0, {1, 1}).atoms) got[x] = w;
        CHECK(got.size() == 2);
        CHECK(got[{1, 2}] == Rational(1, 2));
        CHECK(got[{2, 1}] == Rational(1, 2));
    }
    {  // missing permuted key is an error
        DisplacementFamily f4;
        DispDist d;
        d.atoms = {{{0, 0}, Rational(1)}};
        f4.set(0, {1, 2}, d);
        CHECK_THROWS(symmetrize_family(f4));
    }
}

TEST_CASE("symmetrize_family is idempotent") {
    DisplacementFamily fam;
    DispDist d;
    d.atoms = {{{2, -2}, Rational(3, 4)}, {{0, 4}, Rational(1, 4)}};
    fam.set(0, {0, 0}, d);
    auto s1 = symmetrize_family(fam);
    auto s2 = symmetrize_family(s1);
    for (auto& [k, dd] : s1.entries) {
        std::map<std::vector<std::int64_t>, Rational> a, b;
        for (auto& [x, w] : dd.atoms) a[x] = w;
        for (auto& [x, w] : s2.entries.at(k).atoms) b[x] = w;
        CHECK(a == b);
    }
}

TEST_CASE("centering_check") {
    {  // point masses at zero: both modes
        DisplacementFamily fam;
        DispDist d;
        d.atoms = {{{0, 0}, Rational(1)}};
        fam.set(0, {1, 1}, d);
        CHECK(centering_check(fam, Centering::Local));
        CHECK(centering_check(fam, Centering::Centered));
    }
    {  // centered but not locally centered
        DisplacementFamily fam;
        DispDist dab, dba;
        dab.atoms = {{{2, -2}, Rational(1)}};
        dba.atoms = {{{-2, 2}, Rational(1)}};
        fam.set(0, {1, 2}, dab);
        fam.set(0, {2, 1}, dba);
        CHECK_FALSE(centering_check(fam, Centering::Local));
        CHECK(centering_check(fam, Centering::Centered));
        // types travel with their displacements, so this family is a fixed
        // point of symmetrization (distinct-type coordinates keep their means)
        CHECK_FALSE(centering_check(symmetrize_family(fam), Centering::Local));
    }
    {  // single-type centered family: symmetrization is locally centered
        DisplacementFamily fam;
        DispDist d;
        d.atoms = {{{4, -4}, Rational(1)}};
        fam.set(0, {0, 0}, d);
        CHECK_FALSE(centering_check(fam, Centering::Local));
        CHECK(centering_check(fam, Centering::Centered));
        CHECK(centering_check(symmetrize_family(fam), Centering::Local));
    }
}

TEST_CASE("gw_sample computes the right laws") {
    OffspringFamily off;
    off.per_type[0].push_back({{}, Rational(1, 2)});
    off.per_type[0].push_back({{0, 0}, Rational(1, 2)});
    off.check_permutation_invariant();
    Rng rng(11);
    int n1 = 0, n3 = 0, samples = 100000;
    for (int i = 0; i < samples; ++i) {
        auto r = gw_sample(off, 0, rng, 1000);
        if (!r.tree) continue;  // rare overflow of the cap
        if (r.tree->size() == 1) n1++;
        if (r.tree->size() == 3) n3++;
    }
    CHECK(std::abs(n1 - samples / 2.0) < 5 * std::sqrt(samples * 0.25));
    CHECK(std::abs(n3 - samples / 8.0) < 5 * std::sqrt(samples * 0.125));
}

TEST_CASE("gw overflow and conditioning") {
    OffspringFamily boom;
    boom.per_type[0].push_back({{0, 0}, Rational(1)});  // deterministic doubling
    Rng rng(1);
    auto r = gw_sample(boom, 0, rng, 100);
    CHECK_FALSE(r.tree);
    CHECK(r.generated > 100);

    OffspringFamily binary;
    binary.per_type[0].push_back({{}, Rational(1, 2)});
    binary.per_type[0].push_back({{0, 0}, Rational(1, 2)});
    auto t = gw_sample_conditioned(binary, 0, 0, 3, rng, 1 << 20, 1000);
    CHECK(t.size() == 3);
    CHECK(t.kcount(0) == 2);  // the unique 3-vertex binary shape
    // parity-impossible target exhausts
    CHECK_THROWS_AS(gw_sample_conditioned(binary, 0, 0, 4, rng, 200, 1000), Exhaustion);
}

TEST_CASE("valid_sample product structure") {
    ValidLaw law;
    law.shapes.push_back({tree_from_lex({0, 0, 0}, {2, 0, 0}, {0, 0}), Rational(1)});
    DispDist d;
    d.atoms = {{{2, 4}, Rational(1, 2)}, {{4, 2}, Rational(1, 2)}};
    law.disp.set(0, {0, 0}, d);
    Rng rng(3);
    std::map<std::string, int> freq;
    for (int i = 0; i < 40000; ++i) freq[canonical_key(valid_sample(law, rng))]++;
    CHECK(freq.size() == 2);
    for (auto& [k, c] : freq) CHECK(std::abs(c - 20000) < 700);
}

TEST_CASE("exact_law_enumeration") {
    {  // deterministic: single outcome
        ValidLaw law;
        law.shapes.push_back({tree_from_lex({0, 0}, {1, 0}, {0}), Rational(1)});
        DispDist d;
        d.atoms = {{{6}, Rational(1)}};
        law.disp.set(0, {0}, d);
        auto fd = exact_law_enumeration(law, 5);
        CHECK(fd.p.size() == 1);
        CHECK(fd.total() == Rational(1));
    }
    {  // binary GW: shape masses 1/2, 1/8, 1/32 + 1/32 within 5 vertices
        ValidLaw law;
        GwSpec g;
        g.off.per_type[0].push_back({{}, Rational(1, 2)});
        g.off.per_type[0].push_back({{0, 0}, Rational(1, 2)});
        g.root_type = 0;
        law.gw = std::move(g);
        DispDist d;
        d.atoms = {{{0, 0}, Rational(1)}};
        law.disp.set(0, {0, 0}, d);
        auto fd = exact_law_enumeration(law, 5);
        std::map<int, Rational> by_size;
        for (auto& [key, w] : fd.p) {
            int size = int(std::count(key.begin(), key.end(), ';'));
            by_size[size] += w;
        }
        CHECK(by_size[1] == Rational(1, 2));
        CHECK(by_size[3] == Rational(1, 8));
        CHECK(by_size[5] == Rational(1, 16));  // two shapes, 1/32 each
    }
}

TEST_CASE("finite distribution CSV format") {
    FiniteDistribution fd;
    fd.add("0:1:0;0:0:4;", Rational(2, 3));
    fd.add("0:1:0;0:0:-4;", Rational(1, 3));
    auto csv = fd.to_csv();
    CHECK(csv.find("key,numerator,denominator") == 0);
    CHECK(csv.find("\"0:1:0;0:0:4;\",2,3") != std::string::npos);
}

TEST_CASE("conditioned GW enumeration is symmetric and product-form") {
    // conditioned law assigns equal probability to all reorderings
    for (auto& claw : builtin_law_corpus()) {
        auto shapes = enumerate_shapes(claw.law, 7);
        CHECK(shape_law_is_symmetric(shapes));
    }
}

TEST_CASE("adversarial law is detected by the exact oracle") {
    auto reports = eqdist_suite(2, 7);
    for (auto& r : reports) {
        INFO(r.name);
        CHECK(r.pass);
    }
}
