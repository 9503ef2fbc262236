// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
// Thresholds and sample sizes are pinned here; seeds are fixed.

#include "mobmap/metrics.hpp"
#include "mobmap/reorder.hpp"
#include "mobmap/stats.hpp"
#include "mobmap/verify.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>

using namespace mobmap;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    std::chrono::steady_clock::time_point start;
    explicit Criterion(std::string n) : name(std::move(n)), start(std::chrono::steady_clock::now()) {}
    void report(bool pass, const std::string& detail = "") {
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << "  (" << sec << " s)"
                  << (detail.empty() ? "" : "  " + detail) << std::endl;
        if (!pass) g_failures++;
    }
};

bool fast_mode() { return std::getenv("MOBMAP_ACCEPT_FAST") != nullptr; }

void criterion1_bijection() {
    Criterion c("criterion 1: exact bijection audit (q-supports {4} and {5}, <= 4 edges)");
    bool ok = true;
    std::string detail;
    for (int support : {4, 5}) {
        auto reports = bijection_audit(4, {support});
        for (auto& r : reports) {
            if (!r.pass) {
                ok = false;
                detail += r.name + " failed; ";
            }
        }
    }
    c.report(ok, detail);
}

void criterion2_eqdist() {
    Criterion c("criterion 2: exact subsample-law identity on the 10-law corpus (k <= 3, <= 7 vertices)");
    auto reports = eqdist_suite(3, 7);
    bool ok = true;
    long long checks = 0;
    for (auto& r : reports) {
        checks++;
        if (!r.pass) ok = false;
    }
    c.report(ok, std::to_string(checks) + " exact checks");
}

void criterion3_delta() {
    Criterion c("criterion 3: delta <= delta° on enumerated (<= 4 edges) and 100 sampled maps (~10^3 vertices)");
    long long fails = 0, pairs = 0;
    for (auto& m : enumerate_pointed_maps(4, {})) {
        if (m.is_vertex_map()) continue;
        auto s = classify_sign(m);
        if (s == MapSign::Minus) continue;
        auto fw = bdg_forward(m);
        auto g = MobileGeodesics::build(fw.mobile, s);
        g.build_rmq();
        int cnt = int(g.type1_indices.size());
        for (int a = 0; a < cnt; ++a)
            for (int b = a; b < cnt; ++b) {
                pairs++;
                if (2LL * g.delta(g.type1_indices[a], g.type1_indices[b]) >
                    g.delta_circ2(g.type1_indices[a], g.type1_indices[b]))
                    fails++;
            }
    }
    // sampled pentagonal maps with ~10^3 vertices (1001 = 2 mod 3 is feasible)
    WeightSeq q;
    q.q = {{5, 1.0}};
    auto params = solve_constants(q);
    int nmaps = fast_mode() ? 5 : 100;
    int n = 1001;
    for (int rep = 0; rep < nmaps; ++rep) {
        Rng rng(777 + rep);
        auto bs = boltzmann_sample(params, n, MapSign::Plus, rng);
        auto g = MobileGeodesics::build(bs.mobile, MapSign::Plus);
        g.build_rmq();
        int cnt = int(g.type1_indices.size());
        for (int a = 0; a < cnt; ++a) {
            int i = g.type1_indices[a];
            int u = g.map_vertex_of[g.theta[i]];
            const auto& du = g.map_dist[u];
            for (int b = a; b < cnt; ++b) {
                int j = g.type1_indices[b];
                pairs++;
                if (2LL * du[g.map_vertex_of[g.theta[j]]] > g.delta_circ2(i, j)) fails++;
            }
        }
    }
    c.report(fails == 0, std::to_string(pairs) + " exact integer comparisons");
}

void criterion4_identities() {
    Criterion c("criterion 4: contour-distance identity, time-change bounds, reordering invariance");
    auto reports = identity_suite(2026);
    bool ok = all_pass(reports);
    std::string detail;
    for (auto& r : reports)
        if (!r.pass) detail += r.name + " failed; ";
    c.report(ok, detail);
}

void criterion5_centering() {
    Criterion c("criterion 5: displacement family centered, not locally centered, symmetrization locally centered");
    auto reports = centering_audit(3);
    std::string witness;
    for (auto& r : reports)
        if (r.name == "centering/family-not-locally-centered") witness = r.note;
    c.report(all_pass(reports), witness);
}

void criterion6_scaling() {
    Criterion c("criterion 6: scaling exponents 0.25/0.25/0.5 over n in {512,1025,2048,4097,8192}, 200 reps");
    WeightSeq q;
    q.q = {{5, 1.0}};
    // 1024 and 4096 are parity-infeasible for pentagonal maps (n = 2 mod 3);
    // the nearest feasible sizes stand in for them
    std::vector<int> sizes{512, 1025, 2048, 4097, 8192};
    int reps = fast_mode() ? 20 : 200;
    if (fast_mode()) sizes = {512, 1025, 2048};
    try {
        auto res = scaling_estimate(
            q, sizes, reps,
            {ScalingFunctional::LabelRange, ScalingFunctional::DistancePair, ScalingFunctional::Height},
            20260808, 2);
        bool ok = all_pass(res.reports);
        std::string detail;
        for (auto& r : res.reports)
            detail += r.name.substr(8) + "=" + std::to_string(r.statistic).substr(0, 6) + " ";
        c.report(ok, detail);
    } catch (const std::exception& e) {
        c.report(false, e.what());
    }
}

void criterion7_fdd() {
    Criterion c("criterion 7: contour/label FDDs match their symmetrization at n = 200 (and the broken law fails)");
    WeightSeq q;
    q.q = {{5, 1.0}};
    auto params = solve_constants(q);
    int samples = fast_mode() ? 1000 : 10000;
    auto r1 = fdd_compare_mobile(params, 199, 3, samples, 4242, 999);
    auto r2 = fdd_compare_adversarial(3, std::min(samples, 4000), 4242, 999);
    c.report(r1.pass && r2.pass, "p=" + std::to_string(r1.statistic) +
                                     ", adversarial p=" + std::to_string(r2.statistic));
}

void criterion8_snake() {
    Criterion c("criterion 8: snake label covariance matches the running minimum (5% on a 3x3 grid)");
    auto r = snake_covariance_check(256, 10000, 99, 0.05);
    c.report(r.pass, "max relative error " + std::to_string(r.statistic));
}

void criterion9_gh() {
    Criterion c("criterion 9: GH solver equals brute force on 50 random 4-point instances");
    auto reports = gh_audit(50, 31337);
    c.report(all_pass(reports));
}

}  // namespace

int main() {
    if (fast_mode()) std::cout << "(fast mode: reduced sizes; not the acceptance configuration)\n";
    criterion1_bijection();
    criterion2_eqdist();
    criterion3_delta();
    criterion4_identities();
    criterion5_centering();
    criterion6_scaling();
    criterion7_fdd();
    criterion8_snake();
    criterion9_gh();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(g_failures))
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
