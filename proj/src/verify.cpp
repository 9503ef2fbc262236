#include "mobmap/verify.hpp"

#include "mobmap/reorder.hpp"
#include "mobmap/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace mobmap {

std::string TestReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["mode"] = mode;
    j["statistic"] = statistic;
    j["threshold"] = threshold;
    j["pass"] = pass;
    j["seed"] = seed;
    j["sizes"] = sizes;
    if (!note.empty()) j["note"] = note;
    return j.dump();
}

std::string reports_to_json(const std::vector<TestReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& r : reports) arr.push_back(nlohmann::json::parse(r.to_json()));
    return arr.dump(2);
}

bool all_pass(const std::vector<TestReport>& reports) {
    for (auto& r : reports)
        if (!r.pass) return false;
    return true;
}

// ----- law corpus -----------------------------------------------------------

namespace {

TypedTree shape_of(const std::vector<std::uint8_t>& types, const std::vector<int>& ks) {
    return tree_from_lex(types, ks, std::vector<std::int64_t>(types.size() - 1, 0));
}

DispDist point_mass(std::vector<std::int64_t> x) {
    DispDist d;
    d.atoms.push_back({std::move(x), Rational(1)});
    return d;
}

DispDist mixture(std::vector<std::pair<std::vector<std::int64_t>, Rational>> atoms) {
    DispDist d;
    d.atoms = std::move(atoms);
    return d;
}

}  // namespace

std::vector<CorpusLaw> builtin_law_corpus() {
    std::vector<CorpusLaw> corpus;

    {  // L1: single vertex
        CorpusLaw l;
        l.name = "single-vertex";
        l.law.shapes.push_back({shape_of({0}, {0}), Rational(1)});
        corpus.push_back(std::move(l));
    }
    {  // L2: deterministic path of 3, asymmetric two-point displacements
        CorpusLaw l;
        l.name = "path3";
        l.law.shapes.push_back({shape_of({0, 0, 0}, {1, 1, 0}), Rational(1)});
        l.law.disp.set(0, {0}, mixture({{{2}, Rational(1, 4)}, {{-4}, Rational(3, 4)}}));
        corpus.push_back(std::move(l));
    }
    {  // L3: star with two distinct-type children, order uniform; order-dependent laws
        CorpusLaw l;
        l.name = "star2-types";
        l.law.shapes.push_back({shape_of({0, 1, 2}, {2, 0, 0}), Rational(1, 2)});
        l.law.shapes.push_back({shape_of({0, 2, 1}, {2, 0, 0}), Rational(1, 2)});
        l.law.disp.set(0, {1, 2}, point_mass({2, 4}));
        l.law.disp.set(0, {2, 1}, point_mass({10, 14}));
        corpus.push_back(std::move(l));
    }
    {  // L4: star with repeated child type, position-asymmetric mixture
        CorpusLaw l;
        l.name = "star2-repeat";
        l.law.shapes.push_back({shape_of({0, 1, 1}, {2, 0, 0}), Rational(1)});
        l.law.disp.set(0, {1, 1}, mixture({{{2, 4}, Rational(1, 2)}, {{6, 8}, Rational(1, 2)}}));
        corpus.push_back(std::move(l));
    }
    {  // L5: three distinct-type children, all six orders, k = 3
        CorpusLaw l;
        l.name = "star3-types";
        std::vector<std::uint8_t> perm{1, 2, 3};
        std::sort(perm.begin(), perm.end());
        do {
            l.law.shapes.push_back({shape_of({0, perm[0], perm[1], perm[2]}, {3, 0, 0, 0}), Rational(1, 6)});
            std::int64_t a = perm[0], b = perm[1], c = perm[2];
            l.law.disp.set(0, {perm[0], perm[1], perm[2]}, point_mass({2 * a, 4 * b, 6 * c}));
        } while (std::next_permutation(perm.begin(), perm.end()));
        corpus.push_back(std::move(l));
    }
    {  // L6: critical binary GW conditioned to 5 vertices
        CorpusLaw l;
        l.name = "binary-gw5";
        GwSpec g;
        g.off.per_type[0].push_back({{}, Rational(1, 2)});
        g.off.per_type[0].push_back({{0, 0}, Rational(1, 2)});
        g.root_type = 0;
        g.condition = {{0, 5}};
        l.law.gw = std::move(g);
        l.law.disp.set(0, {0, 0}, mixture({{{2, -2}, Rational(3, 4)}, {{0, 4}, Rational(1, 4)}}));
        corpus.push_back(std::move(l));
    }
    {  // L7: two-type GW conditioned on the count of type 0
        CorpusLaw l;
        l.name = "two-type-gw";
        GwSpec g;
        g.off.per_type[0].push_back({{}, Rational(1, 3)});
        g.off.per_type[0].push_back({{1}, Rational(1, 3)});
        g.off.per_type[0].push_back({{1, 1}, Rational(1, 3)});
        g.off.per_type[1].push_back({{}, Rational(1, 2)});
        g.off.per_type[1].push_back({{0}, Rational(1, 2)});
        g.root_type = 0;
        g.condition = {{0, 2}};
        g.vertex_cap = 64;
        l.law.gw = std::move(g);
        l.law.disp.set(0, {1}, point_mass({2}));
        l.law.disp.set(0, {1, 1}, mixture({{{2, 0}, Rational(1, 2)}, {{0, 2}, Rational(1, 2)}}));
        l.law.disp.set(1, {0}, mixture({{{-2}, Rational(1, 2)}, {{2}, Rational(1, 2)}}));
        corpus.push_back(std::move(l));
    }
    {  // L8: half-integer displacements (odd doubled values)
        CorpusLaw l;
        l.name = "half-integers";
        l.law.shapes.push_back({shape_of({0, 0, 0}, {2, 0, 0}), Rational(1)});
        l.law.disp.set(0, {0, 0}, mixture({{{1, 3}, Rational(1, 2)}, {{3, 1}, Rational(1, 2)}}));
        corpus.push_back(std::move(l));
    }
    {  // L9: 0/1/2-ary GW conditioned to 4 vertices
        CorpusLaw l;
        l.name = "geometric-gw4";
        GwSpec g;
        g.off.per_type[0].push_back({{}, Rational(1, 2)});
        g.off.per_type[0].push_back({{0}, Rational(1, 4)});
        g.off.per_type[0].push_back({{0, 0}, Rational(1, 4)});
        g.root_type = 0;
        g.condition = {{0, 4}};
        l.law.gw = std::move(g);
        l.law.disp.set(0, {0}, mixture({{{2}, Rational(1, 2)}, {{-2}, Rational(1, 2)}}));
        l.law.disp.set(0, {0, 0},
                       mixture({{{2, 4}, Rational(1, 3)}, {{4, 2}, Rational(1, 3)}, {{0, 0}, Rational(1, 3)}}));
        corpus.push_back(std::move(l));
    }
    {  // L10: rationalized quadrangulation mobile law (Zplus = 2 exactly),
       // truncated type-1 arity, conditioned on three type-1 vertices
        CorpusLaw l;
        l.name = "quad-mobile";
        GwSpec g;
        // type 1: k type-3 children, geometric(1/2) truncated at 3, renormalized
        g.off.per_type[1].push_back({{}, Rational(8, 15)});
        g.off.per_type[1].push_back({{3}, Rational(4, 15)});
        g.off.per_type[1].push_back({{3, 3}, Rational(2, 15)});
        g.off.per_type[1].push_back({{3, 3, 3}, Rational(1, 15)});
        // type 3: exactly one type-1 child (quadrangulations have no flags)
        g.off.per_type[3].push_back({{1}, Rational(1)});
        g.root_type = 1;
        g.condition = {{1, 3}};
        l.law.gw = std::move(g);
        for (int k = 1; k <= 3; ++k) l.law.disp.set(1, CType(k, 3), point_mass(std::vector<std::int64_t>(k, 0)));
        l.law.disp.set(3, {1},
                       mixture({{{-2}, Rational(1, 3)}, {{0}, Rational(1, 3)}, {{2}, Rational(1, 3)}}));
        corpus.push_back(std::move(l));
    }
    return corpus;
}

// ----- adversarial (non-valid) law ------------------------------------------

AdversarialLaw AdversarialLaw::make() {
    AdversarialLaw a;
    // shape A: root with (deep child, leaf); shape B: the mirror image; the
    // grandchild edge label depends on which side carries the deep child,
    // which breaks the (type, child types)-measurability of displacements
    a.base_shape_a = tree_from_lex({0, 0, 0, 0}, {2, 1, 0, 0}, {0, 20, 0});
    a.base_shape_b = tree_from_lex({0, 0, 0, 0}, {2, 0, 1, 0}, {0, 0, -20});
    return a;
}

TypedTree AdversarialLaw::sample(Rng& rng) const {
    return rng.uniform() < 0.5 ? base_shape_a : base_shape_b;
}

std::vector<std::pair<TypedTree, Rational>> AdversarialLaw::outcomes() const {
    return {{base_shape_a, Rational(1, 2)}, {base_shape_b, Rational(1, 2)}};
}

// ----- eqdist oracle ---------------------------------------------------------

namespace {

// exact joint law of (spanned subtree with branch displacements zeroed,
// sample addresses) for a product-form law given by (shapes, family)
FiniteDistribution joint_subsample_law(const std::vector<ShapeAtom>& shapes,
                                       const DisplacementFamily& fam, int k) {
    FiniteDistribution out;
    for (auto& atom : shapes) {
        const TypedTree& t = atom.shape;
        int n = t.size();
        long long tuples = 1;
        for (int i = 0; i < k; ++i) tuples *= n;
        Rational tuple_w = atom.prob / Rational(tuples);
        std::vector<int> samples(k, 0);
        std::function<void(int)> loop = [&](int pos) {
            if (pos < k) {
                for (int v = 0; v < n; ++v) {
                    samples[pos] = v;
                    loop(pos + 1);
                }
                return;
            }
            auto sub = spanning_subtree(t, samples);
            // displacement enumeration: one retained coordinate per non-branch
            // internal subtree vertex; branch children are zeroed
            struct Slot { int sub_child; std::map<std::int64_t, Rational> marginal; };
            std::vector<Slot> slots;
            TypedTree work = sub.sub;
            for (auto& d : work.disp2) d = 0;
            for (int u = 0; u < sub.sub.size(); ++u) {
                if (sub.sub.kcount(u) != 1) continue;
                int c = sub.sub.kids[u][0];
                int v = sub.orig_of_sub[u];
                int w = sub.orig_of_sub[c];
                const auto& ks = t.kids[v];
                int idx = int(std::lower_bound(ks.begin(), ks.end(), w) - ks.begin());
                CType ct;
                for (int cc : ks) ct.push_back(t.type[cc]);
                const DispDist& dd = fam.get(t.type[v], ct);
                Slot s;
                s.sub_child = c;
                for (auto& [x, wt] : dd.atoms) s.marginal[x[idx]] += wt;
                slots.push_back(std::move(s));
            }
            std::string usuffix = "|U:";
            for (int i = 0; i < k; ++i) usuffix += sub.sub.address_str(sub.sample_vertex[i]) + ",";
            std::function<void(size_t, Rational)> assign = [&](size_t si, Rational w) {
                if (si == slots.size()) {
                    out.add(canonical_key(work) + usuffix, w);
                    return;
                }
                for (auto& [x, wt] : slots[si].marginal) {
                    work.disp2[slots[si].sub_child] = x;
                    assign(si + 1, w * wt);
                }
                work.disp2[slots[si].sub_child] = 0;
            };
            assign(0, tuple_w);
        };
        loop(0);
    }
    return out;
}

// same joint law for an explicit list of labeled trees (no product structure)
FiniteDistribution joint_subsample_law_explicit(const std::vector<std::pair<TypedTree, Rational>>& atoms,
                                                int k) {
    FiniteDistribution out;
    for (auto& [t, prob] : atoms) {
        int n = t.size();
        long long tuples = 1;
        for (int i = 0; i < k; ++i) tuples *= n;
        Rational tuple_w = prob / Rational(tuples);
        std::vector<int> samples(k, 0);
        std::function<void(int)> loop = [&](int pos) {
            if (pos < k) {
                for (int v = 0; v < n; ++v) {
                    samples[pos] = v;
                    loop(pos + 1);
                }
                return;
            }
            auto sub = zero_branch_displacements(spanning_subtree(t, samples));
            std::string key = canonical_key(sub.sub) + "|U:";
            for (int i = 0; i < k; ++i) key += sub.sub.address_str(sub.sample_vertex[i]) + ",";
            out.add(key, tuple_w);
        };
        loop(0);
    }
    return out;
}

// explicit labeled atoms of a law's symmetrization
std::vector<std::pair<TypedTree, Rational>> symmetrize_explicit(
    const std::vector<std::pair<TypedTree, Rational>>& atoms) {
    std::map<std::string, std::pair<TypedTree, Rational>> acc;
    for (auto& [t, prob] : atoms) {
        long long nperm = 1;
        for (int v = 0; v < t.size(); ++v)
            for (int i = 2; i <= t.kcount(v); ++i) nperm *= i;
        Rational each = prob / Rational(nperm);
        for_each_perm_vector(t, [&](const std::vector<std::vector<int>>& pv) {
            ChildPerms cp;
            cp.perm = pv;
            auto mapped = apply_permutation(t, cp);
            std::string key = canonical_key(mapped.tree);
            auto it = acc.find(key);
            if (it == acc.end())
                acc[key] = {mapped.tree, each};
            else
                it->second.second += each;
        });
    }
    std::vector<std::pair<TypedTree, Rational>> out;
    for (auto& [k, v] : acc) out.push_back(v);
    return out;
}

}  // namespace

TestReport eqdist_check(const CorpusLaw& claw, int k, int max_vertices) {
    TestReport r;
    r.name = "eqdist/" + claw.name + "/k" + std::to_string(k);
    r.mode = "exact";
    auto shapes = enumerate_shapes(claw.law, max_vertices);
    if (!shape_law_is_symmetric(shapes)) {
        r.pass = false;
        r.note = "shape law is not symmetric";
        return r;
    }
    auto side_a = joint_subsample_law(shapes, claw.law.disp, k);
    auto sym_shapes = symmetrize_shape_law(shapes);
    auto sym_fam = symmetrize_family(claw.law.disp);
    auto side_b = joint_subsample_law(sym_shapes, sym_fam, k);
    int diffs = 0;
    for (auto& [key, w] : side_a.p) {
        auto it = side_b.p.find(key);
        if (it == side_b.p.end() || !(it->second == w)) diffs++;
    }
    for (auto& [key, w] : side_b.p)
        if (!side_a.p.count(key)) diffs++;
    r.statistic = diffs;
    r.threshold = 0;
    r.pass = diffs == 0 && side_a.total() == side_b.total();
    r.sizes["outcomes"] = (long long)side_a.p.size();
    r.sizes["shapes"] = (long long)shapes.size();
    return r;
}

std::vector<TestReport> eqdist_suite(int k_max, int max_vertices) {
    std::vector<TestReport> out;
    for (auto& law : builtin_law_corpus())
        for (int k = 1; k <= k_max; ++k) out.push_back(eqdist_check(law, k, max_vertices));
    // sensitivity: the sibling-dependent law must fail for k = 2
    {
        auto adv = AdversarialLaw::make();
        auto atoms = adv.outcomes();
        auto side_a = joint_subsample_law_explicit(atoms, 2);
        auto side_b = joint_subsample_law_explicit(symmetrize_explicit(atoms), 2);
        bool equal = side_a == side_b;
        TestReport r;
        r.name = "eqdist/adversarial-control/k2";
        r.mode = "exact";
        r.statistic = equal ? 0 : 1;
        r.threshold = 0;
        r.pass = !equal;  // the control must detect the broken law
        r.note = "non-valid law must differ from its symmetrization";
        out.push_back(r);
    }
    return out;
}

// ----- fdd comparison --------------------------------------------------------

namespace {

std::vector<double> cz_at_sorted_uniforms(const TypedTree& t, const std::vector<double>& xs,
                                          double cscale, double zscale) {
    auto C = contour_process(t);
    auto Z = label_process(t);
    std::vector<double> v;
    v.reserve(2 * xs.size());
    for (double x : xs) {
        v.push_back(C.at(x) * cscale);
        v.push_back(Z.at(x) * zscale);
    }
    return v;
}

}  // namespace

TestReport fdd_compare_mobile(const MobileParams& params, int n1, int k, int samples,
                              std::uint64_t seed, int permutations) {
    MobileSampler sampler(params);
    double cscale = 1.0 / std::sqrt(double(n1));
    double zscale = 1.0 / std::pow(double(n1), 0.25);
    std::vector<std::vector<double>> a(samples), b(samples);
    std::atomic<int> next{0};
    auto worker = [&](int wid) {
        Rng rng(seed * 0x9E3779B9u + wid + 1);
        int i;
        while ((i = next.fetch_add(1)) < samples) {
            Rng si = rng.split(i);
            std::vector<double> xs(k);
            for (auto& x : xs) x = si.uniform();
            std::sort(xs.begin(), xs.end());
            TypedTree t1 = sampler.sample(n1, MapSign::Plus, si);
            a[i] = cz_at_sorted_uniforms(t1, xs, cscale, zscale);
            TypedTree t2 = sampler.sample(n1, MapSign::Plus, si);
            TypedTree t2s = sample_symmetrization(t2, si);
            b[i] = cz_at_sorted_uniforms(t2s, xs, cscale, zscale);
        }
    };
    {
        std::vector<std::thread> ws;
        for (int w = 0; w < 2; ++w) ws.emplace_back(worker, w);
        for (auto& t : ws) t.join();
    }
    TestReport r;
    r.name = "fdd/mobile-vs-symmetrized/n1=" + std::to_string(n1);
    r.mode = "energy";
    r.seed = seed;
    r.sizes["samples"] = samples;
    r.sizes["k"] = k;
    r.sizes["permutations"] = permutations;
    r.statistic = energy_permutation_pvalue(a, b, permutations, seed ^ 0xABCDEF, 2);
    r.threshold = 0.001;
    r.pass = r.statistic > r.threshold;
    return r;
}

TestReport fdd_compare_adversarial(int k, int samples, std::uint64_t seed, int permutations) {
    auto adv = AdversarialLaw::make();
    std::vector<std::vector<double>> a(samples), b(samples);
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        std::vector<double> xs(k);
        for (auto& x : xs) x = rng.uniform();
        std::sort(xs.begin(), xs.end());
        TypedTree t1 = adv.sample(rng);
        a[i] = cz_at_sorted_uniforms(t1, xs, 1.0, 1.0);
        TypedTree t2 = adv.sample(rng);
        TypedTree t2s = sample_symmetrization(t2, rng);
        b[i] = cz_at_sorted_uniforms(t2s, xs, 1.0, 1.0);
    }
    TestReport r;
    r.name = "fdd/adversarial-control";
    r.mode = "energy";
    r.seed = seed;
    r.sizes["samples"] = samples;
    r.sizes["k"] = k;
    r.statistic = energy_permutation_pvalue(a, b, permutations, seed ^ 0xFEDCBA, 2);
    r.threshold = 0.001;
    r.pass = r.statistic <= r.threshold;  // designed to fail the equality test
    r.note = "sensitivity control: test must reject";
    return r;
}

// ----- centering audit -------------------------------------------------------

std::vector<TestReport> centering_audit(int max_children) {
    std::vector<TestReport> out;
    auto fam = bdg_displacement_family(max_children);
    {
        TestReport r;
        r.name = "centering/family-centered";
        r.mode = "exact";
        r.pass = centering_check(fam, Centering::Centered);
        r.statistic = r.pass ? 1 : 0;
        r.threshold = 1;
        out.push_back(r);
    }
    {
        TestReport r;
        r.name = "centering/family-not-locally-centered";
        r.mode = "exact";
        bool local = centering_check(fam, Centering::Local);
        // exact witness: a coordinate with nonzero mean
        std::string witness;
        for (auto& [key, d] : fam.entries) {
            size_t arity = d.atoms.front().first.size();
            std::vector<Rational> m(arity);
            for (auto& [x, w] : d.atoms)
                for (size_t i = 0; i < arity; ++i) m[i] += Rational(x[i]) * w;
            for (size_t i = 0; i < arity; ++i)
                if (!m[i].is_zero() && witness.empty())
                    witness = key + " coord " + std::to_string(i) + " mean " + m[i].str() + "/2";
        }
        r.pass = !local && !witness.empty();
        r.statistic = local ? 0 : 1;
        r.threshold = 1;
        r.note = "witness: " + witness;
        out.push_back(r);
    }
    {
        TestReport r;
        r.name = "centering/symmetrized-locally-centered";
        r.mode = "exact";
        r.pass = centering_check(symmetrize_family(fam), Centering::Local);
        r.statistic = r.pass ? 1 : 0;
        r.threshold = 1;
        out.push_back(r);
    }
    return out;
}

// ----- scaling ---------------------------------------------------------------

ScalingResult scaling_estimate(const WeightSeq& q, const std::vector<int>& n_list, int reps,
                               const std::vector<ScalingFunctional>& functionals, std::uint64_t seed,
                               int threads) {
    if (n_list.size() < 2) throw std::invalid_argument("scaling_estimate: regression needs >= 2 sizes");
    auto params = solve_constants(q);
    MobileSampler sampler(params);

    // one ensemble per n, shared by all functionals
    std::map<ScalingFunctional, std::vector<std::vector<double>>> values;
    for (auto f : functionals) values[f].assign(n_list.size(), std::vector<double>(reps, 0.0));

    for (size_t ni = 0; ni < n_list.size(); ++ni) {
        int n = n_list[ni];
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        auto worker = [&]() {
            int rep;
            while ((rep = next.fetch_add(1)) < reps && !failed.load()) {
                Rng rng(seed ^ (0x51ED2700ULL * (n + 1)) ^ (0xABCD1234ULL * (rep + 7)));
                try {
                    auto bs = boltzmann_sample(params, n, MapSign::Plus, rng);
                    for (auto f : functionals) {
                        double val = 0;
                        if (f == ScalingFunctional::LabelRange) {
                            auto l2 = bs.mobile.labels2();
                            auto [mn, mx] = std::minmax_element(l2.begin(), l2.end());
                            val = double(*mx - *mn) / 2.0;
                        } else if (f == ScalingFunctional::Height) {
                            val = bs.mobile.height();
                        } else {
                            int u = int(rng.below(bs.map.V)), v = int(rng.below(bs.map.V));
                            val = bfs_distance(bs.map, u)[v];
                        }
                        values[f][ni][rep] = val;
                    }
                } catch (const Exhaustion&) {
                    failed.store(true);
                }
            }
        };
        std::vector<std::thread> ws;
        for (int w = 0; w < threads; ++w) ws.emplace_back(worker);
        for (auto& t : ws) t.join();
        if (failed.load()) throw Exhaustion(-1);
    }

    ScalingResult out;
    for (auto f : functionals) {
        std::vector<double> lx, ly;
        std::string means;
        for (size_t ni = 0; ni < n_list.size(); ++ni) {
            double mean = 0;
            for (double v : values[f][ni]) mean += v;
            mean /= reps;
            lx.push_back(std::log(double(n_list[ni])));
            ly.push_back(std::log(mean));
            means += std::to_string(n_list[ni]) + ":" + std::to_string(mean) + " ";
        }
        auto fit = fit_slope(lx, ly);
        TestReport r;
        double target = (f == ScalingFunctional::Height) ? 0.5 : 0.25;
        r.name = std::string("scaling/") + (f == ScalingFunctional::LabelRange  ? "label-range"
                                            : f == ScalingFunctional::Height   ? "height"
                                                                               : "distance-pair");
        r.mode = "regression";
        r.statistic = fit.slope;
        r.threshold = 0.05;
        r.pass = std::fabs(fit.slope - target) <= 0.05;
        r.seed = seed;
        r.sizes["reps"] = reps;
        r.sizes["sizes"] = (long long)n_list.size();
        r.note = "target " + std::to_string(target) + ", stderr " + std::to_string(fit.stderr_slope) +
                 ", means " + means;
        out.reports.push_back(r);
    }
    return out;
}

// ----- snake comparisons -------------------------------------------------------

std::vector<TestReport> snake_compare(const WeightSeq& q, int n, int samples, std::uint64_t seed) {
    std::vector<TestReport> out;
    auto params = solve_constants(q);
    MobileSampler sampler(params);
    int n1 = n - 1;

    std::vector<double> c_half(samples), z_half(samples), lam_resid;
    std::vector<std::vector<double>> cz_a(samples), cz_b(samples);
    double gamma2_acc = 0;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        TypedTree t = sampler.sample(n1, MapSign::Plus, rng);
        auto C = contour_process(t);
        auto Z = label_process(t);
        c_half[i] = C.at(0.5);
        z_half[i] = Z.at(0.5);
        cz_a[i] = {C.at(0.5) / std::sqrt(double(n1)), Z.at(0.5) / std::pow(double(n1), 0.25)};
        TypedTree ts = sample_symmetrization(sampler.sample(n1, MapSign::Plus, rng), rng);
        auto Cs = contour_process(ts);
        auto Zs = label_process(ts);
        cz_b[i] = {Cs.at(0.5) / std::sqrt(double(n1)), Zs.at(0.5) / std::pow(double(n1), 0.25)};
        // type-2 occupation linearity
        auto lam = type_count_process(t, 2);
        double gamma = lam.v.back() / double(t.size());
        gamma2_acc += gamma;
        double resid = 0;
        for (int j = 0; j <= lam.N; ++j)
            resid = std::max(resid, std::fabs(lam.v[j] / double(t.size()) - gamma * (double(j) / lam.N)));
        lam_resid.push_back(resid);
    }

    {  // Lambda^(2) linearity, fitted slope
        double mean_resid = 0;
        for (double v : lam_resid) mean_resid += v;
        mean_resid /= samples;
        TestReport r;
        r.name = "snake/lambda2-linearity";
        r.mode = "regression";
        r.statistic = mean_resid;
        r.threshold = 0.08;  // documented finite-n policy at moderate n
        r.pass = mean_resid < r.threshold;
        r.seed = seed;
        r.sizes["n1"] = n1;
        r.sizes["samples"] = samples;
        r.note = "gamma2_hat = " + std::to_string(gamma2_acc / samples);
        out.push_back(r);
    }
    {  // contour value at s = 1/2 vs Brownian excursion reference, free scale
        Rng rng2(seed ^ 0x5eed);
        int m = samples;
        std::vector<double> ref(m);
        for (int i = 0; i < m; ++i) ref[i] = brownian_snake_sample(256, rng2).e.at(0.5);
        // scale fitted on a holdout half
        int h = samples / 2;
        double mc = 0, mr = 0;
        for (int i = 0; i < h; ++i) {
            mc += c_half[i];
            mr += ref[i];
        }
        double a = (mr / h) / (mc / h);
        std::vector<double> test_c;
        for (int i = h; i < samples; ++i) test_c.push_back(c_half[i] * a);
        std::vector<double> test_r(ref.begin() + h, ref.end());
        TestReport r;
        r.name = "snake/contour-vs-excursion";
        r.mode = "KS";
        r.statistic = ks_two_sample_pvalue(test_c, test_r);
        r.threshold = 0.001;
        r.pass = r.statistic > r.threshold;
        r.seed = seed;
        r.sizes["samples"] = samples - h;
        r.note = "free scale fitted on holdout: a = " + std::to_string(a);
        out.push_back(r);
    }
    {  // label value at s = 1/2 vs snake labels, free scale
        Rng rng2(seed ^ 0x7eed);
        std::vector<double> ref(samples);
        for (int i = 0; i < samples; ++i) ref[i] = brownian_snake_sample(256, rng2).Z.at(0.5);
        int h = samples / 2;
        double mc = 0, mr = 0;
        for (int i = 0; i < h; ++i) {
            mc += std::fabs(z_half[i]);
            mr += std::fabs(ref[i]);
        }
        double b = (mr / h) / (mc / h);
        std::vector<double> test_z;
        for (int i = h; i < samples; ++i) test_z.push_back(z_half[i] * b);
        std::vector<double> test_r(ref.begin() + h, ref.end());
        TestReport r;
        r.name = "snake/label-vs-snake";
        r.mode = "KS";
        r.statistic = ks_two_sample_pvalue(test_z, test_r);
        r.threshold = 0.001;
        r.pass = r.statistic > r.threshold;
        r.seed = seed;
        r.sizes["samples"] = samples - h;
        r.note = "free scale fitted on holdout: b = " + std::to_string(b);
        out.push_back(r);
    }
    {  // symmetrized vs raw ensembles agree in law
        TestReport r;
        r.name = "snake/symmetrized-functionals";
        r.mode = "energy";
        r.statistic = energy_permutation_pvalue(cz_a, cz_b, 999, seed ^ 0x9eed, 2);
        r.threshold = 0.001;
        r.pass = r.statistic > r.threshold;
        r.seed = seed;
        r.sizes["samples"] = samples;
        out.push_back(r);
    }
    return out;
}

// ----- bijection audit ---------------------------------------------------------

namespace {

std::string face_multiset_key(const std::vector<int>& degs) {
    std::string s;
    for (int d : degs) s += std::to_string(d) + ",";
    return s;
}

std::vector<int> mobile_face_degrees(const TypedTree& t) {
    std::vector<int> out;
    for (int v = 0; v < t.size(); ++v) {
        if (t.type[v] != 3 && t.type[v] != 4) continue;
        int k = 0, kp = 0;
        for (int c : t.kids[v]) (t.type[c] == 1 ? k : kp)++;
        out.push_back(2 * k + kp + (t.type[v] == 3 ? 2 : 1));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<TestReport> bijection_audit(int max_edges, const std::set<int>& q_support) {
    std::vector<TestReport> out;
    auto pointed = enumerate_pointed_maps(max_edges, {});

    long long roundtrip_fail = 0, propii_fail = 0, mobile_invalid = 0, total_nontrivial = 0;
    // cardinality buckets: (sign, vertices, face multiset) -> count, restricted
    // to the q-support when one is given
    std::map<std::string, long long> map_buckets;
    int max_n_seen = 1;

    for (auto& m0 : pointed) {
        if (m0.is_vertex_map()) continue;
        HalfEdgeMap m = m0;
        MapSign sign = classify_sign(m);
        if (sign == MapSign::Minus) continue;  // counted through reversal
        total_nontrivial++;
        bool support_ok = true;
        if (!q_support.empty())
            for (int d : face_degrees(m))
                if (!q_support.count(d)) support_ok = false;
        try {
            auto fw = bdg_forward(m);
            auto chk = check_mobile(fw.mobile);
            if (!chk.ok) {
                mobile_invalid++;
            } else {
                if (sign == MapSign::Plus) {
                    // distance identity: dist(v, point) = label - min + 1, the
                    // min over type-1 labels (a point-loop flag can dip below)
                    auto dist = bfs_distance(m, m.pointed);
                    auto l2 = fw.mobile.labels2();
                    std::int64_t minl2 = std::numeric_limits<std::int64_t>::max();
                    for (int v = 0; v < fw.mobile.size(); ++v)
                        if (fw.mobile.type[v] == 1) minl2 = std::min(minl2, l2[v]);
                    for (int v = 0; v < fw.mobile.size(); ++v) {
                        if (fw.map_vertex_of[v] < 0) continue;
                        long long rhs2 = l2[v] - minl2 + 2;
                        if (2LL * dist[fw.map_vertex_of[v]] != rhs2) propii_fail++;
                    }
                }
                auto inv = bdg_inverse(fw.mobile, sign);
                if (canonical_pointed_form(inv.map) != canonical_pointed_form(m)) roundtrip_fail++;
                if (support_ok) {
                    std::string key = (sign == MapSign::Plus ? "+" : "0");
                    key += "|n" + std::to_string(m.V) + "|" + face_multiset_key(face_degrees(m));
                    map_buckets[key]++;
                    max_n_seen = std::max(max_n_seen, m.V);
                }
            }
        } catch (const std::exception&) {
            mobile_invalid++;
        }
    }

    {
        TestReport r;
        r.name = "bijection/roundtrip";
        r.mode = "exact";
        r.statistic = double(roundtrip_fail + mobile_invalid);
        r.threshold = 0;
        r.pass = roundtrip_fail == 0 && mobile_invalid == 0;
        r.sizes["maps"] = total_nontrivial;
        r.sizes["max_edges"] = max_edges;
        out.push_back(r);
    }
    {
        TestReport r;
        r.name = "bijection/label-distance-identity";
        r.mode = "exact";
        r.statistic = double(propii_fail);
        r.threshold = 0;
        r.pass = propii_fail == 0;
        r.sizes["maps"] = total_nontrivial;
        out.push_back(r);
    }
    {
        // cardinalities: enumerate mobiles per (sign, n, face multiset)
        std::map<std::string, long long> mobile_buckets;
        for (int n = 2; n <= max_edges + 2; ++n) {
            for (MapSign sign : {MapSign::Plus, MapSign::Null}) {
                if (sign == MapSign::Null && n < 1) continue;
                int n1 = n - 1;
                for (auto& t : enumerate_labeled_mobiles(n1, max_edges, sign, q_support)) {
                    std::string key = (sign == MapSign::Plus ? "+" : "0");
                    key += "|n" + std::to_string(n) + "|" + face_multiset_key(mobile_face_degrees(t));
                    mobile_buckets[key]++;
                }
            }
        }
        // null mobiles exist for n = 1 as well (loops at the point)
        for (auto& t : enumerate_labeled_mobiles(0, max_edges, MapSign::Null, q_support)) {
            std::string key = "0|n1|" + face_multiset_key(mobile_face_degrees(t));
            mobile_buckets[key]++;
        }
        long long mismatches = 0;
        for (auto& [key, cnt] : map_buckets)
            if (mobile_buckets[key] != cnt) mismatches++;
        for (auto& [key, cnt] : mobile_buckets)
            if (cnt > 0 && map_buckets.find(key) == map_buckets.end()) mismatches++;
        TestReport r;
        r.name = "bijection/cardinalities";
        r.mode = "exact";
        r.statistic = double(mismatches);
        r.threshold = 0;
        r.pass = mismatches == 0;
        r.sizes["map_buckets"] = (long long)map_buckets.size();
        r.sizes["mobile_buckets"] = (long long)mobile_buckets.size();
        out.push_back(r);
    }
    if (!q_support.empty()) {
        // Boltzmann pushforward at the smallest feasible size: the conditioned
        // mobile law must be proportional to the product of face weights
        WeightSeq q;
        for (int d : q_support) q.q.push_back({d, 1.0});
        TestReport r;
        r.name = "bijection/boltzmann-pushforward";
        r.mode = "regression";
        try {
            auto params = solve_constants(q);
            int nstar = -1;
            std::vector<TypedTree> mobiles;
            for (int n = 2; n <= 8 && nstar < 0; ++n) {
                auto ms = enumerate_labeled_mobiles(n - 1, 6, MapSign::Plus, q_support);
                if (!ms.empty()) {
                    nstar = n;
                    mobiles = std::move(ms);
                }
            }
            if (nstar < 0) throw std::runtime_error("no feasible size up to 8 vertices");
            double lo = std::numeric_limits<double>::infinity(), hi = 0;
            int emax = 1;
            for (auto& t : mobiles) {
                double w = 1.0;
                auto degs = mobile_face_degrees(t);
                for (int d : degs) w *= params.effective_weight(d);
                double ratio = mobile_labeled_prob(params, t) / w;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                emax = std::max(emax, nstar + int(degs.size()) - 2);
            }
            long long nmaps = 0;
            for (auto& m : enumerate_pointed_maps(emax, q_support))
                if (!m.is_vertex_map() && m.V == nstar && classify_sign(m) == MapSign::Plus) nmaps++;
            r.statistic = (hi - lo) / hi;
            r.threshold = 1e-8;
            r.pass = r.statistic <= r.threshold && nmaps == (long long)mobiles.size();
            r.sizes["n"] = nstar;
            r.sizes["mobiles"] = (long long)mobiles.size();
            r.sizes["maps"] = nmaps;
            r.note = "Zplus=" + std::to_string(params.Zplus) + " Zzero=" + std::to_string(params.Zzero) +
                     " scale=" + std::to_string(params.scale);
        } catch (const std::exception& e) {
            r.pass = false;
            r.note = e.what();
        }
        out.push_back(r);
    }
    {
        // negative control: with the face traversal flipped against the vertex
        // rotation, the construction stops being the inverse's inverse (the
        // label-distance identity alone is chirality-blind, so the round trip
        // is the sensitive check)
        long long failures = 0, tried = 0;
        for (auto& m : pointed) {
            if (m.is_vertex_map() || m.edges() > 3) continue;
            MapSign s = classify_sign(m);
            if (s == MapSign::Minus) continue;
            tried++;
            try {
                auto fw = bdg_forward(m, true);
                auto chk = check_mobile(fw.mobile);
                if (!chk.ok) {
                    failures++;
                    continue;
                }
                auto inv = bdg_inverse(fw.mobile, s);
                if (canonical_pointed_form(inv.map) != canonical_pointed_form(m)) failures++;
            } catch (const std::exception&) {
                failures++;
            }
        }
        TestReport r;
        r.name = "bijection/flipped-chirality-control";
        r.mode = "exact";
        r.statistic = double(failures);
        r.threshold = 1;
        r.pass = failures >= 1;
        r.sizes["maps"] = tried;
        r.note = "mutation control: flipped face traversal must break round trips";
        out.push_back(r);
    }
    return out;
}

// ----- deterministic identities -------------------------------------------------

namespace {

int tree_dist_via_parents(const TypedTree& t, const std::vector<std::int32_t>& depth, int u, int v) {
    int d = 0;
    while (u != v) {
        if (depth[u] < depth[v]) std::swap(u, v);
        u = t.parent[u];
        d++;
    }
    return d;
}

// max doubled label within distance <= alpha of each vertex (exact ball DP;
// labels fit in int32 for the displacement ranges used here)
std::vector<std::int64_t> ball_max_labels(const TypedTree& t, int alpha) {
    int n = t.size();
    auto l2big = t.labels2();
    std::vector<std::int32_t> l2(l2big.begin(), l2big.end());
    const std::int32_t NEG = std::numeric_limits<std::int32_t>::min() / 4;
    std::vector<std::vector<std::int32_t>> down(n), up(n);
    for (int v = n - 1; v >= 0; --v) {
        down[v].assign(alpha + 1, l2[v]);
        for (int c : t.kids[v])
            for (int d = 1; d <= alpha; ++d) down[v][d] = std::max(down[v][d], down[c][d - 1]);
    }
    for (int v = 0; v < n; ++v) up[v].assign(alpha + 1, NEG);
    for (int v = 0; v < n; ++v) {
        int k = t.kcount(v);
        if (k == 0) continue;
        std::vector<std::vector<std::int32_t>> pre(k + 1), suf(k + 1);
        pre[0].assign(alpha + 1, NEG);
        for (int i = 0; i < k; ++i) {
            pre[i + 1] = pre[i];
            for (int d = 0; d <= alpha; ++d) pre[i + 1][d] = std::max(pre[i + 1][d], down[t.kids[v][i]][d]);
        }
        suf[k].assign(alpha + 1, NEG);
        for (int i = k - 1; i >= 0; --i) {
            suf[i] = suf[i + 1];
            for (int d = 0; d <= alpha; ++d) suf[i][d] = std::max(suf[i][d], down[t.kids[v][i]][d]);
        }
        for (int i = 0; i < k; ++i) {
            int c = t.kids[v][i];
            for (int d = 1; d <= alpha; ++d) {
                std::int32_t best = l2[v];
                if (up[v][d - 1] > best) best = up[v][d - 1];
                if (d >= 2) {
                    std::int32_t sib = std::max(pre[i][d - 2], suf[i + 1][d - 2]);
                    if (sib > best) best = sib;
                }
                up[c][d] = best;
            }
        }
    }
    std::vector<std::int64_t> out(n);
    for (int v = 0; v < n; ++v) out[v] = std::max({l2[v], down[v][alpha], up[v][alpha]});
    return out;
}

TypedTree random_labeled_tree(Rng& rng, int cap, int min_size) {
    // critical geometric(1/2) offspring, displacements uniform on {-3..3}/2
    while (true) {
        std::vector<int> ks;
        long long pending = 1;
        bool ok = true;
        while (pending > 0) {
            if (int(ks.size()) >= cap) {
                ok = false;
                break;
            }
            int k = 0;
            while (rng.uniform() >= 0.5) ++k;
            ks.push_back(k);
            pending += k - 1;
        }
        if (!ok || int(ks.size()) < min_size) continue;
        int n = int(ks.size());
        std::vector<std::int64_t> d(n - 1);
        for (auto& x : d) x = std::int64_t(rng.below(7)) - 3;
        return tree_from_lex(std::vector<std::uint8_t>(n, 0), ks, d);
    }
}

}  // namespace

std::vector<TestReport> identity_suite(std::uint64_t seed) {
    std::vector<TestReport> out;

    {  // contour-distance grid identity over all plane trees with <= 12 vertices
        long long fails = 0, trees = 0, pairs = 0;
        for (int n = 1; n <= 12; ++n)
            for (auto& prof : plane_tree_profiles(n)) {
                auto t = tree_from_kcounts(prof);
                trees++;
                if (n == 1) continue;
                auto theta = contour(t);
                auto C = contour_process(t);
                auto dm = tree_distance_matrix(t);
                int N = C.N;
                for (int i = 0; i <= N; ++i)
                    for (int j = i; j <= N; ++j) {
                        pairs++;
                        double want = dm[theta[i]][theta[j]];
                        if (std::fabs(dist_on_contour(C, double(i) / N, double(j) / N) - want) > 1e-9) fails++;
                    }
            }
        TestReport r;
        r.name = "identities/contour-grid-distance";
        r.mode = "exact";
        r.statistic = double(fails);
        r.threshold = 0;
        r.pass = fails == 0;
        r.sizes["trees"] = trees;
        r.sizes["pairs"] = pairs;
        out.push_back(r);
    }

    {  // time-change bounds and reordering invariances on random labeled trees
        Rng rng(seed);
        long long ch_fail = 0, sz_fail = 0, phi_fail = 0, disp_fail = 0;
        int trees = 1000;
        for (int ti = 0; ti < trees; ++ti) {
            bool big = ti % 50 == 0;
            TypedTree t = random_labeled_tree(rng, 10000, big ? 2000 : 2);
            int n = t.size();
            auto depth = t.depths();
            auto l2 = t.labels2();
            int height = *std::max_element(depth.begin(), depth.end());

            auto tc = lex_time_change(t);
            auto C = contour_process(t);
            auto Z = label_process(t);
            auto [H, S] = height_lex_processes(t);
            int N = C.N;

            // alpha_t = 2 + max consecutive lexicographic distance (with wrap)
            int alpha = 0;
            for (int i = 0; i < n; ++i) {
                int j = (i + 1) % n;
                alpha = std::max(alpha, tree_dist_via_parents(t, depth, i, j));
            }
            alpha += 2;

            // sup |C - H(phi)| and sup |Z - S(phi)| on the contour grid with both
            // one-sided phi values (phi jumps exactly at grid points)
            double ch_sup = 0, sz_sup = 0, phi_sup = 0;
            for (int k = 0; k <= N; ++k) {
                double phi_here = tc.phi.v[k];
                double c_here = C.v[k], z_here = Z.v[k];
                ch_sup = std::max(ch_sup, std::fabs(c_here - H.at(phi_here)));
                sz_sup = std::max(sz_sup, std::fabs(z_here - S.at(phi_here)));
                if (k < N) {
                    ch_sup = std::max(ch_sup, std::fabs(C.v[k + 1] - H.at(phi_here)));
                    sz_sup = std::max(sz_sup, std::fabs(Z.v[k + 1] - S.at(phi_here)));
                }
                phi_sup = std::max(phi_sup, std::fabs(phi_here - double(k) / N));
                if (k < N) phi_sup = std::max(phi_sup, std::fabs(phi_here - double(k + 1) / N));
            }
            if (ch_sup > alpha + 1e-9) ch_fail++;
            if (double(N) * phi_sup > 4.0 + height + 1e-9) phi_fail++;

            // exact ball maximum for the label bound; when alpha reaches the
            // diameter the ball is the whole tree
            int diam = 0;
            {
                int far = 0;
                for (int v = 0; v < n; ++v)
                    if (depth[v] > depth[far]) far = v;
                for (int v = 0; v < n; ++v) diam = std::max(diam, tree_dist_via_parents(t, depth, far, v));
            }
            std::int64_t rhs2;
            if (alpha >= diam) {
                auto [mn, mx] = std::minmax_element(l2.begin(), l2.end());
                rhs2 = *mx - *mn;
            } else {
                auto bm = ball_max_labels(t, alpha);
                rhs2 = 0;
                for (int v = 0; v < n; ++v) rhs2 = std::max(rhs2, bm[v] - l2[v]);
            }
            if (sz_sup > double(rhs2) / 2.0 + 1e-9) sz_fail++;

            // max displacement magnitude is invariant under reordering
            if (t.size() <= 2000) {
                std::int64_t md = 0;
                for (auto d : t.disp2) md = std::max(md, std::abs(d));
                for (int s = 0; s < (ti % 10 == 0 ? 100 : 3); ++s) {
                    auto ts = sample_symmetrization(t, rng);
                    std::int64_t md2 = 0;
                    for (auto d : ts.disp2) md2 = std::max(md2, std::abs(d));
                    if (md2 != md) disp_fail++;
                }
            }
        }
        TestReport r;
        r.name = "identities/time-change-bounds";
        r.mode = "exact";
        r.statistic = double(ch_fail + sz_fail + phi_fail);
        r.threshold = 0;
        r.pass = ch_fail + sz_fail + phi_fail == 0;
        r.seed = seed;
        r.sizes["trees"] = trees;
        out.push_back(r);
        TestReport r2;
        r2.name = "identities/max-displacement-invariance";
        r2.mode = "exact";
        r2.statistic = double(disp_fail);
        r2.threshold = 0;
        r2.pass = disp_fail == 0;
        r2.seed = seed;
        out.push_back(r2);
    }
    return out;
}

TestReport snake_covariance_check(int N, int samples, std::uint64_t seed, double rel_tol) {
    Rng rng(seed);
    std::vector<double> ss{0.25, 0.5, 0.75};
    int G = int(ss.size());
    std::vector<std::vector<double>> zz(G, std::vector<double>(G, 0.0)), me = zz;
    for (int it = 0; it < samples; ++it) {
        auto s = brownian_snake_sample(N, rng);
        for (int i = 0; i < G; ++i)
            for (int j = i; j < G; ++j) {
                zz[i][j] += s.Z.at(ss[i]) * s.Z.at(ss[j]);
                me[i][j] += s.e.interval_min(ss[i], ss[j]);
            }
    }
    double worst = 0;
    for (int i = 0; i < G; ++i)
        for (int j = i; j < G; ++j) {
            double cov = zz[i][j] / samples, ref = me[i][j] / samples;
            worst = std::max(worst, std::fabs(cov - ref) / ref);
        }
    TestReport r;
    r.name = "snake/covariance-grid";
    r.mode = "exact";
    r.statistic = worst;
    r.threshold = rel_tol;
    r.pass = worst < rel_tol;
    r.seed = seed;
    r.sizes["samples"] = samples;
    r.sizes["N"] = N;
    return r;
}

// ----- GH audit -------------------------------------------------------------------

namespace {

FiniteMetricMeasureSpace random_four_point_space(Rng& rng) {
    // metric via shortest-path closure of random weights
    int n = 4;
    FiniteMetricMeasureSpace X;
    X.dist.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) X.dist[i][j] = X.dist[j][i] = 1.0 + rng.below(16) / 4.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                X.dist[i][j] = std::min(X.dist[i][j], X.dist[i][k] + X.dist[k][j]);
    X.weights.assign(n, 0.25);
    return X;
}

double gh_bruteforce_4pt(const FiniteMetricMeasureSpace& X, const FiniteMetricMeasureSpace& Y) {
    int n = X.size(), m = Y.size();
    double best = std::numeric_limits<double>::infinity();
    // every correspondence: nonempty mask per x, jointly covering Y
    std::vector<int> masks(n, 1);
    std::function<void(int, int)> rec = [&](int i, int covered) {
        if (i == n) {
            if (covered != (1 << m) - 1) return;
            double dis = 0;
            for (int x1 = 0; x1 < n; ++x1)
                for (int y1 = 0; y1 < m; ++y1) {
                    if (!(masks[x1] >> y1 & 1)) continue;
                    for (int x2 = 0; x2 < n; ++x2)
                        for (int y2 = 0; y2 < m; ++y2)
                            if (masks[x2] >> y2 & 1)
                                dis = std::max(dis, std::fabs(X.dist[x1][x2] - Y.dist[y1][y2]));
                }
            best = std::min(best, dis / 2.0);
            return;
        }
        for (int mask = 1; mask < (1 << m); ++mask) {
            masks[i] = mask;
            rec(i + 1, covered | mask);
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

std::vector<TestReport> gh_audit(int instances, std::uint64_t seed) {
    std::vector<TestReport> out;
    Rng rng(seed);
    long long mismatches = 0, ghp_below = 0;
    for (int i = 0; i < instances; ++i) {
        auto X = random_four_point_space(rng);
        auto Y = random_four_point_space(rng);
        X.check_valid();
        Y.check_valid();
        double got = gh_distance_exact(X, Y);
        double want = gh_bruteforce_4pt(X, Y);
        if (std::fabs(got - want) > 1e-12) mismatches++;
        // GHP with perturbed weights dominates GH
        auto Y2 = Y;
        Y2.weights = {0.55, 0.2, 0.15, 0.1};
        double ghp = ghp_distance_exact(X, Y2);
        if (ghp + 1e-12 < got) ghp_below++;
    }
    {
        TestReport r;
        r.name = "gh/agrees-with-bruteforce";
        r.mode = "exact";
        r.statistic = double(mismatches);
        r.threshold = 0;
        r.pass = mismatches == 0;
        r.seed = seed;
        r.sizes["instances"] = instances;
        out.push_back(r);
    }
    {
        // two-point spaces: |a-b|/2
        long long fails = 0;
        for (int i = 0; i < 20; ++i) {
            double a = 1.0 + rng.below(10), b = 1.0 + rng.below(10);
            FiniteMetricMeasureSpace X, Y;
            X.dist = {{0, a}, {a, 0}};
            X.weights = {0.5, 0.5};
            Y.dist = {{0, b}, {b, 0}};
            Y.weights = {0.5, 0.5};
            if (std::fabs(gh_distance_exact(X, Y) - std::fabs(a - b) / 2.0) > 1e-12) fails++;
        }
        TestReport r;
        r.name = "gh/two-point-formula";
        r.mode = "exact";
        r.statistic = double(fails);
        r.threshold = 0;
        r.pass = fails == 0;
        out.push_back(r);
    }
    {
        TestReport r;
        r.name = "ghp/dominates-gh";
        r.mode = "exact";
        r.statistic = double(ghp_below);
        r.threshold = 0;
        r.pass = ghp_below == 0;
        r.sizes["instances"] = instances;
        out.push_back(r);
    }
    return out;
}

}  // namespace mobmap
