#include "mobmap/mobile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace mobmap {

namespace {

double multinomial(int n, int a, int b, int c) {
    // n! / (a! b! c!) with a+b+c = n, small n
    double r = 1.0;
    int parts[3] = {a, b, c};
    int num = n;
    for (int p : parts)
        for (int i = 1; i <= p; ++i) r *= double(num--) / double(i);
    return r;
}

struct ZetaSupport {
    std::vector<std::tuple<int, int, double>> z3, z4;  // (k, k', coefficient without Z powers)
};

// atoms (k,k') with their q-weight and multinomial coefficient
ZetaSupport zeta_support(const WeightSeq& q, double scale) {
    ZetaSupport s;
    for (auto& [deg, w] : q.q) {
        if (w <= 0) continue;
        double qc = scale * w;
        for (int k = 0; 2 * k + 2 <= deg; ++k) {
            int kp = deg - 2 - 2 * k;
            s.z3.push_back({k, kp, multinomial(2 * k + kp + 1, k + 1, k, kp) * qc});
        }
        for (int k = 0; 2 * k + 1 <= deg; ++k) {
            int kp = deg - 1 - 2 * k;
            s.z4.push_back({k, kp, multinomial(2 * k + kp, k, k, kp) * qc});
        }
    }
    return s;
}

double eval_g(const ZetaSupport& s, double zp, double z0) {
    double g = 0;
    for (auto& [k, kp, c] : s.z3) g += c * std::pow(zp, k) * std::pow(z0, kp / 2.0);
    return g;
}
double eval_h(const ZetaSupport& s, double zp, double z0) {
    double h = 0;
    for (auto& [k, kp, c] : s.z4) h += c * std::pow(zp, k) * std::pow(z0, kp / 2.0);
    return h;
}

struct IterResult {
    bool converged;
    double zp, z0, residual;
};

// Damped fixed-point iteration on Zplus = 1 + Zplus*g, Zzero = h^2. The map is
// componentwise monotone, so iterating up from (1, 0) converges to the
// smallest solution exactly when one exists. (Starting above, e.g. at
// (1.5, 1.0), can escape the basin in the bipartite case.)
IterResult iterate_constants(const ZetaSupport& s, double tol, int cap) {
    double zp = 1.0, z0 = 0.0;
    const double damp = 0.5;
    for (int it = 0; it < cap; ++it) {
        double g = eval_g(s, zp, z0);
        double h = eval_h(s, zp, z0);
        if (!std::isfinite(g) || !std::isfinite(h) || zp > 1e9 || z0 > 1e9)
            return {false, zp, z0, 1.0};
        double nzp = (1.0 - damp) * zp + damp * (1.0 + zp * g);
        double nz0 = (1.0 - damp) * z0 + damp * h * h;
        double res = std::fabs(nzp - zp) + std::fabs(nz0 - z0);
        zp = nzp;
        z0 = nz0;
        if (res < tol) {
            double r1 = std::fabs(zp - (1.0 + zp * eval_g(s, zp, z0)));
            double r2 = std::fabs(z0 - std::pow(eval_h(s, zp, z0), 2));
            return {true, zp, z0, r1 + r2};
        }
    }
    return {false, zp, z0, 1.0};
}

double spectral_radius_4x4(double m[4][4]) {
    // the even/odd type alternation makes the matrix 2-periodic; power-iterate
    // its square and take the root
    double m2[4][4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) m2[i][j] += m[i][k] * m[k][j];
    double v[4] = {1, 1, 1, 1}, w[4];
    double lam = 0;
    for (int it = 0; it < 5000; ++it) {
        double norm = 0;
        for (int i = 0; i < 4; ++i) {
            w[i] = 0;
            for (int j = 0; j < 4; ++j) w[i] += m2[i][j] * v[j];
            norm = std::max(norm, std::fabs(w[i]));
        }
        if (norm == 0) return 0;
        for (int i = 0; i < 4; ++i) v[i] = w[i] / norm;
        lam = norm;
    }
    return std::sqrt(lam);
}

}  // namespace

MobileParams solve_constants(const WeightSeq& q, double tolerance) {
    {
        bool any3 = false;
        for (auto& [deg, w] : q.q)
            if (w > 0 && deg >= 2) any3 = true;
        if (!any3) throw std::invalid_argument("solve_constants: no face degree >= 2; no positive-map family");
    }
    // The Boltzmann law conditioned on n is scale-invariant, so rescale q to
    // the critical point: the largest c for which the fixed-point system has a
    // solution. Near the fold the inner iteration slows like 1/sqrt(distance),
    // so the bisection runs in phases with growing iteration caps.
    auto converges = [&](double c, int cap) {
        return iterate_constants(zeta_support(q, c), tolerance, cap).converged;
    };
    double c_lo = 1.0, c_hi = 1.0;
    {
        const int cap0 = 10000;
        if (converges(1.0, cap0)) {
            while (converges(c_hi, cap0)) {
                c_hi *= 2.0;
                if (c_hi > 1e12) throw std::runtime_error("solve_constants: no critical rescaling found");
            }
        } else {
            while (!converges(c_lo, cap0)) {
                c_lo *= 0.5;
                if (c_lo < 1e-12) throw std::runtime_error("solve_constants: no convergent rescaling found");
            }
            c_hi = 2.0 * c_lo;
        }
    }
    for (int cap : {10000, 100000, 1000000}) {
        // a larger cap can re-classify the upper end as convergent; re-grow it
        while (converges(c_hi, cap)) {
            c_lo = c_hi;
            c_hi *= 1.01;
        }
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (c_lo + c_hi);
            (converges(mid, cap) ? c_lo : c_hi) = mid;
        }
    }

    MobileParams p;
    p.q = q;
    p.scale = c_lo;
    auto sup = zeta_support(q, p.scale);
    auto res = iterate_constants(sup, tolerance, 3000000);
    if (!res.converged) throw std::runtime_error("solve_constants: non-convergence at selected scale");
    p.Zplus = res.zp;
    p.Zzero = res.z0;
    p.residual = res.residual;
    double g = eval_g(sup, p.Zplus, p.Zzero);
    double h = eval_h(sup, p.Zplus, p.Zzero);
    if (g <= 0) throw std::runtime_error("solve_constants: degenerate positive family (g = 0)");
    p.alpha = 1.0 / g;
    p.beta = h > 0 ? 1.0 / h : 0.0;
    p.K = 0;
    for (auto& [k, kp, c] : sup.z3) p.K = std::max(p.K, k + kp);
    for (auto& [k, kp, c] : sup.z4) p.K = std::max(p.K, k + kp);

    // criticality diagnostic: spectral radius of the mean offspring matrix
    auto off = mobile_offspring(p);
    double m[4][4] = {};
    m[0][2] = p.Zplus - 1.0;  // type 1 -> mean type-3 children
    m[1][3] = 1.0;
    for (auto& [k, kp, pr] : off.z3) {
        m[2][0] += k * pr;
        m[2][1] += kp * pr;
    }
    for (auto& [k, kp, pr] : off.z4) {
        m[3][0] += k * pr;
        m[3][1] += kp * pr;
    }
    p.spectral_radius = spectral_radius_4x4(m);
    return p;
}

std::string params_to_json(const MobileParams& p) {
    nlohmann::json j;
    nlohmann::json qj;
    for (auto& [d, w] : p.q.q) qj[std::to_string(d)] = w;
    j["q"] = qj;
    j["scale"] = p.scale;
    j["Zplus"] = p.Zplus;
    j["Zzero"] = p.Zzero;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["K"] = p.K;
    j["residual"] = p.residual;
    j["spectral_radius"] = p.spectral_radius;
    return j.dump(2);
}

MobileOffspring mobile_offspring(const MobileParams& params) {
    if (params.Zplus <= 1.0) throw std::invalid_argument("mobile_offspring: Zplus must exceed 1");
    MobileOffspring off;
    off.geom_p = 1.0 / params.Zplus;
    auto sup = zeta_support(params.q, params.scale);
    off.sum3 = off.sum4 = 0;
    for (auto& [k, kp, c] : sup.z3) {
        double pr = params.alpha * c * std::pow(params.Zplus, k) * std::pow(params.Zzero, kp / 2.0);
        if (pr > 0) off.z3.push_back({k, kp, pr});
        off.sum3 += pr;
    }
    for (auto& [k, kp, c] : sup.z4) {
        double pr = params.beta * c * std::pow(params.Zplus, k) * std::pow(params.Zzero, kp / 2.0);
        if (pr > 0) off.z4.push_back({k, kp, pr});
        off.sum4 += pr;
    }
    off.sum1 = 1.0;  // geometric sums to 1 exactly
    if (std::fabs(off.sum3 - 1.0) > 1e-8 && !off.z3.empty())
        throw std::runtime_error("mobile_offspring: zeta3 not normalized (alpha inconsistent)");
    if (!off.z4.empty() && std::fabs(off.sum4 - 1.0) > 1e-8)
        throw std::runtime_error("mobile_offspring: zeta4 not normalized (beta inconsistent)");
    return off;
}

std::vector<std::vector<std::int64_t>> admissible_labelings(int parent_type, const CType& ctype) {
    int k = int(ctype.size());
    if (parent_type == 1 || parent_type == 2) {
        // children are face vertices and keep the parent label
        return {std::vector<std::int64_t>(k, 0)};
    }
    if (parent_type != 3 && parent_type != 4) throw std::invalid_argument("admissible_labelings: bad type");
    for (auto c : ctype)
        if (c != 1 && c != 2) throw std::invalid_argument("admissible_labelings: children must be types 1/2");
    if (k == 0) return {std::vector<std::int64_t>{}};

    // doubled units; constraint x_{i+1} >= x_i - step(type of x_{i+1}),
    // cyclically closed through the parent (label 0)
    auto step = [](int ty) -> std::int64_t { return ty == 1 ? 2 : 1; };
    std::int64_t final_step = parent_type == 3 ? 2 : 1;  // parent of type 3 is type 1, of type 4 is type 2
    // parity of doubled relative labels
    auto parity = [&](int ty) -> int {
        int child_odd = (ty == 2) ? 1 : 0;        // doubled abs label parity class of types 2/4
        int parent_odd = (parent_type == 4) ? 1 : 0;
        return child_odd ^ parent_odd;
    };
    std::vector<std::int64_t> ub(k);
    ub[k - 1] = final_step;
    for (int i = k - 2; i >= 0; --i) ub[i] = ub[i + 1] + step(ctype[i + 1]);

    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> x(k);
    std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t prev) {
        if (i == k) {
            out.push_back(x);
            return;
        }
        std::int64_t lo = prev - step(ctype[i]);
        // align to parity class
        if (((lo % 2) + 2) % 2 != parity(ctype[i])) lo += 1;
        for (std::int64_t v = lo; v <= ub[i]; v += 2) {
            x[i] = v;
            rec(i + 1, v);
        }
    };
    rec(0, 0);
    if (out.empty()) throw std::runtime_error("admissible_labelings: empty constraint set");
    return out;
}

DisplacementFamily bdg_displacement_family(int max_children) {
    DisplacementFamily fam;
    // type 1: any number of type-3 children; type 2: one type-4 child
    for (int k = 1; k <= max_children; ++k) {
        DispDist d;
        d.atoms.push_back({std::vector<std::int64_t>(k, 0), Rational(1)});
        fam.set(1, CType(k, 3), std::move(d));
    }
    {
        DispDist d;
        d.atoms.push_back({{0}, Rational(1)});
        fam.set(2, CType{4}, std::move(d));
    }
    // types 3/4: all ordered ctype vectors over {1,2}
    for (int ptype : {3, 4})
        for (int k = 1; k <= max_children; ++k)
            for (int mask = 0; mask < (1 << k); ++mask) {
                CType ct;
                for (int i = 0; i < k; ++i) ct.push_back((mask >> i) & 1 ? 2 : 1);
                auto labs = admissible_labelings(ptype, ct);
                DispDist d;
                Rational w(1, (long long)labs.size());
                for (auto& x : labs) d.atoms.push_back({x, w});
                fam.set(ptype, ct, std::move(d));
            }
    return fam;
}

MobileCheck check_mobile(const TypedTree& t) {
    auto fail = [](const std::string& why) { return MobileCheck{false, why}; };
    int root_type = t.type[0];
    if (root_type != 1 && root_type != 2) return fail("root must have type 1 or 2");
    auto depth = t.depths();
    for (int v = 0; v < t.size(); ++v) {
        int ty = t.type[v];
        if (ty < 1 || ty > 4) return fail("type outside {1,2,3,4}");
        bool even_gen = depth[v] % 2 == 0;
        bool even_type = (ty == 1 || ty == 2);
        if (even_gen != even_type) return fail("types must alternate even/odd generations (clause i)");
        if (ty == 1) {
            for (int c : t.kids[v])
                if (t.type[c] != 3) return fail("type-1 children must have type 3 (clause ii)");
        } else if (ty == 2) {
            int want = (v == 0) ? 2 : 1;
            if (t.kcount(v) != want) return fail("type-2 vertex has wrong child count (clause iii)");
            for (int c : t.kids[v])
                if (t.type[c] != 4) return fail("type-2 children must have type 4 (clause iii)");
        } else {
            for (int c : t.kids[v])
                if (t.type[c] != 1 && t.type[c] != 2)
                    return fail("face-vertex children must have type 1/2");
            if (v > 0) {
                int pt = t.type[t.parent[v]];
                if (ty == 3 && pt != 1) return fail("type-3 parent must have type 1");
                if (ty == 4 && pt != 2) return fail("type-4 parent must have type 2");
            } else {
                return fail("face vertex cannot be the root");
            }
        }
    }
    // label parities (doubled): with type-1 root, types 1/3 even and 2/4 odd;
    // with type-2 root the classes swap
    auto l2 = t.labels2();
    for (int v = 0; v < t.size(); ++v) {
        int cls = (t.type[v] == 2 || t.type[v] == 4) ? 1 : 0;
        int expected_odd = (root_type == 1) ? cls : 1 - cls;
        if (((l2[v] % 2) + 2) % 2 != expected_odd) return fail("label parity violation (clauses 1/2)");
    }
    // constraint (4): face vertices share their parent's label
    for (int v = 1; v < t.size(); ++v)
        if ((t.type[v] == 3 || t.type[v] == 4) && t.disp2[v] != 0)
            return fail("face vertex label differs from parent (clause 4)");
    // constraint (3): cyclic admissibility around face vertices
    for (int v = 0; v < t.size(); ++v) {
        if (t.type[v] != 3 && t.type[v] != 4) continue;
        std::int64_t prev = 0;  // parent, relative
        for (int c : t.kids[v]) {
            std::int64_t step = t.type[c] == 1 ? 2 : 1;
            if (t.disp2[c] < prev - step) return fail("cyclic label constraint violated (clause 3)");
            prev = t.disp2[c];
        }
        std::int64_t final_step = t.type[v] == 3 ? 2 : 1;
        if (0 < prev - final_step) return fail("cyclic label constraint violated at wrap (clause 3)");
    }
    return {};
}

MobileSampler::MobileSampler(const MobileParams& params) : params_(params) {
    auto off = mobile_offspring(params_);
    p1_ = off.geom_p;
    double acc = 0;
    for (auto& [k, kp, pr] : off.z3) {
        acc += pr;
        cum3_.push_back(acc);
        kk3_.push_back({k, kp});
    }
    if (!cum3_.empty()) cum3_.back() = 1.0;
    acc = 0;
    for (auto& [k, kp, pr] : off.z4) {
        acc += pr;
        cum4_.push_back(acc);
        kk4_.push_back({k, kp});
    }
    if (!cum4_.empty()) cum4_.back() = 1.0;
    // pre-warm the labeling cache for every reachable ctype, so sampling is a
    // read-only operation (samplers are shared across worker threads)
    for (int ptype : {3, 4})
        for (int len = 1; len <= params_.K; ++len)
            for (int mask = 0; mask < (1 << len); ++mask) {
                CType ct;
                for (int i = 0; i < len; ++i) ct.push_back((mask >> i) & 1 ? 2 : 1);
                label_cache_.emplace(DisplacementFamily::key(ptype, ct), admissible_labelings(ptype, ct));
            }
}

namespace {
inline int draw_geometric(Rng& rng, double p) {
    int k = 0;
    while (rng.uniform() >= p) ++k;
    return k;
}
inline int draw_table(Rng& rng, const std::vector<double>& cum) {
    double u = rng.uniform();
    int i = 0;
    while (i + 1 < int(cum.size()) && u >= cum[i]) ++i;
    return i;
}
}  // namespace

long long MobileSampler::attempt_count(int n1_limit, MapSign sign, Rng& rng, long long vertex_cap) const {
    // pending vertices by type; LIFO discipline shared with build()
    std::vector<std::uint8_t> st;
    st.reserve(256);
    long long n1 = 0, total = 0;
    if (sign == MapSign::Plus) {
        st.push_back(1);
        n1 = 1;
        total = 1;
    } else {
        st.push_back(4);
        st.push_back(4);
        total = 3;  // root and its two face children
    }
    while (!st.empty()) {
        std::uint8_t ty = st.back();
        st.pop_back();
        switch (ty) {
            case 1: {
                int k = draw_geometric(rng, p1_);
                total += k;
                for (int i = 0; i < k; ++i) st.push_back(3);
                break;
            }
            case 2:
                total += 1;
                st.push_back(4);
                break;
            default: {
                if ((ty == 3 && cum3_.empty()) || (ty == 4 && cum4_.empty())) return -1;
                auto [k, kp] = (ty == 3) ? kk3_[draw_table(rng, cum3_)] : kk4_[draw_table(rng, cum4_)];
                n1 += k;
                total += k + kp;
                for (int i = 0; i < kp; ++i) st.push_back(2);
                for (int i = 0; i < k; ++i) st.push_back(1);
                break;
            }
        }
        if (n1 > n1_limit || total > vertex_cap) return -1;
    }
    return n1;
}

TypedTree MobileSampler::build(int n1, MapSign sign, Rng& rng) const {
    (void)n1;
    TypedTree t;
    auto add_vertex = [&](int parent, std::uint8_t ty) {
        int v = t.size();
        t.parent.push_back(parent);
        t.type.push_back(ty);
        t.disp2.push_back(0);
        t.kids.push_back({});
        if (parent >= 0) t.kids[parent].push_back(v);
        return v;
    };
    std::vector<int> st;
    if (sign == MapSign::Plus) {
        st.push_back(add_vertex(-1, 1));
    } else {
        int r = add_vertex(-1, 2);
        int c1 = add_vertex(r, 4);
        int c2 = add_vertex(r, 4);
        st.push_back(c2);
        st.push_back(c1);  // popped first, matching attempt_count's LIFO order
    }
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        std::uint8_t ty = t.type[v];
        std::vector<int> children;
        switch (ty) {
            case 1: {
                int k = draw_geometric(rng, p1_);
                for (int i = 0; i < k; ++i) children.push_back(add_vertex(v, 3));
                break;
            }
            case 2:
                children.push_back(add_vertex(v, 4));
                break;
            default: {
                auto [k, kp] = (ty == 3) ? kk3_[draw_table(rng, cum3_)] : kk4_[draw_table(rng, cum4_)];
                for (int i = 0; i < k; ++i) children.push_back(add_vertex(v, 1));
                for (int i = 0; i < kp; ++i) children.push_back(add_vertex(v, 2));
                break;
            }
        }
        for (auto it = children.rbegin(); it != children.rend(); ++it) st.push_back(*it);
    }
    return t;
}

TypedTree MobileSampler::sample(int n1, MapSign sign, Rng& rng, long long attempt_cap,
                                long long vertex_cap) const {
    if (vertex_cap < 0) vertex_cap = 64LL * n1 + 4096;
    for (long long a = 1; a <= attempt_cap; ++a) {
        Rng replay = rng;  // state snapshot for the rebuild
        long long got = attempt_count(n1, sign, rng, vertex_cap);
        if (got != n1) continue;
        TypedTree t = build(n1, sign, replay);
        // the image of a positive map always hangs a face off the root
        if (sign == MapSign::Plus && t.kcount(0) == 0) continue;

        // uniform arrangement of face-vertex children (types drawn in canonical
        // order above), then uniform admissible labels
        for (int v = 0; v < t.size(); ++v) {
            if (t.type[v] != 3 && t.type[v] != 4) continue;
            auto& ks = t.kids[v];
            for (int i = int(ks.size()) - 1; i > 0; --i)
                std::swap(ks[i], ks[int(rng.below(i + 1))]);
        }
        // re-canonicalize vertex order after the shuffles
        {
            std::vector<int> order;
            order.reserve(t.size());
            std::vector<int> stack{0};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                order.push_back(v);
                for (auto it = t.kids[v].rbegin(); it != t.kids[v].rend(); ++it) stack.push_back(*it);
            }
            std::vector<std::uint8_t> types;
            std::vector<int> ks;
            types.reserve(t.size());
            ks.reserve(t.size());
            for (int v : order) {
                types.push_back(t.type[v]);
                ks.push_back(t.kcount(v));
            }
            t = tree_from_lex(types, ks, std::vector<std::int64_t>(t.size() - 1, 0));
        }
        for (int v = 0; v < t.size(); ++v) {
            if ((t.type[v] != 3 && t.type[v] != 4) || t.kcount(v) == 0) continue;
            CType ct;
            for (int c : t.kids[v]) ct.push_back(t.type[c]);
            std::string key = DisplacementFamily::key(t.type[v], ct);
            auto it = label_cache_.find(key);
            if (it == label_cache_.end())
                throw std::logic_error("MobileSampler: ctype outside pre-warmed cache");
            const auto& labs = it->second;
            const auto& x = labs[rng.below(labs.size())];
            for (int i = 0; i < t.kcount(v); ++i) t.disp2[t.kids[v][i]] = x[i];
        }
        return t;
    }
    throw Exhaustion(attempt_cap);
}

double mobile_shape_prob(const MobileParams& params, const TypedTree& shape) {
    auto off = mobile_offspring(params);
    auto p3 = [&](int k, int kp) {
        for (auto& [a, b, pr] : off.z3)
            if (a == k && b == kp) return pr;
        return 0.0;
    };
    auto p4 = [&](int k, int kp) {
        for (auto& [a, b, pr] : off.z4)
            if (a == k && b == kp) return pr;
        return 0.0;
    };
    double prob = 1.0;
    for (int v = 0; v < shape.size(); ++v) {
        int ty = shape.type[v];
        if (ty == 1) {
            int k = shape.kcount(v);
            prob *= off.geom_p * std::pow(1.0 - off.geom_p, k);
        } else if (ty == 2) {
            // deterministic single type-4 child (two for a null root)
        } else {
            int k = 0, kp = 0;
            for (int c : shape.kids[v]) (shape.type[c] == 1 ? k : kp)++;
            double cls = (ty == 3) ? p3(k, kp) : p4(k, kp);
            int tot = k + kp;
            double arrangements = 1.0;
            for (int i = 1; i <= tot; ++i) arrangements *= i;
            for (int i = 1; i <= k; ++i) arrangements /= i;
            for (int i = 1; i <= kp; ++i) arrangements /= i;
            prob *= cls / arrangements;  // ordered ctype: uniform over arrangements
        }
    }
    return prob;
}

double mobile_labeled_prob(const MobileParams& params, const TypedTree& mobile) {
    double prob = mobile_shape_prob(params, mobile);
    prob /= double(count_labelings(mobile));
    return prob;
}

long long count_labelings(const TypedTree& shape) {
    long long n = 1;
    for (int v = 0; v < shape.size(); ++v) {
        if ((shape.type[v] != 3 && shape.type[v] != 4) || shape.kcount(v) == 0) continue;
        CType ct;
        for (int c : shape.kids[v]) ct.push_back(shape.type[c]);
        n *= (long long)admissible_labelings(shape.type[v], ct).size();
    }
    return n;
}

std::vector<TypedTree> enumerate_mobile_shapes(int n1, int max_map_edges, MapSign sign,
                                               const std::set<int>& degrees) {
    // number of faces allowed: E = (n1+1) + F - 2 <= max_map_edges
    int fmax = max_map_edges - n1 + 1;
    std::vector<TypedTree> out;
    if (fmax < 0) return out;

    int maxdeg = degrees.empty() ? 2 * max_map_edges : *degrees.rbegin();
    auto deg_ok = [&](int d) { return degrees.empty() || degrees.count(d) > 0; };

    // preorder DFS over owed child types, tracking type-1 and face budgets
    std::vector<std::uint8_t> types;
    std::vector<int> ks;
    std::function<void(std::vector<std::uint8_t>&, int, int)> rec =
        [&](std::vector<std::uint8_t>& owed, int used1, int usedF) {
            if (owed.empty()) {
                if (used1 == n1) {
                    auto t = tree_from_lex(types, ks, std::vector<std::int64_t>(types.size() - 1, 0));
                    if (!(sign == MapSign::Plus && t.kcount(0) == 0)) out.push_back(std::move(t));
                }
                return;
            }
            std::uint8_t ty = owed.back();
            owed.pop_back();
            types.push_back(ty);
            size_t base = owed.size();
            auto push_ct = [&](const CType& ct) {
                ks.push_back(int(ct.size()));
                for (auto it = ct.rbegin(); it != ct.rend(); ++it) owed.push_back(*it);
            };
            auto pop_ct = [&](const CType& ct) {
                owed.resize(base);
                (void)ct;
                ks.pop_back();
            };
            if (ty == 1) {
                for (int k = 0; usedF + k <= fmax; ++k) {
                    CType ct(k, 3);
                    push_ct(ct);
                    rec(owed, used1, usedF + k);
                    pop_ct(ct);
                }
            } else if (ty == 2) {
                if (usedF + 1 <= fmax) {
                    CType ct{4};
                    push_ct(ct);
                    rec(owed, used1, usedF + 1);
                    pop_ct(ct);
                }
            } else {
                int base_deg = (ty == 3) ? 2 : 1;
                for (int k = 0; 2 * k + base_deg <= maxdeg; ++k) {
                    if (used1 + k > n1) break;
                    for (int kp = 0; 2 * k + kp + base_deg <= maxdeg; ++kp) {
                        if (!deg_ok(2 * k + kp + base_deg)) continue;
                        // ordered child vectors over {1,2} with counts (k, kp)
                        CType ct(k, 1);
                        ct.resize(k + kp, 2);
                        std::sort(ct.begin(), ct.end());
                        do {
                            push_ct(ct);
                            rec(owed, used1 + k, usedF);
                            pop_ct(ct);
                        } while (std::next_permutation(ct.begin(), ct.end()));
                    }
                }
            }
            types.pop_back();
            owed.push_back(ty);
        };

    std::vector<std::uint8_t> owed;
    if (sign == MapSign::Plus) {
        owed.push_back(1);
        rec(owed, 1, 0);
    } else if (sign == MapSign::Null) {
        // type-2 root with exactly two type-4 children (two faces up front)
        if (fmax >= 2) {
            types.push_back(2);
            ks.push_back(2);
            owed.push_back(4);
            owed.push_back(4);
            rec(owed, 0, 2);
        }
    } else {
        throw std::invalid_argument("enumerate_mobile_shapes: sign must be Plus or Null");
    }
    return out;
}

std::vector<TypedTree> enumerate_labeled_mobiles(int n1, int max_map_edges, MapSign sign,
                                                 const std::set<int>& degrees) {
    std::vector<TypedTree> out;
    for (auto& shape : enumerate_mobile_shapes(n1, max_map_edges, sign, degrees)) {
        std::vector<int> face_vertices;
        std::vector<std::vector<std::vector<std::int64_t>>> options;
        for (int v = 0; v < shape.size(); ++v) {
            if ((shape.type[v] != 3 && shape.type[v] != 4) || shape.kcount(v) == 0) continue;
            CType ct;
            for (int c : shape.kids[v]) ct.push_back(shape.type[c]);
            face_vertices.push_back(v);
            options.push_back(admissible_labelings(shape.type[v], ct));
        }
        TypedTree work = shape;
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == face_vertices.size()) {
                out.push_back(work);
                return;
            }
            int v = face_vertices[i];
            for (auto& x : options[i]) {
                for (int c = 0; c < work.kcount(v); ++c) work.disp2[work.kids[v][c]] = x[c];
                rec(i + 1);
            }
        };
        rec(0);
    }
    return out;
}

}  // namespace mobmap
