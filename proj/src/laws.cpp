#include "mobmap/laws.hpp"

#include "mobmap/reorder.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mobmap {

void FiniteDistribution::add(const std::string& key, const Rational& w) {
    if (w.is_zero()) return;
    auto it = p.find(key);
    if (it == p.end())
        p.emplace(key, w);
    else
        it->second += w;
}

Rational FiniteDistribution::total() const {
    Rational t;
    for (auto& [k, w] : p) t += w;
    return t;
}

void FiniteDistribution::normalize() {
    Rational t = total();
    if (t.is_zero()) throw std::domain_error("FiniteDistribution: zero mass");
    for (auto& [k, w] : p) w /= t;
}

std::string FiniteDistribution::to_csv() const {
    std::ostringstream os;
    os << "key,numerator,denominator\n";
    for (auto& [k, w] : p) os << '"' << k << "\"," << w.num_str() << "," << w.den_str() << "\n";
    return os.str();
}

void DispDist::check(int arity) const {
    Rational sum;
    for (auto& [x, w] : atoms) {
        if (int(x.size()) != arity) throw std::invalid_argument("DispDist: arity mismatch");
        if (!(w > Rational(0))) throw std::invalid_argument("DispDist: nonpositive weight");
        sum += w;
    }
    if (sum != Rational(1)) throw std::invalid_argument("DispDist: weights do not sum to 1");
}

const std::vector<std::int64_t>& DispDist::sample(Rng& rng) const {
    double u = rng.uniform();
    double acc = 0;
    for (auto& [x, w] : atoms) {
        acc += w.to_double();
        if (u < acc) return x;
    }
    return atoms.back().first;
}

std::string DisplacementFamily::key(int parent_type, const CType& ctype) {
    std::string s = std::to_string(parent_type) + "|";
    for (size_t i = 0; i < ctype.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(int(ctype[i]));
    }
    return s;
}

void DisplacementFamily::set(int parent_type, const CType& ctype, DispDist d) {
    d.check(int(ctype.size()));
    entries[key(parent_type, ctype)] = std::move(d);
}

bool DisplacementFamily::has(int parent_type, const CType& ctype) const {
    return entries.count(key(parent_type, ctype)) > 0;
}

const DispDist& DisplacementFamily::get(int parent_type, const CType& ctype) const {
    auto it = entries.find(key(parent_type, ctype));
    if (it == entries.end())
        throw std::out_of_range("DisplacementFamily: missing entry " + key(parent_type, ctype));
    return it->second;
}

static std::pair<int, CType> parse_key(const std::string& k) {
    auto bar = k.find('|');
    int r = std::stoi(k.substr(0, bar));
    CType ct;
    std::string rest = k.substr(bar + 1);
    if (!rest.empty()) {
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) ct.push_back(std::uint8_t(std::stoi(tok)));
    }
    return {r, ct};
}

DisplacementFamily symmetrize_family(const DisplacementFamily& fam) {
    DisplacementFamily out;
    for (auto& [k, dist] : fam.entries) {
        auto [r, ctype] = parse_key(k);
        int arity = int(ctype.size());
        std::vector<int> sig(arity);
        std::iota(sig.begin(), sig.end(), 0);
        long long nperm = 1;
        for (int i = 2; i <= arity; ++i) nperm *= i;
        std::map<std::vector<std::int64_t>, Rational> acc;
        do {
            CType permuted(arity);
            for (int i = 0; i < arity; ++i) permuted[i] = ctype[sig[i]];
            if (!fam.has(r, permuted))
                throw std::out_of_range("symmetrize_family: family not closed under permutation of " + k);
            for (auto& [y, w] : fam.get(r, permuted).atoms) {
                // x with sigma(x) = y, where sigma(x)[i] = x[sig[i]]
                std::vector<std::int64_t> x(arity);
                for (int i = 0; i < arity; ++i) x[sig[i]] = y[i];
                acc[x] += w / Rational(nperm);
            }
        } while (std::next_permutation(sig.begin(), sig.end()));
        DispDist d;
        for (auto& [x, w] : acc) d.atoms.push_back({x, w});
        out.set(r, ctype, std::move(d));
    }
    return out;
}

static std::vector<Rational> coordinate_means(const DispDist& d, int arity) {
    std::vector<Rational> m(arity);
    for (auto& [x, w] : d.atoms)
        for (int i = 0; i < arity; ++i) m[i] += Rational(x[i]) * w;
    return m;
}

bool centering_check(const DisplacementFamily& fam, Centering mode) {
    if (mode == Centering::Local) {
        for (auto& [k, d] : fam.entries) {
            auto [r, ct] = parse_key(k);
            for (auto& m : coordinate_means(d, int(ct.size())))
                if (!m.is_zero()) return false;
        }
        return true;
    }
    // centered: group by (parent type, multiset of child types)
    std::map<std::string, Rational> class_sum;
    for (auto& [k, d] : fam.entries) {
        auto [r, ct] = parse_key(k);
        CType sorted = ct;
        std::sort(sorted.begin(), sorted.end());
        std::string ck = DisplacementFamily::key(r, sorted);
        Rational s;
        for (auto& m : coordinate_means(d, int(ct.size()))) s += m;
        class_sum[ck] += s;
    }
    for (auto& [ck, s] : class_sum)
        if (!s.is_zero()) return false;
    return true;
}

void OffspringFamily::check_permutation_invariant() const {
    for (auto& [s, atoms] : per_type) {
        std::map<std::string, Rational> by_class;
        std::map<std::string, long long> class_count;
        for (auto& [ct, w] : atoms) {
            CType sorted = ct;
            std::sort(sorted.begin(), sorted.end());
            std::string ck = DisplacementFamily::key(s, sorted);
            auto it = by_class.find(ck);
            if (it == by_class.end())
                by_class[ck] = w;
            else if (it->second != w)
                throw std::invalid_argument("OffspringFamily: not permutation invariant");
            class_count[ck]++;
        }
        (void)class_count;
    }
}

void OffspringFamily::add_count_class(int parent_type, const std::map<int, int>& counts, const Rational& w) {
    CType base;
    for (auto& [ty, c] : counts)
        for (int i = 0; i < c; ++i) base.push_back(std::uint8_t(ty));
    std::sort(base.begin(), base.end());
    std::vector<CType> arrangements;
    do {
        arrangements.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    Rational each = w / Rational((long long)arrangements.size());
    for (auto& a : arrangements) per_type[parent_type].push_back({a, each});
}

GwResult gw_sample(const OffspringFamily& off, int root_type, Rng& rng, long long vertex_cap) {
    // per-type cumulative tables in double (sampling only; exact weights stay rational)
    std::map<int, std::pair<std::vector<double>, const std::vector<std::pair<CType, Rational>>*>> tables;
    for (auto& [t, atoms] : off.per_type) {
        std::vector<double> cum;
        double acc = 0;
        for (auto& [ct, w] : atoms) {
            acc += w.to_double();
            cum.push_back(acc);
        }
        tables[t] = {std::move(cum), &atoms};
    }
    GwResult res;
    TypedTree t;
    t.parent = {-1};
    t.type = {std::uint8_t(root_type)};
    t.disp2 = {0};
    t.kids = {{}};
    std::vector<int> frontier{0};
    res.generated = 1;
    while (!frontier.empty()) {
        int v = frontier.back();
        frontier.pop_back();
        auto it = tables.find(t.type[v]);
        if (it == tables.end()) throw std::out_of_range("gw_sample: no offspring law for type");
        auto& [cum, atoms] = it->second;
        double u = rng.uniform();
        size_t idx = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
        if (idx >= atoms->size()) idx = atoms->size() - 1;
        const CType& ct = (*atoms)[idx].first;
        for (std::uint8_t cty : ct) {
            int c = t.size();
            t.parent.push_back(v);
            t.type.push_back(cty);
            t.disp2.push_back(0);
            t.kids.push_back({});
            t.kids[v].push_back(c);
            frontier.push_back(c);
            if (++res.generated > vertex_cap) return res;  // tree left unset
        }
    }
    // children were appended in plane order but vertex ids are generation order;
    // renumber to lexicographic (preorder) to restore the tree invariant
    std::vector<int> ks;
    std::vector<std::uint8_t> types;
    std::function<void(int)> dfs = [&](int v) {
        ks.push_back(t.kcount(v));
        types.push_back(t.type[v]);
        for (int c : t.kids[v]) dfs(c);
    };
    dfs(0);
    res.tree = tree_from_lex(types, ks, std::vector<std::int64_t>(types.size() - 1, 0));
    return res;
}

TypedTree gw_sample_conditioned(const OffspringFamily& off, int root_type, int target_type,
                                int target_count, Rng& rng, long long attempt_cap,
                                long long vertex_cap) {
    for (long long a = 1; a <= attempt_cap; ++a) {
        auto res = gw_sample(off, root_type, rng, vertex_cap);
        if (!res.tree) continue;  // overflow counts as a rejection
        int c = 0;
        for (auto ty : res.tree->type)
            if (ty == target_type) ++c;
        if (c == target_count) return *res.tree;
    }
    throw Exhaustion(attempt_cap);
}

bool shape_law_is_symmetric(const std::vector<ShapeAtom>& shapes) {
    std::map<std::string, Rational> prob;
    for (auto& a : shapes) prob[canonical_key(a.shape)] = a.prob;
    for (auto& a : shapes) {
        bool ok = true;
        for_each_perm_vector(a.shape, [&](const std::vector<std::vector<int>>& pv) {
            ChildPerms cp;
            cp.perm = pv;
            auto mapped = apply_permutation(a.shape, cp);
            auto it = prob.find(canonical_key(mapped.tree));
            if (it == prob.end() || it->second != a.prob) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

std::vector<ShapeAtom> symmetrize_shape_law(const std::vector<ShapeAtom>& shapes) {
    std::map<std::string, std::pair<TypedTree, Rational>> acc;
    for (auto& a : shapes) {
        long long nperm = 1;
        for (int v = 0; v < a.shape.size(); ++v)
            for (int i = 2; i <= a.shape.kcount(v); ++i) nperm *= i;
        for_each_perm_vector(a.shape, [&](const std::vector<std::vector<int>>& pv) {
            ChildPerms cp;
            cp.perm = pv;
            auto mapped = apply_permutation(a.shape, cp);
            std::string key = canonical_key(mapped.tree);
            auto it = acc.find(key);
            Rational w = a.prob / Rational(nperm);
            if (it == acc.end())
                acc[key] = {mapped.tree, w};
            else
                it->second.second += w;
        });
    }
    std::vector<ShapeAtom> out;
    for (auto& [k, tw] : acc) out.push_back({tw.first, tw.second});
    return out;
}

void for_each_perm_vector(const TypedTree& t,
                          const std::function<void(const std::vector<std::vector<int>>&)>& f) {
    std::vector<std::vector<int>> pv(t.size());
    for (int v = 0; v < t.size(); ++v) {
        pv[v].resize(t.kcount(v));
        std::iota(pv[v].begin(), pv[v].end(), 0);
    }
    std::vector<int> active;  // vertices with nontrivial permutation sets
    for (int v = 0; v < t.size(); ++v)
        if (t.kcount(v) >= 2) active.push_back(v);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == active.size()) {
            f(pv);
            return;
        }
        int v = active[i];
        std::sort(pv[v].begin(), pv[v].end());
        do {
            rec(i + 1);
        } while (std::next_permutation(pv[v].begin(), pv[v].end()));
    };
    rec(0);
}

static CType ctype_of(const TypedTree& t, int v) {
    CType ct;
    for (int c : t.kids[v]) ct.push_back(t.type[c]);
    return ct;
}

TypedTree valid_sample(const ValidLaw& law, Rng& rng) {
    TypedTree shape;
    if (law.gw) {
        const auto& g = *law.gw;
        if (g.condition)
            shape = gw_sample_conditioned(g.off, g.root_type, g.condition->first, g.condition->second,
                                          rng, g.attempt_cap, g.vertex_cap);
        else {
            auto res = gw_sample(g.off, g.root_type, rng, g.vertex_cap);
            if (!res.tree) throw std::runtime_error("valid_sample: GW overflow");
            shape = *res.tree;
        }
    } else {
        double u = rng.uniform(), acc = 0;
        size_t idx = law.shapes.size() - 1;
        for (size_t i = 0; i < law.shapes.size(); ++i) {
            acc += law.shapes[i].prob.to_double();
            if (u < acc) {
                idx = i;
                break;
            }
        }
        shape = law.shapes[idx].shape;
    }
    for (int v = 0; v < shape.size(); ++v) {
        if (shape.kcount(v) == 0) continue;
        const auto& d = law.disp.get(shape.type[v], ctype_of(shape, v));
        const auto& x = d.sample(rng);
        for (int i = 0; i < shape.kcount(v); ++i) shape.disp2[shape.kids[v][i]] = x[i];
    }
    return shape;
}

std::vector<ShapeAtom> enumerate_shapes(const ValidLaw& law, int max_vertices) {
    if (!law.gw) {
        for (auto& a : law.shapes)
            if (a.shape.size() > max_vertices)
                throw std::invalid_argument("enumerate_shapes: explicit shape exceeds max_vertices");
        return law.shapes;
    }
    const auto& g = *law.gw;
    std::vector<ShapeAtom> all;
    // DFS over preorder: maintain a stack of owed child types
    std::vector<std::uint8_t> types;
    std::vector<int> ks;
    std::function<void(std::vector<std::uint8_t>&, Rational)> rec =
        [&](std::vector<std::uint8_t>& owed, Rational prob) {
            if (owed.empty()) {
                all.push_back({tree_from_lex(types, ks, std::vector<std::int64_t>(types.size() - 1, 0)), prob});
                return;
            }
            if (int(types.size()) >= max_vertices) return;
            std::uint8_t myty = owed.back();
            owed.pop_back();
            auto it = g.off.per_type.find(myty);
            if (it == g.off.per_type.end()) throw std::out_of_range("enumerate_shapes: missing offspring law");
            types.push_back(myty);
            for (auto& [ct, w] : it->second) {
                if (w.is_zero()) continue;
                ks.push_back(int(ct.size()));
                size_t base = owed.size();
                for (auto rit = ct.rbegin(); rit != ct.rend(); ++rit) owed.push_back(*rit);
                rec(owed, prob * w);
                owed.resize(base);
                ks.pop_back();
            }
            types.pop_back();
            owed.push_back(myty);
        };
    std::vector<std::uint8_t> owed{std::uint8_t(g.root_type)};
    rec(owed, Rational(1));

    if (g.condition) {
        auto [cty, ccount] = *g.condition;
        std::vector<ShapeAtom> kept;
        Rational mass;
        for (auto& a : all) {
            int c = 0;
            for (auto ty : a.shape.type)
                if (ty == cty) ++c;
            if (c == ccount) {
                kept.push_back(a);
                mass += a.prob;
            }
        }
        if (mass.is_zero()) throw std::domain_error("enumerate_shapes: conditioning event has zero mass");
        for (auto& a : kept) a.prob /= mass;
        return kept;
    }
    return all;
}

FiniteDistribution exact_law_enumeration(const ValidLaw& law, int max_vertices, long long outcome_cap) {
    auto shapes = enumerate_shapes(law, max_vertices);
    FiniteDistribution out;
    long long outcomes = 0;
    for (auto& atom : shapes) {
        const TypedTree& shape = atom.shape;
        std::vector<int> internal;  // vertices with children
        for (int v = 0; v < shape.size(); ++v)
            if (shape.kcount(v) > 0) internal.push_back(v);
        TypedTree work = shape;
        std::function<void(size_t, Rational)> rec = [&](size_t i, Rational prob) {
            if (i == internal.size()) {
                if (++outcomes > outcome_cap) throw std::overflow_error("exact_law_enumeration: outcome explosion");
                out.add(canonical_key(work), prob);
                return;
            }
            int v = internal[i];
            const auto& d = law.disp.get(shape.type[v], ctype_of(shape, v));
            for (auto& [x, w] : d.atoms) {
                for (int c = 0; c < shape.kcount(v); ++c) work.disp2[shape.kids[v][c]] = x[c];
                rec(i + 1, prob * w);
            }
            for (int c : shape.kids[v]) work.disp2[c] = 0;
        };
        rec(0, atom.prob);
    }
    return out;
}

}  // namespace mobmap
