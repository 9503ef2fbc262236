#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mobmap/bdg.hpp"
#include "mobmap/metrics.hpp"
#include "mobmap/verify.hpp"

namespace py = pybind11;
using namespace mobmap;

namespace {

py::dict tree_dict(const TypedTree& t) {
    py::dict d;
    std::vector<int> types(t.type.begin(), t.type.end());
    std::vector<int> ks;
    for (int v = 0; v < t.size(); ++v) ks.push_back(t.kcount(v));
    std::vector<long long> disp2(t.disp2.begin() + 1, t.disp2.end());
    d["types"] = types;
    d["children"] = ks;
    d["disp2"] = disp2;
    return d;
}

TypedTree tree_from_dict(const py::dict& d) {
    auto ti = d["types"].cast<std::vector<int>>();
    auto ks = d["children"].cast<std::vector<int>>();
    auto disp2 = d["disp2"].cast<std::vector<std::int64_t>>();
    return tree_from_lex(std::vector<std::uint8_t>(ti.begin(), ti.end()), ks, disp2);
}

WeightSeq weights_from_dict(const py::dict& d) {
    WeightSeq q;
    for (auto item : d) q.q.push_back({item.first.cast<int>(), item.second.cast<double>()});
    return q;
}

}  // namespace

PYBIND11_MODULE(mobilemaps, m) {
    m.doc() = "Boltzmann planar maps via labeled mobiles";

    m.def("contour_process", [](const py::dict& tree) {
        auto C = contour_process(tree_from_dict(tree));
        return C.v;
    });
    m.def("label_process", [](const py::dict& tree) {
        auto Z = label_process(tree_from_dict(tree));
        return Z.v;
    });
    m.def(
        "sample_map",
        [](const py::dict& q, int n, const std::string& sign, std::uint64_t seed) {
            Rng rng(seed);
            auto params = solve_constants(weights_from_dict(q));
            auto bs = boltzmann_sample(params, n, sign == "null" ? MapSign::Null : MapSign::Plus, rng);
            py::dict out;
            out["map"] = map_to_text(bs.map);
            out["mobile"] = tree_dict(bs.mobile);
            out["vertices"] = bs.map.V;
            out["edges"] = bs.map.edges();
            out["face_degrees"] = face_degrees(bs.map);
            return out;
        },
        py::arg("q"), py::arg("n"), py::arg("sign") = "plus", py::arg("seed") = 1);
    m.def("solve_constants", [](const py::dict& q) {
        auto p = solve_constants(weights_from_dict(q));
        py::dict out;
        out["Zplus"] = p.Zplus;
        out["Zzero"] = p.Zzero;
        out["alpha"] = p.alpha;
        out["beta"] = p.beta;
        out["scale"] = p.scale;
        out["spectral_radius"] = p.spectral_radius;
        return out;
    });
    m.def(
        "bdg_roundtrip_ok",
        [](const std::string& map_text) {
            auto m0 = map_from_text(map_text);
            auto fw = bdg_forward(m0);
            auto inv = bdg_inverse(fw.mobile, classify_sign(m0));
            return canonical_pointed_form(inv.map) == canonical_pointed_form(m0);
        },
        py::arg("map_text"));
    m.def(
        "brownian_snake",
        [](int grid, std::uint64_t seed) {
            Rng rng(seed);
            auto s = brownian_snake_sample(grid, rng);
            return py::make_tuple(s.e.v, s.Z.v);
        },
        py::arg("grid") = 256, py::arg("seed") = 1);
    m.def("gh_distance", [](const std::vector<std::vector<double>>& dx,
                            const std::vector<std::vector<double>>& dy) {
        FiniteMetricMeasureSpace X, Y;
        X.dist = dx;
        X.weights.assign(dx.size(), 1.0 / dx.size());
        Y.dist = dy;
        Y.weights.assign(dy.size(), 1.0 / dy.size());
        return gh_distance_exact(X, Y);
    });
    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed) {
            std::vector<TestReport> reports;
            if (suite == "eqdist")
                reports = eqdist_suite(2, 6);
            else if (suite == "centering")
                reports = centering_audit(3);
            else if (suite == "bijection")
                reports = bijection_audit(3, {4});
            else if (suite == "gh")
                reports = gh_audit(10, seed);
            else
                throw std::invalid_argument("unknown suite");
            py::list out;
            for (auto& r : reports) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["statistic"] = r.statistic;
                out.append(d);
            }
            return out;
        },
        py::arg("suite"), py::arg("seed") = 1);
}
