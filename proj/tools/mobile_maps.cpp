#include "mobmap/bdg.hpp"
#include "mobmap/metrics.hpp"
#include "mobmap/verify.hpp"

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

using namespace mobmap;

namespace {

WeightSeq parse_q(const std::string& text) {
    WeightSeq q;
    auto j = nlohmann::json::parse(text);
    if (j.contains("q")) j = j["q"];
    for (auto& [key, val] : j.items()) q.q.push_back({std::stoi(key), val.get<double>()});
    return q;
}

MapSign parse_sign(const std::string& s) {
    if (s == "plus" || s == "+") return MapSign::Plus;
    if (s == "null" || s == "0") return MapSign::Null;
    if (s == "minus" || s == "-") return MapSign::Minus;
    throw CLI::ValidationError("sign must be plus, null or minus");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << content;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

int finish(const std::vector<TestReport>& reports, const std::string& report_path) {
    for (auto& r : reports)
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  stat=" << r.statistic
                  << (r.note.empty() ? "" : "  (" + r.note + ")") << "\n";
    if (!report_path.empty()) write_file(report_path, reports_to_json(reports));
    return all_pass(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boltzmann planar map sampler and mobile-tree toolkit"};
    app.require_subcommand(1);

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "sample a Boltzmann map of a given size");
    std::string s_q = "{\"5\":1}", s_sign = "plus", s_out, s_mobile_out, s_params_out;
    int s_n = 100;
    std::uint64_t s_seed = 1;
    sample->add_option("--q", s_q, "weight sequence as JSON, e.g. {\"5\":1}");
    sample->add_option("--n", s_n, "number of vertices");
    sample->add_option("--sign", s_sign, "plus | null | minus");
    sample->add_option("--seed", s_seed, "RNG seed");
    sample->add_option("--out", s_out, "map output file");
    sample->add_option("--mobile-out", s_mobile_out, "mobile tree JSON output file");
    sample->add_option("--params-out", s_params_out, "solved constants JSON output file");
    sample->callback([&] {
        Rng rng(s_seed);
        auto params = solve_constants(parse_q(s_q));
        if (!s_params_out.empty()) write_file(s_params_out, params_to_json(params));
        MapSign sign = parse_sign(s_sign);
        bool minus = sign == MapSign::Minus;
        auto bs = boltzmann_sample(params, s_n, minus ? MapSign::Plus : sign, rng);
        if (minus) bs.map = reverse_root(bs.map);
        std::string text = map_to_text(bs.map);
        if (s_out.empty())
            std::cout << text;
        else
            write_file(s_out, text);
        if (!s_mobile_out.empty()) write_file(s_mobile_out, tree_to_json(bs.mobile));
        std::cerr << "sampled map with " << bs.map.V << " vertices, " << bs.map.edges() << " edges\n";
    });

    // ---- encode ----
    auto* encode = app.add_subcommand("encode", "emit contour/label/height/lex processes of a tree");
    std::string e_tree, e_prefix = "tree";
    encode->add_option("--tree", e_tree, "tree JSON file")->required();
    encode->add_option("--out-prefix", e_prefix, "output CSV prefix");
    encode->callback([&] {
        std::ifstream is(e_tree);
        std::stringstream ss;
        ss << is.rdbuf();
        auto t = tree_from_json(ss.str());
        write_file(e_prefix + "_contour.csv", path_to_csv(contour_process(t)));
        write_file(e_prefix + "_label.csv", path_to_csv(label_process(t)));
        auto [H, S] = height_lex_processes(t);
        write_file(e_prefix + "_height.csv", path_to_csv(H));
        write_file(e_prefix + "_lexlabel.csv", path_to_csv(S));
        std::cerr << "wrote " << e_prefix << "_{contour,label,height,lexlabel}.csv\n";
    });

    // ---- enumerate ----
    auto* enumerate = app.add_subcommand("enumerate", "enumerate rooted maps (exact small-size oracle)");
    int n_edges = 3;
    std::string n_degrees, n_out;
    bool n_pointed = false;
    enumerate->add_option("--max-edges", n_edges, "edge cap (<= 6)");
    enumerate->add_option("--degrees", n_degrees, "comma-separated allowed face degrees");
    enumerate->add_flag("--pointed", n_pointed, "enumerate pointed maps");
    enumerate->add_option("--out", n_out, "write maps to file (one per block)");
    enumerate->callback([&] {
        std::set<int> degs;
        if (!n_degrees.empty())
            for (int d : parse_int_list(n_degrees)) degs.insert(d);
        auto maps = n_pointed ? enumerate_pointed_maps(n_edges, degs) : enumerate_maps(n_edges, degs);
        std::cout << maps.size() << " maps\n";
        if (!n_out.empty()) {
            std::ostringstream os;
            for (auto& m : maps) os << map_to_text(m) << "\n";
            write_file(n_out, os.str());
        }
    });

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    std::string v_suite = "all", v_report;
    int v_max_vertices = 7, v_k = 3;
    std::uint64_t v_seed = 1;
    verify->add_option("--suite", v_suite,
                       "eqdist | centering | bijection | identities | gh | snake-cov | snake-limit | fdd | all");
    verify->add_option("--max-vertices", v_max_vertices, "enumeration cap for eqdist");
    verify->add_option("--k", v_k, "sample vector length for eqdist/fdd");
    verify->add_option("--seed", v_seed, "RNG seed");
    verify->add_option("--report", v_report, "JSON report output");
    verify->callback([&] {
        std::vector<TestReport> reports;
        auto want = [&](const std::string& s) { return v_suite == "all" || v_suite == s; };
        if (want("eqdist"))
            for (auto& r : eqdist_suite(std::min(v_k, 3), v_max_vertices)) reports.push_back(r);
        if (want("centering"))
            for (auto& r : centering_audit(3)) reports.push_back(r);
        if (want("bijection")) {
            for (auto& r : bijection_audit(3, {4})) reports.push_back(r);
            for (auto& r : bijection_audit(3, {5})) reports.push_back(r);
        }
        if (want("identities"))
            for (auto& r : identity_suite(v_seed)) reports.push_back(r);
        if (want("gh"))
            for (auto& r : gh_audit(50, v_seed)) reports.push_back(r);
        if (want("snake-cov")) reports.push_back(snake_covariance_check(256, 10000, v_seed, 0.05));
        if (v_suite == "snake-limit") {
            WeightSeq q;
            q.q = {{5, 1.0}};
            for (auto& r : snake_compare(q, 200, 2000, v_seed)) reports.push_back(r);
        }
        if (want("fdd")) {
            WeightSeq q;
            q.q = {{5, 1.0}};
            reports.push_back(fdd_compare_mobile(solve_constants(q), 199, v_k, 2000, v_seed));
            reports.push_back(fdd_compare_adversarial(v_k, 2000, v_seed));
        }
        std::exit(finish(reports, v_report));
    });

    // ---- scaling ----
    auto* scaling = app.add_subcommand("scaling", "estimate scaling exponents by Monte Carlo");
    std::string c_q = "{\"5\":1}", c_n = "512,1025,2048", c_functional = "label_range", c_report;
    int c_reps = 50;
    std::uint64_t c_seed = 1;
    scaling->add_option("--q", c_q, "weight sequence JSON");
    scaling->add_option("--n", c_n, "comma-separated sizes");
    scaling->add_option("--reps", c_reps, "replications per size");
    scaling->add_option("--functional", c_functional, "label_range | distance_pair | height | all");
    scaling->add_option("--seed", c_seed, "RNG seed");
    scaling->add_option("--report", c_report, "JSON report output");
    scaling->callback([&] {
        std::vector<ScalingFunctional> fs;
        if (c_functional == "label_range" || c_functional == "all") fs.push_back(ScalingFunctional::LabelRange);
        if (c_functional == "distance_pair" || c_functional == "all") fs.push_back(ScalingFunctional::DistancePair);
        if (c_functional == "height" || c_functional == "all") fs.push_back(ScalingFunctional::Height);
        auto res = scaling_estimate(parse_q(c_q), parse_int_list(c_n), c_reps, fs, c_seed);
        std::exit(finish(res.reports, c_report));
    });

    // ---- snake ----
    auto* snake = app.add_subcommand("snake", "sample a discrete Brownian snake");
    int k_grid = 256, k_samples = 1;
    std::uint64_t k_seed = 1;
    std::string k_out, k_report;
    bool k_check = false;
    snake->add_option("--grid", k_grid, "grid size (even)");
    snake->add_option("--samples", k_samples, "number of samples (with --check)");
    snake->add_option("--seed", k_seed, "RNG seed");
    snake->add_option("--out", k_out, "CSV output (e, Z per grid point)");
    snake->add_flag("--check", k_check, "run the covariance check instead of sampling");
    snake->add_option("--report", k_report, "JSON report output");
    snake->callback([&] {
        if (k_check) {
            std::vector<TestReport> reports{snake_covariance_check(k_grid, std::max(k_samples, 1000), k_seed, 0.05)};
            std::exit(finish(reports, k_report));
        }
        Rng rng(k_seed);
        auto s = brownian_snake_sample(k_grid, rng);
        std::ostringstream os;
        os << "s,e,Z\n";
        os.precision(17);
        for (int i = 0; i <= s.e.N; ++i)
            os << double(i) / s.e.N << "," << s.e.v[i] << "," << s.Z.v[i] << "\n";
        if (k_out.empty())
            std::cout << os.str();
        else
            write_file(k_out, os.str());
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
