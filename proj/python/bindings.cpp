// Thin pybind11 layer. Configs cross the boundary as JSON text; the Python
// package wraps these with friendlier signatures.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "deskball/harness.hpp"

namespace py = pybind11;
using namespace deskball;

namespace {

AgentConfig parse_config(const std::string& text, const std::string& base_dir) {
    return config_from_json(nlohmann::json::parse(text), base_dir);
}

py::dict stats_dict(const PairStats& s) {
    py::dict d;
    d["home"] = s.home;
    d["away"] = s.away;
    d["error"] = s.error ? py::cast(*s.error) : py::none();
    py::list matches;
    for (const auto& m : s.matches) {
        py::dict md;
        md["seed"] = m.seed;
        md["home_on_left"] = m.home_on_left;
        md["scored"] = m.scored;
        md["conceded"] = m.conceded;
        md["trace_hash"] = m.trace_hash;
        matches.append(md);
    }
    d["matches"] = matches;
    d["wins"] = s.wins();
    d["draws"] = s.draws();
    d["losses"] = s.losses();
    auto rate = s.win_rate();
    d["win_rate"] = rate ? py::cast(*rate) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "deskball engine bindings";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<WeightsError>(m, "WeightsError", PyExc_ValueError);

    m.attr("FEATURE_COUNT") = kFeatureCount;
    m.attr("RECEIVER_CLASSES") = kReceiverClasses;
    m.attr("SCHEMA_VERSION") = kFeatureSchemaVersion;
    m.attr("PASS_NETWORK_DIMS") = std::vector<int>(kPassNetworkDims.begin(), kPassNetworkDims.end());
    m.attr("VERIFY_PROBES") = kVerifyProbes;

    m.def("normalize_config", [](const std::string& text, const std::string& base_dir) {
        return config_to_json(parse_config(text, base_dir)).dump();
    });
    m.def("load_config", [](const std::filesystem::path& p) { return config_to_json(load_config(p)).dump(); });
    m.def("baseline_config", [] { return config_to_json(baseline_config()).dump(); });

    m.def(
        "run_match",
        [](const std::string& left, const std::string& right, const std::string& base_dir, std::uint64_t seed,
           int max_cycles, bool mirror) {
            AgentConfig l = parse_config(left, base_dir);
            AgentConfig r = parse_config(right, base_dir);
            MatchOptions opt;
            opt.mirror = mirror;
            MatchResult res;
            {
                py::gil_scoped_release release;
                res = run_match(l, r, seed, max_cycles, opt);
            }
            py::dict d;
            d["goals_left"] = res.goals_left;
            d["goals_right"] = res.goals_right;
            d["cycles_played"] = res.cycles_played;
            d["seed"] = res.seed;
            d["trace_hash"] = res.trace_hash;
            return d;
        },
        py::arg("left"), py::arg("right"), py::arg("base_dir"), py::arg("seed"), py::arg("max_cycles"),
        py::arg("mirror"));

    m.def("run_tournament", [](const std::filesystem::path& manifest) {
        Tournament t = load_manifest(manifest);
        std::vector<PairStats> stats;
        {
            py::gil_scoped_release release;
            stats = run_tournament(t);
        }
        py::list out;
        for (const auto& s : stats) out.append(stats_dict(s));
        return out;
    });

    m.def("extract_dataset", [](const std::string& config, const std::vector<std::string>& opponents,
                                const std::string& base_dir, int matches, const std::filesystem::path& out_dir,
                                std::uint64_t base_seed, int max_cycles) {
        AgentConfig c = parse_config(config, base_dir);
        std::vector<AgentConfig> opps;
        for (const auto& o : opponents) opps.push_back(parse_config(o, base_dir));
        ExtractResult r;
        {
            py::gil_scoped_release release;
            r = extract_dataset(c, opps, matches, out_dir, base_seed, max_cycles);
        }
        py::dict d;
        d["rows"] = r.rows;
        d["train_rows"] = r.train_rows;
        d["test_rows"] = r.test_rows;
        d["train_path"] = r.train_path;
        d["test_path"] = r.test_path;
        return d;
    });

    m.def("verify_weights", [](const std::filesystem::path& p) {
        WeightsReport r = verify_weights(p);
        py::dict d;
        d["dims"] = r.dims;
        d["checksum"] = r.checksum;
        d["digest"] = r.digest;
        return d;
    });
    m.def("verify_probe", [](int k) {
        FeatureVector f = verify_probe(k);
        return std::vector<double>(f.begin(), f.end());
    });
    m.def("mlp_forward", [](const std::filesystem::path& weights, const std::vector<double>& features) {
        MlpWeights w = load_weights(weights);
        return forward(w, features);
    });
    m.def("random_weights", [](const std::filesystem::path& p, std::uint64_t seed) {
        save_weights(random_pass_network(seed), p);
    });

    m.def("repair", [](const std::array<int, kGeneCount>& genes) { return repair(genes).genes; });
}
