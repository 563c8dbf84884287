#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linkex/analysis.hpp"
#include "linkex/bloom.hpp"
#include "linkex/bloom_protocol.hpp"
#include "linkex/graph.hpp"
#include "linkex/privacy.hpp"
#include "linkex/protocol.hpp"
#include "linkex/utility_eval.hpp"

namespace py = pybind11;
using namespace linkex;

namespace {

ProtocolConfig make_config(double alpha, double beta, double gamma,
                           std::uint32_t rounds, std::uint64_t seed,
                           bool track_freq, bool incremental,
                           bool account_bytes,
                           std::vector<std::uint32_t> freq_nodes,
                           std::vector<std::uint32_t> snapshot_nodes) {
  ProtocolConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.gamma = gamma;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.track_freq = track_freq;
  cfg.incremental = incremental;
  cfg.account_bytes = account_bytes;
  cfg.freq_nodes = std::move(freq_nodes);
  cfg.snapshot_nodes = std::move(snapshot_nodes);
  return cfg;
}

std::vector<std::tuple<std::uint32_t, std::uint32_t, bool>> view_links(
    const LinkSet& view, const LinkRegistry& reg) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, bool>> out;
  out.reserve(view.count());
  view.for_each([&](std::uint32_t id) {
    const Link& l = reg.link(id);
    out.emplace_back(l.a, l.b, l.kind == LinkKind::True);
  });
  return out;
}

}  // namespace

PYBIND11_MODULE(linkex, m) {
  m.doc() = "Private link exchange over social graphs: baseline and "
            "bloom-filter (alpha,beta)-exchange simulators";

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("degree", &Graph::degree, py::arg("u"))
      .def("has_edge", &Graph::has_edge, py::arg("u"), py::arg("v"))
      .def("neighbors", [](const Graph& g, std::uint32_t u) {
        auto nb = g.neighbors(u);
        return std::vector<std::uint32_t>(nb.begin(), nb.end());
      }, py::arg("u"));

  py::class_<GraphMetrics>(m, "GraphMetrics")
      .def_readonly("diameter", &GraphMetrics::diameter)
      .def_readonly("avg_path_distance", &GraphMetrics::avg_path_distance)
      .def_readonly("distance_histogram", &GraphMetrics::distance_histogram)
      .def_readonly("clustering_coefficient", &GraphMetrics::clustering_coefficient)
      .def_readonly("powerlaw_exponent", &GraphMetrics::powerlaw_exponent);

  m.def("generate_er", &generate_er, py::arg("n"), py::arg("m_target"),
        py::arg("seed"));
  m.def("generate_ba", &generate_ba, py::arg("n"), py::arg("attach_m"),
        py::arg("seed"));
  m.def("load_edge_list", &load_edge_list_file, py::arg("path"));
  m.def("save_edge_list", &save_edge_list_file, py::arg("graph"), py::arg("path"));
  m.def("bfs_distances", &bfs_distances, py::arg("graph"), py::arg("source"));
  m.def("compute_metrics",
        [](const Graph& g, std::optional<std::uint32_t> pair_sample,
           std::uint64_t seed) { return compute_metrics(g, pair_sample, seed); },
        py::arg("graph"), py::arg("pair_sample") = py::none(), py::arg("seed") = 0);
  m.def("diameter", &diameter, py::arg("graph"));

  py::class_<RoundMetrics>(m, "RoundMetrics")
      .def_readonly("round", &RoundMetrics::round)
      .def_readonly("true_links_total", &RoundMetrics::true_links_total)
      .def_readonly("fake_links_total", &RoundMetrics::fake_links_total)
      .def_readonly("normalized_volume", &RoundMetrics::normalized_volume)
      .def_readonly("ratio", &RoundMetrics::ratio)
      .def_readonly("bytes_baseline", &RoundMetrics::bytes_baseline)
      .def_readonly("bytes_bloom_raw", &RoundMetrics::bytes_bloom_raw)
      .def_readonly("bytes_bloom_compressed", &RoundMetrics::bytes_bloom_compressed)
      .def_readonly("wall_time_ms", &RoundMetrics::wall_time_ms);

  py::class_<AttackReport>(m, "AttackReport")
      .def_readonly("node", &AttackReport::node)
      .def_readonly("tp", &AttackReport::tp)
      .def_readonly("fp", &AttackReport::fp)
      .def_readonly("fn", &AttackReport::fn)
      .def_readonly("tn", &AttackReport::tn)
      .def_readonly("precision", &AttackReport::precision)
      .def_readonly("recall", &AttackReport::recall)
      .def_readonly("f1", &AttackReport::f1)
      .def_readonly("k_threshold", &AttackReport::k_threshold);

  py::class_<ProtocolConfig>(m, "ProtocolConfig")
      .def(py::init(&make_config), py::arg("alpha") = 1.0, py::arg("beta") = 0.0,
           py::arg("gamma") = 1.0, py::arg("rounds") = 0, py::arg("seed") = 0,
           py::arg("track_freq") = false, py::arg("incremental") = false,
           py::arg("account_bytes") = true,
           py::arg("freq_nodes") = std::vector<std::uint32_t>{},
           py::arg("snapshot_nodes") = std::vector<std::uint32_t>{})
      .def_readwrite("alpha", &ProtocolConfig::alpha)
      .def_readwrite("beta", &ProtocolConfig::beta)
      .def_readwrite("gamma", &ProtocolConfig::gamma)
      .def_readwrite("rounds", &ProtocolConfig::rounds)
      .def_readwrite("seed", &ProtocolConfig::seed)
      .def_readwrite("track_freq", &ProtocolConfig::track_freq)
      .def_readwrite("incremental", &ProtocolConfig::incremental)
      .def_readwrite("account_bytes", &ProtocolConfig::account_bytes);

  py::class_<BaselineResult>(m, "BaselineResult")
      .def_readonly("rounds", &BaselineResult::rounds)
      .def_readonly("rounds_executed", &BaselineResult::rounds_executed)
      .def_property_readonly("true_link_count",
                             [](const BaselineResult& r) { return r.registry.true_count(); })
      .def_property_readonly("fake_link_count",
                             [](const BaselineResult& r) { return r.registry.fake_count(); })
      .def("view_size",
           [](const BaselineResult& r, std::uint32_t u) {
             return r.nodes.at(u).view.count();
           }, py::arg("node"))
      .def("view_links",
           [](const BaselineResult& r, std::uint32_t u) {
             return view_links(r.nodes.at(u).view, r.registry);
           }, py::arg("node"))
      .def("final_ratio",
           [](const BaselineResult& r) {
             return ratio_true_fake(std::span<const NodeState>(r.nodes), r.registry);
           })
      .def("attack_report",
           [](const BaselineResult& r, std::uint32_t u, double beta,
              std::uint64_t seed) {
             return mount_attack(r.nodes.at(u), u, r.registry, beta, seed);
           }, py::arg("node"), py::arg("beta"), py::arg("seed") = 0);

  m.def("run_baseline", &run_baseline, py::arg("graph"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<BloomPlan>(m, "BloomPlan")
      .def_readonly("k", &BloomPlan::k)
      .def_readonly("c", &BloomPlan::c)
      .def_readonly("m", &BloomPlan::m);

  m.def("plan_parameters", &plan_parameters, py::arg("p"), py::arg("edge_count"));

  py::class_<BloomFilter>(m, "BloomFilter")
      .def(py::init<std::uint64_t, std::uint32_t, std::uint64_t>(), py::arg("m"),
           py::arg("k"), py::arg("hash_seed"))
      .def_property_readonly("m", &BloomFilter::m)
      .def_property_readonly("k", &BloomFilter::k)
      .def_property_readonly("ones", &BloomFilter::ones)
      .def("insert", &BloomFilter::insert, py::arg("a"), py::arg("b"))
      .def("query", &BloomFilter::query, py::arg("a"), py::arg("b"))
      .def("merge", &BloomFilter::merge, py::arg("other"))
      .def("erase_bits",
           [](const BloomFilter& bf, double alpha, std::uint64_t seed) {
             SplitMix64 rng(seed);
             return bf.erase_bits(alpha, rng);
           }, py::arg("alpha"), py::arg("seed"))
      .def("compress",
           [](const BloomFilter& bf) {
             auto bytes = bf.compress();
             return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                              bytes.size());
           })
      .def_static("decompress",
                  [](const py::bytes& data) {
                    std::string_view sv = data;
                    return BloomFilter::decompress(std::span<const std::uint8_t>(
                        reinterpret_cast<const std::uint8_t*>(sv.data()), sv.size()));
                  }, py::arg("data"))
      .def("__eq__", [](const BloomFilter& a, const BloomFilter& b) { return a == b; },
           py::is_operator());

  py::class_<BloomResult>(m, "BloomResult")
      .def_readonly("rounds", &BloomResult::rounds)
      .def_readonly("rounds_executed", &BloomResult::rounds_executed)
      .def_readonly("recovery_download_bytes", &BloomResult::recovery_download_bytes)
      .def_property_readonly("plan", [](const BloomResult& r) { return r.plan; })
      .def_property_readonly("true_link_count",
                             [](const BloomResult& r) { return r.registry.true_count(); })
      .def_property_readonly("fake_link_count",
                             [](const BloomResult& r) { return r.registry.fake_count(); })
      .def("recovered_size",
           [](const BloomResult& r, std::uint32_t u) {
             return r.recovered.at(u).count();
           }, py::arg("node"))
      .def("recovered_links",
           [](const BloomResult& r, std::uint32_t u) {
             return view_links(r.recovered.at(u), r.registry);
           }, py::arg("node"))
      .def("final_ratio",
           [](const BloomResult& r) {
             return ratio_true_fake(std::span<const LinkSet>(r.recovered), r.registry);
           });

  m.def("run_bloom",
        [](const Graph& g, const ProtocolConfig& cfg, double p,
           bool per_round_recovery, bool compress_accounting) {
          BloomOptions opts;
          opts.fp_rate = p;
          opts.per_round_recovery = per_round_recovery;
          opts.compress_accounting = compress_accounting;
          return run_bloom(g, cfg, opts);
        },
        py::arg("graph"), py::arg("config"), py::arg("p") = 0.1,
        py::arg("per_round_recovery") = true, py::arg("compress_accounting") = false,
        py::call_guard<py::gil_scoped_release>());

  m.def("upper_bound_lu",
        static_cast<std::vector<double> (*)(const Graph&, double, double,
                                            std::uint32_t)>(&upper_bound_lu),
        py::arg("graph"), py::arg("alpha"), py::arg("beta"), py::arg("t"));
  m.def("degree_sample_nodes", &degree_sample_nodes, py::arg("graph"),
        py::arg("count"));
}
