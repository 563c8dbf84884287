#include "linkex/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "linkex/analysis.hpp"
#include "linkex/bloom_protocol.hpp"
#include "linkex/graph.hpp"
#include "linkex/privacy.hpp"
#include "linkex/protocol.hpp"
#include "linkex/utility_eval.hpp"

namespace linkex {

namespace {

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("invalid boolean value: " + v);
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::string fmt_param(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "graph") cfg.graph = value;
  else if (key == "graph_file") cfg.graph_file = value;
  else if (key == "nodes") cfg.nodes = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "edges") cfg.edges = std::stoull(value);
  else if (key == "attach_m") cfg.attach_m = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "scheme") cfg.scheme = value;
  else if (key == "alpha") cfg.alpha = std::stod(value);
  else if (key == "beta") cfg.beta = std::stod(value);
  else if (key == "gamma") cfg.gamma = std::stod(value);
  else if (key == "fp_rate") cfg.fp_rate = std::stod(value);
  else if (key == "rounds") cfg.rounds = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "compress") cfg.compress = parse_bool(value);
  else if (key == "track_freq") cfg.track_freq = parse_bool(value);
  else if (key == "incremental") cfg.incremental = parse_bool(value);
  else if (key == "attack") cfg.run_attack = parse_bool(value);
  else if (key == "utility") cfg.run_utility = parse_bool(value);
  else if (key == "account_bytes") cfg.account_bytes = parse_bool(value);
  else if (key == "per_round_recovery") cfg.per_round_recovery = parse_bool(value);
  else if (key == "exhaustive_recovery") cfg.exhaustive_recovery = parse_bool(value);
  else if (key == "samples") cfg.samples = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "out_dir") cfg.out_dir = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + line);
    apply_override(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return load_config(in);
}

void write_config(const ExperimentConfig& cfg, std::ostream& out) {
  out << "graph=" << cfg.graph << '\n';
  if (!cfg.graph_file.empty()) out << "graph_file=" << cfg.graph_file << '\n';
  out << "nodes=" << cfg.nodes << '\n'
      << "edges=" << cfg.edges << '\n'
      << "attach_m=" << cfg.attach_m << '\n'
      << "scheme=" << cfg.scheme << '\n'
      << "alpha=" << fmt_param(cfg.alpha) << '\n'
      << "beta=" << fmt_param(cfg.beta) << '\n'
      << "gamma=" << fmt_param(cfg.gamma) << '\n'
      << "fp_rate=" << fmt_param(cfg.fp_rate) << '\n'
      << "rounds=" << cfg.rounds << '\n'
      << "seed=" << cfg.seed << '\n'
      << "compress=" << (cfg.compress ? "true" : "false") << '\n'
      << "track_freq=" << (cfg.track_freq ? "true" : "false") << '\n'
      << "incremental=" << (cfg.incremental ? "true" : "false") << '\n'
      << "attack=" << (cfg.run_attack ? "true" : "false") << '\n'
      << "utility=" << (cfg.run_utility ? "true" : "false") << '\n'
      << "account_bytes=" << (cfg.account_bytes ? "true" : "false") << '\n'
      << "per_round_recovery=" << (cfg.per_round_recovery ? "true" : "false") << '\n'
      << "exhaustive_recovery=" << (cfg.exhaustive_recovery ? "true" : "false") << '\n'
      << "samples=" << cfg.samples << '\n'
      << "out_dir=" << cfg.out_dir << '\n';
}

namespace {

Graph build_graph(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.graph == "er") {
    log << "generating ER graph n=" << cfg.nodes << " m=" << cfg.edges << "\n";
    return generate_er(cfg.nodes, cfg.edges, cfg.seed);
  }
  if (cfg.graph == "ba") {
    log << "generating BA graph n=" << cfg.nodes << " attach_m=" << cfg.attach_m << "\n";
    return generate_ba(cfg.nodes, cfg.attach_m, cfg.seed);
  }
  if (cfg.graph == "file") {
    if (cfg.graph_file.empty())
      throw std::invalid_argument("graph=file requires graph_file");
    log << "loading graph from " << cfg.graph_file << "\n";
    return load_edge_list_file(cfg.graph_file);
  }
  throw std::invalid_argument("unknown graph kind: " + cfg.graph);
}

void write_rounds_csv(const std::filesystem::path& dir,
                      const std::vector<RoundMetrics>& rounds) {
  std::ofstream out = open_out(dir / "rounds.csv");
  out << "round,true_links_total,fake_links_total,normalized_volume,ratio,"
         "bytes_baseline,bytes_bloom_raw,bytes_bloom_compressed\n";
  for (const RoundMetrics& r : rounds) {
    out << r.round << ',' << r.true_links_total << ',' << r.fake_links_total
        << ',' << fmt(r.normalized_volume) << ',' << fmt(r.ratio) << ','
        << r.bytes_baseline << ',' << r.bytes_bloom_raw << ','
        << r.bytes_bloom_compressed << '\n';
  }
}

void write_node_volumes_csv(const std::filesystem::path& dir, const Graph& g,
                            const std::vector<std::uint32_t>& samples,
                            const std::vector<std::vector<std::uint32_t>>& volumes) {
  std::ofstream out = open_out(dir / "node_volumes.csv");
  out << "node,degree,round,links\n";
  for (std::uint32_t u : samples)
    for (std::size_t t = 0; t < volumes.size(); ++t)
      out << u << ',' << g.degree(u) << ',' << t << ',' << volumes[t][u] << '\n';
}

void write_attack_csv(const std::filesystem::path& dir,
                      std::vector<AttackReport> reports) {
  std::sort(reports.begin(), reports.end(),
            [](const AttackReport& a, const AttackReport& b) { return a.node < b.node; });
  std::ofstream out = open_out(dir / "attack.csv");
  out << "node,tp,fp,fn,tn,precision,recall,f1\n";
  for (const AttackReport& r : reports)
    out << r.node << ',' << r.tp << ',' << r.fp << ',' << r.fn << ',' << r.tn
        << ',' << fmt(r.precision) << ',' << fmt(r.recall) << ',' << fmt(r.f1)
        << '\n';
}

void write_utility_csv(const std::filesystem::path& dir, const std::string& scheme,
                       const std::vector<std::vector<UtilityReport>>& by_round) {
  std::ofstream out = open_out(dir / "utility.csv");
  out << "node,round,scheme,rel_pl,rel_cc,rel_apd,dist_l1\n";
  for (const auto& round_reports : by_round)
    for (const UtilityReport& r : round_reports)
      out << r.node << ',' << r.round << ',' << scheme << ',' << fmt(r.rel_err_pl)
          << ',' << fmt(r.rel_err_cc) << ',' << fmt(r.rel_err_apd) << ','
          << fmt(r.histogram_l1) << '\n';
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.scheme != "baseline" && cfg.scheme != "bloom")
    throw std::invalid_argument("unknown scheme: " + cfg.scheme);

  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);

  Graph g = build_graph(cfg, log);
  log << "graph: N=" << g.node_count() << " M=" << g.edge_count() << "\n";

  std::vector<std::uint32_t> samples =
      degree_sample_nodes(g, std::min<std::uint32_t>(cfg.samples, g.node_count()));

  ProtocolConfig pc;
  pc.alpha = cfg.alpha;
  pc.beta = cfg.beta;
  pc.gamma = cfg.gamma;
  pc.seed = cfg.seed;
  pc.incremental = cfg.incremental;
  pc.account_bytes = cfg.account_bytes;
  pc.rounds = cfg.rounds;
  if (pc.rounds == 0) {
    pc.rounds = resolve_rounds(g, pc);
    log << "rounds resolved to Diam(G) = " << pc.rounds << "\n";
  }
  bool want_freq = cfg.track_freq || (cfg.run_attack && cfg.scheme == "baseline");
  if (want_freq) {
    pc.track_freq = true;
    pc.freq_nodes = samples;
  }
  if (cfg.run_utility) pc.snapshot_nodes = samples;

  std::vector<RoundMetrics> rounds;
  std::vector<std::vector<std::uint32_t>> volumes;
  std::vector<AttackReport> attack_reports;
  std::vector<std::vector<UtilityReport>> utility_reports;
  std::map<std::uint32_t, std::vector<LinkSet>> snapshots;
  const LinkRegistry* registry = nullptr;

  BaselineResult base;
  BloomResult bloom;
  if (cfg.scheme == "baseline") {
    base = run_baseline(g, pc);
    rounds = base.rounds;
    volumes = base.volumes;
    snapshots = std::move(base.snapshots);
    registry = &base.registry;
    if (cfg.run_attack)
      for (std::uint32_t u : samples)
        attack_reports.push_back(
            mount_attack(base.nodes[u], u, base.registry, cfg.beta, cfg.seed));
  } else {
    BloomOptions opts;
    opts.fp_rate = cfg.fp_rate;
    opts.per_round_recovery = cfg.per_round_recovery;
    opts.compress_accounting = cfg.compress;
    bloom = run_bloom(g, pc, opts);
    rounds = bloom.rounds;
    volumes = bloom.volumes;
    snapshots = std::move(bloom.snapshots);
    registry = &bloom.registry;
    log << "bloom plan: k=" << bloom.plan.k << " m=" << bloom.plan.m
        << " recovery_download_bytes=" << bloom.recovery_download_bytes << "\n";
    if (cfg.run_attack)
      for (std::uint32_t u : samples)
        attack_reports.push_back(mount_attack_random(bloom.recovered[u], u,
                                                     bloom.registry, cfg.beta,
                                                     cfg.seed));
    if (cfg.exhaustive_recovery) {
      if (g.node_count() > 200)
        throw std::invalid_argument("exhaustive recovery is for tiny graphs (N <= 200)");
      std::uint64_t phantoms = 0, accepted = 0;
      for (std::uint32_t u = 0; u < g.node_count(); ++u) {
        auto pairs = recover_exhaustive(bloom.filters[u], g.node_count());
        accepted += pairs.size();
        for (auto [a, b] : pairs)
          if (!bloom.registry.contains(a, b)) ++phantoms;
      }
      log << "exhaustive recovery: accepted=" << accepted
          << " phantoms=" << phantoms << "\n";
    }
  }

  if (cfg.run_utility) {
    ProtocolConfig gt_pc = pc;
    gt_pc.beta = 0.0;
    gt_pc.gamma = 1.0;
    gt_pc.track_freq = false;
    gt_pc.freq_nodes.clear();
    gt_pc.incremental = false;
    BaselineResult truth = run_baseline(g, gt_pc);
    for (std::uint32_t t = 0; t <= pc.rounds; ++t) {
      auto it = snapshots.find(t);
      auto gt_it = truth.snapshots.find(t);
      if (it == snapshots.end() || gt_it == truth.snapshots.end()) continue;
      utility_reports.push_back(evaluate_utility(it->second, *registry,
                                                 gt_it->second, truth.registry,
                                                 samples, t, cfg.seed));
    }
  }

  write_rounds_csv(dir, rounds);
  if (!volumes.empty()) write_node_volumes_csv(dir, g, samples, volumes);
  if (cfg.run_attack) write_attack_csv(dir, std::move(attack_reports));
  if (cfg.run_utility) write_utility_csv(dir, cfg.scheme, utility_reports);

  {
    std::ofstream out = open_out(dir / "manifest.txt");
    write_config(cfg, out);
    out << "# resolved_rounds=" << pc.rounds << '\n';
    out << "# graph_nodes=" << g.node_count() << '\n';
    out << "# graph_edges=" << g.edge_count() << '\n';
    if (registry) {
      out << "# registry_true=" << registry->true_count() << '\n';
      out << "# registry_fake=" << registry->fake_count() << '\n';
    }
    if (cfg.scheme == "bloom") {
      out << "# bloom_k=" << bloom.plan.k << '\n';
      out << "# bloom_m=" << bloom.plan.m << '\n';
      out << "# recovery_download_bytes=" << bloom.recovery_download_bytes << '\n';
    }
  }

  if (!rounds.empty()) {
    const RoundMetrics& last = rounds.back();
    log << "final round " << last.round << ": true=" << last.true_links_total
        << " fake=" << last.fake_links_total << " ratio=" << fmt(last.ratio)
        << "\n";
  }
  log << "wrote artifacts to " << dir.string() << "\n";
}

}  // namespace linkex
