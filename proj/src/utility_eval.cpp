#include "linkex/utility_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace linkex {

namespace {

constexpr std::uint64_t kExactMetricLinkLimit = 100000;
constexpr std::uint32_t kFallbackSources = 512;

double histogram_l1(const std::vector<double>& a, const std::vector<double>& b) {
  std::size_t len = std::max(a.size(), b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    double x = i < a.size() ? a[i] : 0.0;
    double y = i < b.size() ? b[i] : 0.0;
    d += std::abs(x - y);
  }
  return d;
}

}  // namespace

double relative_error(double x, double gt) {
  if (std::isnan(x) || std::isnan(gt))
    return std::numeric_limits<double>::quiet_NaN();
  if (gt == 0.0) return x == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return std::abs(x - gt) / std::abs(gt);
}

std::vector<std::uint32_t> degree_sample_nodes(const Graph& g, std::uint32_t count) {
  const std::uint32_t n = g.node_count();
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t u = 0; u < n; ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return g.degree(a) < g.degree(b);
  });
  if (count >= n) return order;
  std::vector<std::uint32_t> picked;
  picked.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint64_t rank = static_cast<std::uint64_t>(i) * (n - 1) / (count - 1);
    picked.push_back(order[rank]);
  }
  return picked;
}

Graph local_subgraph(const LinkSet& view, const LinkRegistry& registry) {
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(view.count());
  auto localize = [&](std::uint32_t v) {
    return remap.try_emplace(v, static_cast<std::uint32_t>(remap.size()))
        .first->second;
  };
  view.for_each([&](std::uint32_t id) {
    const Link& l = registry.link(id);
    edges.emplace_back(localize(l.a), localize(l.b));
  });
  return Graph::from_edges(static_cast<std::uint32_t>(remap.size()), std::move(edges));
}

std::vector<UtilityReport> evaluate_utility(
    const std::vector<LinkSet>& views, const LinkRegistry& registry,
    const std::vector<LinkSet>& ground_truth, const LinkRegistry& gt_registry,
    const std::vector<std::uint32_t>& nodes, std::uint32_t round,
    std::uint64_t seed) {
  if (views.size() != nodes.size() || ground_truth.size() != nodes.size())
    throw std::invalid_argument("evaluate_utility: view/node count mismatch");
  std::vector<UtilityReport> reports;
  reports.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    UtilityReport r;
    r.node = nodes[i];
    r.round = round;
    if (views[i].count() == 0 || ground_truth[i].count() == 0) {
      r.defined = false;
      r.rel_err_pl = r.rel_err_cc = r.rel_err_apd = r.histogram_l1 =
          std::numeric_limits<double>::quiet_NaN();
      reports.push_back(r);
      continue;
    }
    Graph noisy = local_subgraph(views[i], registry);
    Graph truth = local_subgraph(ground_truth[i], gt_registry);
    std::optional<std::uint32_t> sample_noisy, sample_truth;
    if (noisy.edge_count() > kExactMetricLinkLimit) sample_noisy = kFallbackSources;
    if (truth.edge_count() > kExactMetricLinkLimit) sample_truth = kFallbackSources;
    std::uint64_t metric_seed = derive_seed(seed, stream::kMetricsSample, nodes[i], round);
    GraphMetrics mn = compute_metrics(noisy, sample_noisy, metric_seed);
    GraphMetrics mt = compute_metrics(truth, sample_truth, metric_seed);
    r.rel_err_pl = relative_error(mn.powerlaw_exponent, mt.powerlaw_exponent);
    r.rel_err_cc = relative_error(mn.clustering_coefficient, mt.clustering_coefficient);
    r.rel_err_apd = relative_error(mn.avg_path_distance, mt.avg_path_distance);
    r.histogram_l1 = histogram_l1(mn.distance_histogram, mt.distance_histogram);
    r.defined = !std::isnan(r.rel_err_pl) && !std::isnan(r.rel_err_cc) &&
                !std::isnan(r.rel_err_apd);
    reports.push_back(r);
  }
  return reports;
}

}  // namespace linkex
