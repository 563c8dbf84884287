#include "linkex/analysis.hpp"

#include <stdexcept>

namespace linkex {

std::vector<double> upper_bound_lu(const Graph& g, double alpha,
                                   std::vector<double> initial, std::uint32_t t,
                                   bool message_rounding_slack) {
  const std::uint32_t n = g.node_count();
  if (initial.size() != n)
    throw std::invalid_argument("upper_bound_lu: initial vector length mismatch");
  double slack = message_rounding_slack && alpha < 1.0 ? 0.5 : 0.0;
  std::vector<double> x = std::move(initial);
  std::vector<double> ax(n);
  for (std::uint32_t step = 0; step < t; ++step) {
    for (std::uint32_t u = 0; u < n; ++u) {
      double s = 0.0;
      for (std::uint32_t v : g.neighbors(u)) s += x[v];
      ax[u] = s;
    }
    for (std::uint32_t u = 0; u < n; ++u)
      x[u] += alpha * ax[u] + slack * g.degree(u);
  }
  return x;
}

std::vector<double> upper_bound_lu(const Graph& g, double alpha, double beta,
                                   std::uint32_t t) {
  std::vector<double> x(g.node_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u)
    x[u] = (1.0 + beta) * g.degree(u);
  return upper_bound_lu(g, alpha, std::move(x), t);
}

ConvergenceReport check_convergence(const Graph& g, double alpha, std::uint32_t T) {
  const std::uint32_t n = g.node_count();
  if (n > 512)
    throw std::invalid_argument("check_convergence is limited to graphs with N <= 512");
  ConvergenceReport report;
  report.n = n;
  report.rounds = T;
  report.alpha = alpha;
  report.coverage.assign(static_cast<std::size_t>(n) * n, 0.0);

  // power = (alpha*A)^t, advanced one sparse multiply per round.
  std::vector<double> power(static_cast<std::size_t>(n) * n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v : g.neighbors(u))
      power[static_cast<std::size_t>(u) * n + v] = alpha;
  std::vector<double> nextrow(n);
  for (std::uint32_t t = 1; t <= T; ++t) {
    for (std::size_t i = 0; i < report.coverage.size(); ++i)
      report.coverage[i] += power[i];
    if (t == T) break;
    for (std::uint32_t r = 0; r < n; ++r) {
      double* row = power.data() + static_cast<std::size_t>(r) * n;
      std::fill(nextrow.begin(), nextrow.end(), 0.0);
      for (std::uint32_t v = 0; v < n; ++v) {
        double w = row[v];
        if (w == 0.0) continue;
        for (std::uint32_t x : g.neighbors(v)) nextrow[x] += w * alpha;
      }
      std::copy(nextrow.begin(), nextrow.end(), row);
    }
  }
  return report;
}

}  // namespace linkex
