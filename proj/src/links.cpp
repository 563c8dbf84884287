#include "linkex/links.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace linkex {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::uint32_t LinkRegistry::add_true(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  if (a == b) throw std::invalid_argument("link endpoints must differ");
  auto [it, inserted] = ids_.try_emplace(pair_key(a, b), size());
  if (!inserted) throw std::invalid_argument("duplicate link registration");
  links_.push_back({a, b, LinkKind::True, 0});
  ++true_count_;
  return it->second;
}

std::uint32_t LinkRegistry::add_fake(std::uint32_t a, std::uint32_t b,
                                     std::uint32_t origin) {
  if (a > b) std::swap(a, b);
  if (a == b) throw std::invalid_argument("link endpoints must differ");
  if (origin != a && origin != b)
    throw std::invalid_argument("fake link origin must be an endpoint");
  auto [it, inserted] = ids_.try_emplace(pair_key(a, b), size());
  if (!inserted) throw std::invalid_argument("duplicate link registration");
  links_.push_back({a, b, LinkKind::Fake, origin});
  ++fake_count_;
  return it->second;
}

std::optional<std::uint32_t> LinkRegistry::find(std::uint32_t a,
                                                std::uint32_t b) const {
  if (a > b) std::swap(a, b);
  auto it = ids_.find(pair_key(a, b));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void LinkRegistry::dump(std::ostream& out) const {
  for (std::uint32_t id = 0; id < size(); ++id) {
    const Link& l = links_[id];
    out << id << ' ' << l.a << ' ' << l.b << ' '
        << (l.kind == LinkKind::True ? "true" : "fake") << ' ';
    if (l.kind == LinkKind::True)
      out << '-';
    else
      out << l.origin;
    out << '\n';
  }
}

void LinkSet::resize(std::uint32_t capacity) {
  capacity_ = capacity;
  words_.resize((capacity + 63) / 64, 0);
  if (!freq_.empty()) freq_.resize(capacity, 0);
}

void LinkSet::union_into(const LinkSet& src) {
  if (src.capacity_ > capacity_) resize(src.capacity_);
  if (freq_.empty()) {
    std::uint32_t added = 0;
    for (std::size_t i = 0; i < src.words_.size(); ++i) {
      std::uint64_t nw = words_[i] | src.words_[i];
      added += std::popcount(nw ^ words_[i]);
      words_[i] = nw;
    }
    count_ += added;
  } else {
    src.for_each([&](std::uint32_t id) { add_arrival(id); });
  }
}

void LinkSet::count_arrivals_from(const LinkSet& src) {
  if (freq_.empty()) return;
  src.for_each([&](std::uint32_t id) { ++freq_[id]; });
}

std::vector<std::uint32_t> LinkSet::ids() const {
  std::vector<std::uint32_t> out;
  out.reserve(count_);
  for_each([&](std::uint32_t id) { out.push_back(id); });
  return out;
}

void LinkSet::recount() {
  std::uint64_t c = 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  count_ = static_cast<std::uint32_t>(c);
}

std::uint32_t LinkSet::count_below(std::uint32_t bound) const {
  std::uint32_t full = std::min<std::uint32_t>(bound >> 6,
                                               static_cast<std::uint32_t>(words_.size()));
  std::uint32_t c = 0;
  for (std::uint32_t i = 0; i < full; ++i) c += std::popcount(words_[i]);
  if ((bound & 63) && (bound >> 6) < words_.size())
    c += std::popcount(words_[bound >> 6] & ((1ULL << (bound & 63)) - 1));
  return c;
}

InitialState register_initial_links(const Graph& g, double beta, double gamma,
                                    std::uint64_t seed) {
  if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
  if (gamma < 0 || gamma > 1) throw std::invalid_argument("gamma must be in [0,1]");
  InitialState st;
  const std::uint32_t n = g.node_count();

  g.for_each_edge([&](std::uint32_t u, std::uint32_t v) {
    st.registry.add_true(u, v);
  });

  // Fake targets drawn uniformly from non-neighbors; redraw on collision with
  // any registered pair so all M' links stay distinct. Pairs already taken by
  // earlier nodes' fakes shrink the feasible set.
  std::vector<std::uint32_t> fake_incident(n, 0);
  BudgetRounder rounder;
  for (std::uint32_t u = 0; u < n; ++u) {
    std::uint64_t want = rounder.next(gamma * beta * g.degree(u));
    if (want == 0) continue;
    std::uint64_t taken = g.degree(u) + fake_incident[u];
    if (want + taken > n - 1)
      throw std::invalid_argument("node " + std::to_string(u) +
                                  " lacks enough non-neighbors for beta=" +
                                  std::to_string(beta));
    SplitMix64 rng = derive_stream(seed, stream::kInitFakes, u);
    std::uint64_t made = 0;
    while (made < want) {
      auto w = static_cast<std::uint32_t>(rng.below(n));
      if (w == u || g.has_edge(u, w)) continue;
      if (st.registry.contains(u, w)) continue;
      st.registry.add_fake(std::min(u, w), std::max(u, w), u);
      ++fake_incident[u];
      ++fake_incident[w];
      ++made;
    }
  }

  st.views.assign(n, LinkSet(st.registry.size()));
  for (std::uint32_t id = 0; id < st.registry.true_count(); ++id) {
    const Link& l = st.registry.link(id);
    st.views[l.a].insert(id);
    st.views[l.b].insert(id);
  }
  for (std::uint32_t id = st.registry.true_count(); id < st.registry.size(); ++id) {
    const Link& l = st.registry.link(id);
    st.views[l.origin].insert(id);
  }
  return st;
}

std::vector<std::uint32_t> sample_ids(const LinkSet& s, double alpha,
                                      SplitMix64& rng) {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must be in [0,1]");
  std::vector<std::uint32_t> pool = s.ids();
  auto take = static_cast<std::size_t>(round_count(alpha * s.count()));
  partial_shuffle(pool, take, rng);
  pool.resize(take);
  return pool;
}

LinkSet sample_alpha(const LinkSet& s, double alpha, SplitMix64& rng) {
  LinkSet out(s.capacity());
  for (std::uint32_t id : sample_ids(s, alpha, rng)) out.insert(id);
  return out;
}

}  // namespace linkex
