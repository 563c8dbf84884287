#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "linkex/graph.hpp"
#include "linkex/rng.hpp"

namespace linkex {

enum class LinkKind : std::uint8_t { True, Fake };

// Canonical node pair (a < b). For fake links, origin is the endpoint that
// fabricated the link.
struct Link {
  std::uint32_t a;
  std::uint32_t b;
  LinkKind kind;
  std::uint32_t origin;  // only meaningful for Fake
};

// Global registry assigning dense IDs to every distinct link of one
// experiment: true links first (lexicographic), then fakes in creation order.
class LinkRegistry {
 public:
  std::uint32_t add_true(std::uint32_t a, std::uint32_t b);
  std::uint32_t add_fake(std::uint32_t a, std::uint32_t b, std::uint32_t origin);

  std::optional<std::uint32_t> find(std::uint32_t a, std::uint32_t b) const;
  bool contains(std::uint32_t a, std::uint32_t b) const { return find(a, b).has_value(); }

  const Link& link(std::uint32_t id) const { return links_[id]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(links_.size()); }
  std::uint32_t true_count() const { return true_count_; }
  std::uint32_t fake_count() const { return fake_count_; }

  bool is_true(std::uint32_t id) const { return links_[id].kind == LinkKind::True; }
  bool incident(std::uint32_t id, std::uint32_t node) const {
    return links_[id].a == node || links_[id].b == node;
  }

  // One line per link: "id u v kind origin" (origin "-" for true links).
  void dump(std::ostream& out) const;

 private:
  std::vector<Link> links_;
  std::unordered_map<std::uint64_t, std::uint32_t> ids_;
  std::uint32_t true_count_ = 0;
  std::uint32_t fake_count_ = 0;
};

// A node's noisy local view: membership bits over registry IDs plus optional
// arrival counters for the inference attack.
class LinkSet {
 public:
  LinkSet() = default;
  explicit LinkSet(std::uint32_t capacity) { resize(capacity); }

  void resize(std::uint32_t capacity);
  std::uint32_t capacity() const { return capacity_; }
  std::uint32_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool test(std::uint32_t id) const {
    return (words_[id >> 6] >> (id & 63)) & 1;
  }
  // Returns true when the bit was newly set.
  bool insert(std::uint32_t id) {
    std::uint64_t& w = words_[id >> 6];
    std::uint64_t mask = 1ULL << (id & 63);
    if (w & mask) return false;
    w |= mask;
    ++count_;
    return true;
  }

  void enable_freq() { freq_.assign(capacity_, 0); }
  bool freq_enabled() const { return !freq_.empty(); }
  std::uint32_t freq(std::uint32_t id) const { return freq_[id]; }
  void add_arrival(std::uint32_t id) {
    insert(id);
    if (!freq_.empty()) ++freq_[id];
  }

  // dst |= src; with freq enabled, counts one arrival per id set in src.
  void union_into(const LinkSet& src);

  // Arrival counting for a full-view message without touching membership
  // (used by the alpha=1 fast path after the word-level OR).
  void count_arrivals_from(const LinkSet& src);

  std::vector<std::uint32_t> ids() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        f(static_cast<std::uint32_t>((wi << 6) + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }
  void recount();

  // Number of set ids below bound (true links occupy the low id range).
  std::uint32_t count_below(std::uint32_t bound) const;

  bool operator==(const LinkSet& o) const {
    return capacity_ == o.capacity_ && words_ == o.words_;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> freq_;
  std::uint32_t capacity_ = 0;
  std::uint32_t count_ = 0;
};

struct InitialState {
  LinkRegistry registry;
  std::vector<LinkSet> views;  // one per node, at t = 0
};

// Standard initialization (gamma scales the fake budget; gamma = 1 is the
// full beta*d_u allotment). Each node u holds its true incident links plus
// round(gamma*beta*d_u) fake links to distinct non-neighbors.
InitialState register_initial_links(const Graph& g, double beta, double gamma,
                                    std::uint64_t seed);

// round(alpha*|s|) ids drawn uniformly without replacement, ascending pool
// order before shuffling.
std::vector<std::uint32_t> sample_ids(const LinkSet& s, double alpha,
                                      SplitMix64& rng);
LinkSet sample_alpha(const LinkSet& s, double alpha, SplitMix64& rng);

}  // namespace linkex
