#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "linkex/rng.hpp"

namespace linkex {

struct BloomPlan {
  std::uint32_t k;  // hash functions
  double c;         // bits per element, k/ln2
  std::uint64_t m;  // filter length in bits
};

// k = ceil(-log2 p), m = ceil(k/ln2 * edge_count).
BloomPlan plan_parameters(double p, std::uint64_t edge_count);

// m-bit filter with k double-hashed positions per element. Filters sharing
// (m, k, hash_seed) are mergeable; everything else throws.
class BloomFilter {
 public:
  BloomFilter(std::uint64_t m, std::uint32_t k, std::uint64_t hash_seed);

  std::uint64_t m() const { return m_; }
  std::uint32_t k() const { return k_; }
  std::uint64_t hash_seed() const { return hash_seed_; }
  std::uint64_t ones() const { return ones_; }

  void insert(std::uint32_t a, std::uint32_t b);
  bool query(std::uint32_t a, std::uint32_t b) const;

  // The k bit positions of a canonical pair.
  std::vector<std::uint64_t> positions(std::uint32_t a, std::uint32_t b) const;

  void merge(const BloomFilter& other);

  // Alg. "bit erasure": resets s = floor(m1*(1 - alpha^(1/k))) uniformly
  // chosen set bits so members survive with probability ~ alpha.
  BloomFilter erase_bits(double alpha, SplitMix64& rng) const;

  bool test_bit(std::uint64_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void set_bit(std::uint64_t i);
  void clear_bit(std::uint64_t i);

  std::span<const std::uint64_t> words() const { return words_; }

  // Wire format: m (8B LE), k (1B), hash_seed (8B LE), payload length
  // (8B LE), then the arithmetic-coded payload.
  std::vector<std::uint8_t> compress() const;
  static BloomFilter decompress(std::span<const std::uint8_t> bytes);

  bool operator==(const BloomFilter& o) const {
    return m_ == o.m_ && k_ == o.k_ && hash_seed_ == o.hash_seed_ &&
           words_ == o.words_;
  }

 private:
  std::uint64_t m_;
  std::uint32_t k_;
  std::uint64_t hash_seed_;
  std::uint64_t ones_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace linkex
