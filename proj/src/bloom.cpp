#include "linkex/bloom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace linkex {

BloomPlan plan_parameters(double p, std::uint64_t edge_count) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("false positive rate must be in (0,1)");
  auto k = static_cast<std::uint32_t>(std::ceil(-std::log2(p)));
  double c = k / std::log(2.0);
  auto m = static_cast<std::uint64_t>(std::ceil(c * static_cast<double>(edge_count)));
  return {k, c, std::max<std::uint64_t>(m, 1)};
}

BloomFilter::BloomFilter(std::uint64_t m, std::uint32_t k, std::uint64_t hash_seed)
    : m_(m), k_(k), hash_seed_(hash_seed), words_((m + 63) / 64, 0) {
  if (m == 0 || k == 0)
    throw std::invalid_argument("bloom filter needs m > 0 and k >= 1");
}

void BloomFilter::set_bit(std::uint64_t i) {
  std::uint64_t& w = words_[i >> 6];
  std::uint64_t mask = 1ULL << (i & 63);
  if (!(w & mask)) {
    w |= mask;
    ++ones_;
  }
}

void BloomFilter::clear_bit(std::uint64_t i) {
  std::uint64_t& w = words_[i >> 6];
  std::uint64_t mask = 1ULL << (i & 63);
  if (w & mask) {
    w &= ~mask;
    --ones_;
  }
}

std::vector<std::uint64_t> BloomFilter::positions(std::uint32_t a,
                                                  std::uint32_t b) const {
  if (a > b) std::swap(a, b);
  std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
  std::uint64_t h1 = mix64(hash_seed_ ^ mix64(key ^ 0x71c9d1e8a5aa9c3bULL));
  std::uint64_t h2 = mix64(h1 ^ 0x9e3779b97f4a7c15ULL);
  std::uint64_t step = m_ > 1 ? h2 % (m_ - 1) + 1 : 0;
  std::vector<std::uint64_t> pos(k_);
  std::uint64_t p = h1 % m_;
  for (std::uint32_t i = 0; i < k_; ++i) {
    pos[i] = p;
    p += step;
    if (p >= m_) p -= m_;
  }
  return pos;
}

void BloomFilter::insert(std::uint32_t a, std::uint32_t b) {
  for (std::uint64_t p : positions(a, b)) set_bit(p);
}

bool BloomFilter::query(std::uint32_t a, std::uint32_t b) const {
  for (std::uint64_t p : positions(a, b))
    if (!test_bit(p)) return false;
  return true;
}

void BloomFilter::merge(const BloomFilter& other) {
  if (m_ != other.m_ || k_ != other.k_ || hash_seed_ != other.hash_seed_)
    throw std::invalid_argument("bloom filter parameter mismatch in merge");
  std::uint64_t ones = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] |= other.words_[i];
    ones += std::popcount(words_[i]);
  }
  ones_ = ones;
}

BloomFilter BloomFilter::erase_bits(double alpha, SplitMix64& rng) const {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must be in [0,1]");
  BloomFilter out = *this;
  if (alpha == 1.0 || ones_ == 0) return out;
  std::vector<std::uint64_t> set_positions;
  set_positions.reserve(ones_);
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w) {
      set_positions.push_back((static_cast<std::uint64_t>(wi) << 6) +
                              std::countr_zero(w));
      w &= w - 1;
    }
  }
  double m1 = static_cast<double>(set_positions.size());
  auto s = static_cast<std::uint64_t>(
      std::floor(m1 * (1.0 - std::pow(alpha, 1.0 / k_))));
  s = std::min<std::uint64_t>(s, set_positions.size());
  for (std::uint64_t i = 0; i < s; ++i) {
    std::uint64_t j = i + rng.below(set_positions.size() - i);
    std::swap(set_positions[i], set_positions[j]);
    out.clear_bit(set_positions[i]);
  }
  return out;
}

// ---- adaptive binary arithmetic codec ----------------------------------
//
// Carry-less 32-bit range coder over single-context adaptive bit
// probabilities (counts start at 1/1). Sparse filters compress close to the
// m*H(q) entropy bound.

namespace {

constexpr std::uint32_t kProbBits = 16;

struct AdaptiveBitModel {
  std::uint32_t c0 = 1, c1 = 1;

  std::uint32_t prob_one() const {
    auto p = static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(c1) << kProbBits) / (c0 + c1));
    return std::clamp<std::uint32_t>(p, 1, (1u << kProbBits) - 1);
  }

  void update(int bit) {
    bit ? ++c1 : ++c0;
    if (c0 + c1 >= (1u << kProbBits)) {
      c0 = (c0 + 1) >> 1;
      c1 = (c1 + 1) >> 1;
    }
  }
};

class BitEncoder {
 public:
  explicit BitEncoder(std::vector<std::uint8_t>& out) : out_(out) {}

  void encode(int bit, std::uint32_t prob_one) {
    std::uint32_t x = lo_ + static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(hi_ - lo_) * prob_one) >> kProbBits);
    if (bit)
      hi_ = x;
    else
      lo_ = x + 1;
    while ((lo_ ^ hi_) < (1u << 24)) {
      out_.push_back(static_cast<std::uint8_t>(lo_ >> 24));
      lo_ <<= 8;
      hi_ = (hi_ << 8) | 0xff;
    }
  }

  void flush() {
    for (int i = 0; i < 4; ++i) {
      out_.push_back(static_cast<std::uint8_t>(lo_ >> 24));
      lo_ <<= 8;
    }
  }

 private:
  std::uint32_t lo_ = 0, hi_ = ~0u;
  std::vector<std::uint8_t>& out_;
};

class BitDecoder {
 public:
  explicit BitDecoder(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | read_byte();
  }

  int decode(std::uint32_t prob_one) {
    std::uint32_t x = lo_ + static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(hi_ - lo_) * prob_one) >> kProbBits);
    int bit;
    if (code_ <= x) {
      hi_ = x;
      bit = 1;
    } else {
      lo_ = x + 1;
      bit = 0;
    }
    while ((lo_ ^ hi_) < (1u << 24)) {
      code_ = (code_ << 8) | read_byte();
      lo_ <<= 8;
      hi_ = (hi_ << 8) | 0xff;
    }
    return bit;
  }

 private:
  std::uint8_t read_byte() {
    if (pos_ >= bytes_.size())
      throw std::runtime_error("bloom decompress: truncated payload");
    return bytes_[pos_++];
  }

  std::uint32_t lo_ = 0, hi_ = ~0u, code_ = 0;
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

constexpr std::size_t kHeaderSize = 8 + 1 + 8 + 8;

}  // namespace

std::vector<std::uint8_t> BloomFilter::compress() const {
  std::vector<std::uint8_t> out;
  put_u64(out, m_);
  out.push_back(static_cast<std::uint8_t>(k_));
  put_u64(out, hash_seed_);
  put_u64(out, 0);  // payload length backpatched below

  AdaptiveBitModel model;
  BitEncoder enc(out);
  for (std::uint64_t i = 0; i < m_; ++i) {
    int bit = test_bit(i) ? 1 : 0;
    enc.encode(bit, model.prob_one());
    model.update(bit);
  }
  enc.flush();
  std::uint64_t payload = out.size() - kHeaderSize;
  for (int i = 0; i < 8; ++i)
    out[17 + i] = static_cast<std::uint8_t>(payload >> (8 * i));
  return out;
}

BloomFilter BloomFilter::decompress(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize)
    throw std::runtime_error("bloom decompress: short header");
  std::uint64_t m = get_u64(bytes, 0);
  std::uint32_t k = bytes[8];
  std::uint64_t hash_seed = get_u64(bytes, 9);
  std::uint64_t payload = get_u64(bytes, 17);
  if (bytes.size() != kHeaderSize + payload)
    throw std::runtime_error("bloom decompress: payload length mismatch");
  if (m == 0 || k == 0)
    throw std::runtime_error("bloom decompress: invalid parameters");

  BloomFilter bf(m, k, hash_seed);
  AdaptiveBitModel model;
  BitDecoder dec(bytes.subspan(kHeaderSize));
  for (std::uint64_t i = 0; i < m; ++i) {
    int bit = dec.decode(model.prob_one());
    model.update(bit);
    if (bit) bf.set_bit(i);
  }
  return bf;
}

}  // namespace linkex
