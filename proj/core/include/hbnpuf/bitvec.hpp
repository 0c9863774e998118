// Copyright 2026 The hbnpuf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hbnpuf/errors.hpp"

namespace hbnpuf {

// Fixed-length bit vector used for challenges, network states and masks.
//
// Internal packing: bit i lives in word i/64 at position i%64. Serialized
// packing (bytes()) puts bit 0 at the least significant bit of byte 0,
// ascending, which is the canonical dataset layout. Unused high bits of the
// last word are always zero, so equality and popcount work word-wise.
//
// String rendering puts bit 0 leftmost: the challenge written "001" has
// node 0 = 0, node 1 = 0, node 2 = 1. Lexicographic order of these strings
// equals numeric order of from_index() values.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n_bits) : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

  /// n-bit vector from an integer, most significant bit first:
  /// bit i = (value >> (n-1-i)) & 1. from_index(1, 3) renders as "001".
  static BitVec from_index(std::uint64_t value, std::size_t n_bits) {
    BitVec v(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i) {
      v.set(i, (value >> (n_bits - 1 - i)) & 1u);
    }
    return v;
  }

  static BitVec from_string(std::string_view s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw DataError("BitVec::from_string: expected '0' or '1'");
      v.set(i, s[i] == '1');
    }
    return v;
  }

  static BitVec zeros(std::size_t n_bits) { return BitVec(n_bits); }

  /// Adopts packed words (bit i at word i/64, position i%64); high bits of the
  /// final word beyond n_bits are cleared.
  static BitVec from_words(const std::uint64_t* words, std::size_t n_bits) {
    BitVec v(n_bits);
    for (std::size_t w = 0; w < v.words_.size(); ++w) v.words_[w] = words[w];
    v.trim();
    return v;
  }

  static BitVec ones(std::size_t n_bits) {
    BitVec v(n_bits);
    for (auto& w : v.words_) w = ~std::uint64_t{0};
    v.trim();
    return v;
  }

  std::size_t size() const { return n_bits_; }
  bool empty() const { return n_bits_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  std::size_t popcount() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool all_zero() const {
    for (std::uint64_t w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  bool all_one() const { return popcount() == n_bits_; }

  /// Parity (XOR) of all bits.
  bool parity() const {
    std::uint64_t acc = 0;
    for (std::uint64_t w : words_) acc ^= w;
    return std::popcount(acc) & 1u;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const BitVec& other) const = default;

  std::string to_string() const {
    std::string s(n_bits_, '0');
    for (std::size_t i = 0; i < n_bits_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  /// Canonical byte serialization: bit i -> byte i/8, position i%8.
  std::size_t byte_size() const { return (n_bits_ + 7) / 8; }

  void copy_to_bytes(std::uint8_t* out) const {
    const std::size_t nb = byte_size();
    for (std::size_t b = 0; b < nb; ++b) {
      out[b] = static_cast<std::uint8_t>(words_[b >> 3] >> ((b & 7) * 8));
    }
  }

  static BitVec from_bytes(const std::uint8_t* in, std::size_t n_bits) {
    BitVec v(n_bits);
    const std::size_t nb = v.byte_size();
    for (std::size_t b = 0; b < nb; ++b) {
      v.words_[b >> 3] |= static_cast<std::uint64_t>(in[b]) << ((b & 7) * 8);
    }
    v.trim();
    return v;
  }

  /// Order-sensitive 64-bit content hash (length included).
  std::uint64_t hash64() const {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ n_bits_;
    for (std::uint64_t w : words_) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return h;
  }

 private:
  void trim() {
    if (n_bits_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (~std::uint64_t{0}) >> (64 - n_bits_ % 64);
    }
  }

  std::size_t n_bits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Hamming distance. Lengths must match.
inline std::uint64_t hamming(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size()) throw DataError("hamming: length mismatch");
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    d += static_cast<std::uint64_t>(std::popcount(a.words()[i] ^ b.words()[i]));
  }
  return d;
}

/// Fractional Hamming distance d = D/N in [0, 1].
inline double fractional_hamming(const BitVec& a, const BitVec& b) {
  if (a.empty()) throw DataError("fractional_hamming: empty input");
  return static_cast<double>(hamming(a, b)) / static_cast<double>(a.size());
}

/// Hamming distance restricted to mask positions; kept_out receives the
/// number of mask bits (0 means the distance is reported as 0).
inline double masked_fractional_hamming(const BitVec& a, const BitVec& b, const BitVec& mask,
                                        std::size_t* kept_out = nullptr) {
  if (a.size() != b.size() || a.size() != mask.size()) {
    throw DataError("masked_fractional_hamming: length mismatch");
  }
  std::uint64_t d = 0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    const std::uint64_t m = mask.words()[i];
    d += static_cast<std::uint64_t>(std::popcount((a.words()[i] ^ b.words()[i]) & m));
    kept += static_cast<std::size_t>(std::popcount(m));
  }
  if (kept_out != nullptr) *kept_out = kept;
  if (kept == 0) return 0.0;
  return static_cast<double>(d) / static_cast<double>(kept);
}

}  // namespace hbnpuf
