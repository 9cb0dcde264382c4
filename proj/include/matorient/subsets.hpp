#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "matorient/errors.hpp"

namespace matorient {

// Ground-set subsets are bitmasks over elements 0..n-1. Desk scale: n <= 25.
using SetMask = uint32_t;

constexpr int kMaxGroundSet = 25;

inline int popcount(SetMask m) { return std::popcount(m); }

inline SetMask bit(int e) { return SetMask{1} << e; }

inline SetMask full_mask(int n) { return n == 32 ? ~SetMask{0} : (SetMask{1} << n) - 1; }

inline bool contains(SetMask s, int e) { return (s >> e) & 1u; }

inline std::vector<int> elements_of(SetMask m) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(popcount(m)));
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

inline SetMask mask_of(const std::vector<int>& elems, int n) {
  SetMask m = 0;
  for (int e : elems) {
    if (e < 0 || e >= n) fail(ErrorCode::ElementOutOfRange, "element " + std::to_string(e) + " outside 0.." + std::to_string(n - 1));
    m |= bit(e);
  }
  return m;
}

inline std::string set_to_string(SetMask m, int base = 0) {
  std::string s = "{";
  bool first = true;
  for (int e : elements_of(m)) {
    if (!first) s += ",";
    s += std::to_string(e + base);
    first = false;
  }
  return s + "}";
}

// Next k-subset mask in colex-increasing numeric order (Gosper's hack).
inline SetMask next_subset_same_size(SetMask v) {
  SetMask c = v & (~v + 1);
  SetMask r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

// All k-subsets of {0..n-1}; masks produced in increasing numeric order.
inline std::vector<SetMask> all_subsets_of_size(int n, int k) {
  std::vector<SetMask> out;
  if (k < 0 || k > n) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  SetMask v = full_mask(k);
  SetMask last = v << (n - k);
  for (;;) {
    out.push_back(v);
    if (v == last) break;
    v = next_subset_same_size(v);
  }
  return out;
}

inline uint64_t binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint64_t r = 1;
  for (uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Lexicographic comparison of subsets written as ascending element lists.
// Note this is not the numeric mask order: {0,5} < {1,2}.
inline bool lex_less(SetMask a, SetMask b) {
  while (a && b) {
    int ea = std::countr_zero(a), eb = std::countr_zero(b);
    if (ea != eb) return ea < eb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

// Orders in which fixed-size subsets are indexed by basis-indicator strings.
//   revlex: S precedes T iff at the largest element where they differ, S has
//           the smaller one (ascending by top element, recursively).
//   lex:    ascending element lists compared from the front.
//   colex:  the reverse of revlex (indicator strings read right-to-left).
enum class SubsetOrder { revlex, lex, colex };

inline bool revlex_less(SetMask a, SetMask b) {
  // Largest differing element decides; numeric mask comparison does exactly that.
  return a < b;
}

inline std::vector<SetMask> subsets_in_order(int n, int k, SubsetOrder order) {
  std::vector<SetMask> s = all_subsets_of_size(n, k);  // already revlex
  switch (order) {
    case SubsetOrder::revlex:
      break;
    case SubsetOrder::lex:
      std::sort(s.begin(), s.end(), lex_less);
      break;
    case SubsetOrder::colex:
      std::reverse(s.begin(), s.end());
      break;
  }
  return s;
}

}  // namespace matorient
