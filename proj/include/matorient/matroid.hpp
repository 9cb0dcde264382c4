#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "matorient/errors.hpp"
#include "matorient/subsets.hpp"

namespace matorient {

/// A matroid given by its bases. Elements are 0..n-1; every basis has
/// cardinality r. Immutable after construction; all operations are pure.
class Matroid {
 public:
  /// Validates cardinality uniformity and the basis-exchange axiom
  /// exhaustively, then constructs. This is the only checked entry point;
  /// derived constructions (duals, minors) are valid by construction.
  static Matroid from_bases(int n, int r, const std::vector<std::vector<int>>& bases) {
    std::vector<SetMask> masks;
    masks.reserve(bases.size());
    for (const auto& b : bases) masks.push_back(mask_of(b, n));
    return from_basis_masks(n, r, std::move(masks));
  }

  static Matroid from_basis_masks(int n, int r, std::vector<SetMask> masks) {
    validate_basis_masks(n, r, masks);
    return unchecked(n, r, std::move(masks));
  }

  /// Construction bypassing validation, for results that are matroids by
  /// construction (dual, minors, enumeration output).
  static Matroid unchecked(int n, int r, std::vector<SetMask> masks) {
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    Matroid m;
    m.n_ = n;
    m.r_ = r;
    m.bases_ = std::move(masks);
    return m;
  }

  static void validate_basis_masks(int n, int r, const std::vector<SetMask>& masks);

  int size() const { return n_; }
  int rank() const { return r_; }
  const std::vector<SetMask>& basis_masks() const { return bases_; }
  size_t num_bases() const { return bases_.size(); }

  bool is_basis(SetMask m) const { return std::binary_search(bases_.begin(), bases_.end(), m); }

  bool operator==(const Matroid& o) const { return n_ == o.n_ && r_ == o.r_ && bases_ == o.bases_; }

  /// Per-mask independence table: indep[S] iff S is contained in some basis.
  std::vector<uint8_t> independence_table() const {
    if (n_ > kMaxGroundSet) fail(ErrorCode::SizeOverBudget, "ground set too large for subset table");
    std::vector<uint8_t> indep(size_t{1} << n_, 0);
    for (SetMask b : bases_) indep[b] = 1;
    // Downward closure: walk masks from the top; S independent => S\{e} is.
    for (SetMask m = full_mask(n_);; --m) {
      if (indep[m]) {
        SetMask s = m;
        while (s) {
          SetMask lo = s & (~s + 1);
          indep[m ^ lo] = 1;
          s ^= lo;
        }
      }
      if (m == 0) break;
    }
    return indep;
  }

  bool is_loop(int e) const {
    check_element(e);
    for (SetMask b : bases_)
      if (contains(b, e)) return false;
    return true;
  }

  bool is_coloop(int e) const {
    check_element(e);
    for (SetMask b : bases_)
      if (!contains(b, e)) return false;
    return true;
  }

 private:
  void check_element(int e) const {
    if (e < 0 || e >= n_) fail(ErrorCode::ElementOutOfRange, "element " + std::to_string(e) + " outside 0.." + std::to_string(n_ - 1));
  }

  int n_ = 0;
  int r_ = 0;
  std::vector<SetMask> bases_;

  friend Matroid dual(const Matroid&);
  friend Matroid delete_element(const Matroid&, int);
  friend Matroid contract_element(const Matroid&, int);
};

inline void Matroid::validate_basis_masks(int n, int r, const std::vector<SetMask>& masks) {
  if (n < 0 || r < 0 || r > n) fail(ErrorCode::ElementOutOfRange, "need n >= r >= 0, got n=" + std::to_string(n) + " r=" + std::to_string(r));
  if (n > kMaxGroundSet) fail(ErrorCode::SizeOverBudget, "ground set larger than " + std::to_string(kMaxGroundSet));
  if (masks.empty()) fail(ErrorCode::EmptyBases, "a matroid has at least one basis");
  for (SetMask b : masks) {
    if (b & ~full_mask(n)) fail(ErrorCode::ElementOutOfRange, "basis " + set_to_string(b) + " uses elements outside 0.." + std::to_string(n - 1));
    if (popcount(b) != r)
      fail(ErrorCode::MixedCardinality,
           "basis " + set_to_string(b) + " has cardinality " + std::to_string(popcount(b)) + ", expected " + std::to_string(r));
  }
  // Exchange: for all bases A,B and alpha in A\B there is beta in B\A with
  // (A \ alpha) + beta a basis. Exhaustive over all ordered pairs.
  std::vector<uint8_t> present(size_t{1} << n, 0);
  for (SetMask b : masks) present[b] = 1;
  for (SetMask a : masks) {
    for (SetMask b : masks) {
      if (a == b) continue;
      SetMask adiff = a & ~b;
      for (SetMask s = adiff; s; s &= s - 1) {
        SetMask abit = s & (~s + 1);
        SetMask base = a ^ abit;
        bool ok = false;
        for (SetMask t = b & ~a; t; t &= t - 1) {
          if (present[base | (t & (~t + 1))]) {
            ok = true;
            break;
          }
        }
        if (!ok) {
          int alpha = std::countr_zero(abit);
          fail(ErrorCode::ExchangeViolation,
               "no exchange for A=" + set_to_string(a) + " B=" + set_to_string(b) + " alpha=" + std::to_string(alpha));
        }
      }
    }
  }
}

inline Matroid dual(const Matroid& m) {
  std::vector<SetMask> co;
  co.reserve(m.bases_.size());
  SetMask full = full_mask(m.n_);
  for (SetMask b : m.bases_) co.push_back(full & ~b);
  return Matroid::unchecked(m.n_, m.n_ - m.r_, std::move(co));
}

namespace detail {
// Drop element e and relabel e+1.. down by one.
inline SetMask squeeze_out(SetMask m, int e) {
  SetMask low = m & (bit(e) - 1);
  SetMask high = m & ~((bit(e) << 1) - 1);
  return low | (high >> 1);
}
}  // namespace detail

/// Deletion M \ e. Ground set relabels to 0..n-2 preserving order. Deleting a
/// coloop drops the rank by one.
inline Matroid delete_element(const Matroid& m, int e) {
  if (e < 0 || e >= m.size()) fail(ErrorCode::ElementOutOfRange, "element " + std::to_string(e));
  std::vector<SetMask> nb;
  if (m.is_coloop(e)) {
    for (SetMask b : m.bases_) nb.push_back(detail::squeeze_out(b & ~bit(e), e));
    return Matroid::unchecked(m.n_ - 1, m.r_ - 1, std::move(nb));
  }
  for (SetMask b : m.bases_)
    if (!contains(b, e)) nb.push_back(detail::squeeze_out(b, e));
  return Matroid::unchecked(m.n_ - 1, m.r_, std::move(nb));
}

/// Contraction M / e; contracting a loop is deletion.
inline Matroid contract_element(const Matroid& m, int e) {
  if (e < 0 || e >= m.size()) fail(ErrorCode::ElementOutOfRange, "element " + std::to_string(e));
  if (m.is_loop(e)) return delete_element(m, e);
  std::vector<SetMask> nb;
  for (SetMask b : m.bases_)
    if (contains(b, e)) nb.push_back(detail::squeeze_out(b & ~bit(e), e));
  return Matroid::unchecked(m.n_ - 1, m.r_ - 1, std::move(nb));
}

namespace detail {
// Minimal dependent sets, given the independence table. Sorted lexicographically
// as ascending element lists.
inline std::vector<SetMask> circuits_from_table(int n, const std::vector<uint8_t>& indep) {
  std::vector<SetMask> out;
  const SetMask end = full_mask(n);
  for (SetMask s = 0;; ++s) {
    if (s && !indep[s]) {
      bool minimal = true;
      for (SetMask t = s; t; t &= t - 1) {
        if (!indep[s ^ (t & (~t + 1))]) {
          minimal = false;
          break;
        }
      }
      if (minimal) out.push_back(s);
    }
    if (s == end) break;
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}
}  // namespace detail

inline std::vector<SetMask> circuit_masks(const Matroid& m) {
  return detail::circuits_from_table(m.size(), m.independence_table());
}

inline std::vector<SetMask> cocircuit_masks(const Matroid& m) { return circuit_masks(dual(m)); }

inline std::vector<std::vector<int>> masks_to_sets(const std::vector<SetMask>& ms) {
  std::vector<std::vector<int>> out;
  out.reserve(ms.size());
  for (SetMask m : ms) out.push_back(elements_of(m));
  return out;
}

inline std::vector<std::vector<int>> circuits(const Matroid& m) { return masks_to_sets(circuit_masks(m)); }
inline std::vector<std::vector<int>> cocircuits(const Matroid& m) { return masks_to_sets(cocircuit_masks(m)); }

/// Circuits and cocircuits of a matroid, in canonical (lexicographic) order.
/// Downstream systems index circuits and cocircuits by position in these lists.
struct CircuitSystem {
  int n = 0;
  int r = 0;
  std::vector<SetMask> circuits;
  std::vector<SetMask> cocircuits;

  std::vector<int> circuit_elements(size_t i) const { return elements_of(circuits.at(i)); }
  std::vector<int> cocircuit_elements(size_t j) const { return elements_of(cocircuits.at(j)); }

  long find_circuit(SetMask m) const {
    for (size_t i = 0; i < circuits.size(); ++i)
      if (circuits[i] == m) return static_cast<long>(i);
    return -1;
  }
  long find_cocircuit(SetMask m) const {
    for (size_t j = 0; j < cocircuits.size(); ++j)
      if (cocircuits[j] == m) return static_cast<long>(j);
    return -1;
  }
};

inline CircuitSystem circuit_system(const Matroid& m) {
  CircuitSystem cs;
  cs.n = m.size();
  cs.r = m.rank();
  cs.circuits = circuit_masks(m);
  cs.cocircuits = cocircuit_masks(m);
  return cs;
}

/// Histogram of |X ^ Y| over all circuit/cocircuit pairs.
inline std::map<int, size_t> intersection_profile(const CircuitSystem& cs) {
  std::map<int, size_t> hist;
  for (SetMask x : cs.circuits)
    for (SetMask y : cs.cocircuits) ++hist[popcount(x & y)];
  return hist;
}

inline std::map<int, size_t> intersection_profile(const Matroid& m) { return intersection_profile(circuit_system(m)); }

/// Seymour's criterion: binary iff no circuit/cocircuit pair meets in exactly 3 elements.
inline bool is_binary_by_intersections(const CircuitSystem& cs) {
  for (SetMask x : cs.circuits)
    for (SetMask y : cs.cocircuits)
      if (popcount(x & y) == 3) return false;
  return true;
}

inline bool is_binary_by_intersections(const Matroid& m) { return is_binary_by_intersections(circuit_system(m)); }

/// No loops and no parallel pairs: every subset of size <= 2 is independent.
inline bool is_simple(const Matroid& m) {
  auto indep = m.independence_table();
  for (int e = 0; e < m.size(); ++e)
    if (!indep[bit(e)]) return false;
  for (int e = 0; e < m.size(); ++e)
    for (int f = e + 1; f < m.size(); ++f)
      if (!indep[bit(e) | bit(f)]) return false;
  return true;
}

// -- signed subsets and sigma mappings ---------------------------------------

struct SignedSubset {
  SetMask positive = 0;
  SetMask negative = 0;

  SetMask support() const { return positive | negative; }
  bool valid() const { return (positive & negative) == 0; }
};

/// Are two signed subsets orthogonal: they agree in sign somewhere iff they
/// disagree in sign somewhere.
inline bool orthogonal(const SignedSubset& x, const SignedSubset& y) {
  bool agree = ((x.positive & y.positive) | (x.negative & y.negative)) != 0;
  bool disagree = ((x.positive & y.negative) | (x.negative & y.positive)) != 0;
  return agree == disagree;
}

/// Signs {0,+,-} on (element, circuit) and (element, cocircuit) incidences;
/// zero exactly off the set. Stored as +1/-1 per incidence position.
struct SigmaMapping {
  const CircuitSystem* system = nullptr;
  // sign lists aligned with the sorted element lists of each circuit/cocircuit
  std::vector<std::vector<int8_t>> circuit_signs;
  std::vector<std::vector<int8_t>> cocircuit_signs;

  int sign_on_circuit(int e, size_t ci) const {
    auto elems = elements_of(system->circuits[ci]);
    for (size_t k = 0; k < elems.size(); ++k)
      if (elems[k] == e) return circuit_signs[ci][k];
    return 0;
  }
  int sign_on_cocircuit(int e, size_t cj) const {
    auto elems = elements_of(system->cocircuits[cj]);
    for (size_t k = 0; k < elems.size(); ++k)
      if (elems[k] == e) return cocircuit_signs[cj][k];
    return 0;
  }

  SignedSubset signed_circuit(size_t ci) const {
    SignedSubset z;
    auto elems = elements_of(system->circuits[ci]);
    for (size_t k = 0; k < elems.size(); ++k)
      (circuit_signs[ci][k] > 0 ? z.positive : z.negative) |= bit(elems[k]);
    return z;
  }
  SignedSubset signed_cocircuit(size_t cj) const {
    SignedSubset z;
    auto elems = elements_of(system->cocircuits[cj]);
    for (size_t k = 0; k < elems.size(); ++k)
      (cocircuit_signs[cj][k] > 0 ? z.positive : z.negative) |= bit(elems[k]);
    return z;
  }
};

/// Orthogonality of the signed pair (circuit ci, cocircuit cj) restricted to
/// their intersection, as required of (weak) orientations.
inline bool sigma_pair_orthogonal(const SigmaMapping& sm, size_t ci, size_t cj) {
  const CircuitSystem& cs = *sm.system;
  SetMask common = cs.circuits[ci] & cs.cocircuits[cj];
  bool pos = false, neg = false;
  for (int e : elements_of(common)) {
    int prod = sm.sign_on_circuit(e, ci) * sm.sign_on_cocircuit(e, cj);
    (prod > 0 ? pos : neg) = true;
  }
  return pos == neg;
}

}  // namespace matorient
