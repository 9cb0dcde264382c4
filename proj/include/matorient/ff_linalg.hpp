#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matorient/errors.hpp"

namespace matorient {

inline bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline uint32_t mod_pow(uint32_t base, uint32_t exp, uint32_t p) {
  uint64_t r = 1, b = base % p;
  while (exp) {
    if (exp & 1) r = r * b % p;
    b = b * b % p;
    exp >>= 1;
  }
  return static_cast<uint32_t>(r);
}

inline uint32_t mod_inverse(uint32_t a, uint32_t p) { return mod_pow(a, p - 2, p); }

/// Dense matrix over F_p with entries reduced to [0, p). Desk scale: p < 256.
struct PrimeFieldMatrix {
  uint32_t p = 2;
  size_t rows = 0;
  size_t cols = 0;
  std::vector<uint8_t> entries;  // row-major

  PrimeFieldMatrix() = default;
  PrimeFieldMatrix(uint32_t p_, size_t rows_, size_t cols_) : p(p_), rows(rows_), cols(cols_), entries(rows_ * cols_, 0) {
    if (!is_prime(p)) fail(ErrorCode::NonPrimeModulus, "p=" + std::to_string(p));
    if (p > 255) fail(ErrorCode::UnsupportedModulus, "p=" + std::to_string(p) + " exceeds the 8-bit entry storage");
  }

  uint8_t& at(size_t i, size_t j) { return entries[i * cols + j]; }
  uint8_t at(size_t i, size_t j) const { return entries[i * cols + j]; }

  std::vector<uint8_t> mul(const std::vector<uint8_t>& x) const {
    if (x.size() != cols) fail(ErrorCode::DimensionMismatch, "vector length " + std::to_string(x.size()) + " vs cols " + std::to_string(cols));
    std::vector<uint8_t> out(rows, 0);
    for (size_t i = 0; i < rows; ++i) {
      uint64_t acc = 0;
      const uint8_t* row = entries.data() + i * cols;
      for (size_t j = 0; j < cols; ++j) acc += uint64_t(row[j]) * x[j];
      out[i] = static_cast<uint8_t>(acc % p);
    }
    return out;
  }

  std::vector<uint8_t> mul_transpose(const std::vector<uint8_t>& y) const {
    if (y.size() != rows) fail(ErrorCode::DimensionMismatch, "vector length " + std::to_string(y.size()) + " vs rows " + std::to_string(rows));
    std::vector<uint64_t> acc(cols, 0);
    for (size_t i = 0; i < rows; ++i) {
      if (!y[i]) continue;
      const uint8_t* row = entries.data() + i * cols;
      for (size_t j = 0; j < cols; ++j) acc[j] += uint64_t(y[i]) * row[j];
    }
    std::vector<uint8_t> out(cols, 0);
    for (size_t j = 0; j < cols; ++j) out[j] = static_cast<uint8_t>(acc[j] % p);
    return out;
  }
};

/// Row-sparse 0/1 matrix over F_2; rows hold sorted column indices. Used for
/// the large parity systems whose rows have constant weight.
struct SparseBitMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<std::vector<uint32_t>> row_cols;

  PrimeFieldMatrix to_dense() const {
    PrimeFieldMatrix m(2, rows, cols);
    for (size_t i = 0; i < rows; ++i)
      for (uint32_t c : row_cols[i]) m.at(i, c) = 1;
    return m;
  }
};

/// Result of an exact solve. Exactly one variant:
///  - feasible: a particular solution plus a basis of the null space (so the
///    full solution set is particular + span of the basis), or
///  - infeasible: a Fredholm certificate y with y^T A = 0 and y^T b = 1.
/// Both variants are re-verified before being returned.
struct SolveOutcome {
  bool feasible = false;
  std::vector<uint8_t> particular;
  std::vector<std::vector<uint8_t>> nullspace_basis;
  std::vector<uint8_t> certificate;
};

namespace detail {

// ---- packed GF(2) elimination ----------------------------------------------

struct PackedMatrix {
  size_t rows = 0;
  size_t cols = 0;  // logical columns
  size_t words = 0;
  std::vector<uint64_t> w;

  PackedMatrix(size_t r, size_t c) : rows(r), cols(c), words((c + 63) / 64), w(r * ((c + 63) / 64), 0) {}
  uint64_t* row(size_t i) { return w.data() + i * words; }
  const uint64_t* row(size_t i) const { return w.data() + i * words; }
  void set(size_t i, size_t j) { row(i)[j >> 6] |= uint64_t{1} << (j & 63); }
  bool get(size_t i, size_t j) const { return (row(i)[j >> 6] >> (j & 63)) & 1; }
  void xor_rows(size_t dst, size_t src) {
    uint64_t* d = row(dst);
    const uint64_t* s = row(src);
    for (size_t k = 0; k < words; ++k) d[k] ^= s[k];
  }
  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    uint64_t* pa = row(a);
    uint64_t* pb = row(b);
    for (size_t k = 0; k < words; ++k) std::swap(pa[k], pb[k]);
  }
  bool row_zero(size_t i) const {
    const uint64_t* r = row(i);
    for (size_t k = 0; k < words; ++k)
      if (r[k]) return false;
    return true;
  }
};

// In-place RREF; returns pivot columns in order. Pivot choice: first row with
// a nonzero entry in column order.
inline std::vector<size_t> rref_packed(PackedMatrix& m) {
  std::vector<size_t> pivots;
  size_t rank = 0;
  for (size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    size_t sel = rank;
    while (sel < m.rows && !m.get(sel, col)) ++sel;
    if (sel == m.rows) continue;
    m.swap_rows(rank, sel);
    for (size_t i = 0; i < m.rows; ++i)
      if (i != rank && m.get(i, col)) m.xor_rows(i, rank);
    pivots.push_back(col);
    ++rank;
  }
  return pivots;
}

// ---- generic F_p elimination ------------------------------------------------

// dst += k * src (mod p), entries already reduced. Specialized for the small
// primes the batch paths hammer on; the byte loops auto-vectorize.
inline void row_axpy(uint8_t* dst, const uint8_t* src, size_t len, uint32_t k, uint32_t p) {
  if (p == 2) {
    for (size_t j = 0; j < len; ++j) dst[j] ^= src[j];
    return;
  }
  if (p == 3) {
    if (k == 1) {
      for (size_t j = 0; j < len; ++j) {
        uint8_t t = static_cast<uint8_t>(dst[j] + src[j]);
        dst[j] = t >= 3 ? static_cast<uint8_t>(t - 3) : t;
      }
    } else {  // k == 2
      for (size_t j = 0; j < len; ++j) {
        uint8_t t = static_cast<uint8_t>(dst[j] + src[j]);
        t = t >= 3 ? static_cast<uint8_t>(t - 3) : t;
        t = static_cast<uint8_t>(t + src[j]);
        dst[j] = t >= 3 ? static_cast<uint8_t>(t - 3) : t;
      }
    }
    return;
  }
  for (size_t j = 0; j < len; ++j) dst[j] = static_cast<uint8_t>((dst[j] + k * src[j]) % p);
}

inline std::vector<size_t> rref_generic(PrimeFieldMatrix& m) {
  const uint32_t p = m.p;
  std::vector<size_t> pivots;
  size_t rank = 0;
  for (size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    size_t sel = rank;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != rank)
      for (size_t j = 0; j < m.cols; ++j) std::swap(m.at(rank, j), m.at(sel, j));
    uint32_t inv = mod_inverse(m.at(rank, col), p);
    if (inv != 1)
      for (size_t j = 0; j < m.cols; ++j) m.at(rank, j) = static_cast<uint8_t>(m.at(rank, j) * inv % p);
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == rank) continue;
      uint32_t f = m.at(i, col);
      if (!f) continue;
      row_axpy(m.entries.data() + i * m.cols, m.entries.data() + rank * m.cols, m.cols, p - f, p);
    }
    pivots.push_back(col);
    ++rank;
  }
  return pivots;
}

}  // namespace detail

inline PrimeFieldMatrix rref(const PrimeFieldMatrix& a) {
  PrimeFieldMatrix m = a;
  detail::rref_generic(m);
  return m;
}

inline size_t rank(const PrimeFieldMatrix& a) {
  PrimeFieldMatrix m = a;
  return detail::rref_generic(m).size();
}

inline size_t nullspace_dimension(const PrimeFieldMatrix& a) { return a.cols - rank(a); }

enum class SolvePath { automatic, packed, generic };

namespace detail {

// Shared RREF post-processing: read off a particular solution and a null-space
// basis, or detect an inconsistent 0 = 1 row.
struct EliminationReadout {
  bool consistent = true;
  std::vector<uint8_t> particular;
  std::vector<std::vector<uint8_t>> nullspace_basis;
};

inline EliminationReadout readout_packed(const PackedMatrix& m, const std::vector<size_t>& pivots, size_t cols) {
  // m is the RREF of [A | b] with b at logical column `cols`.
  EliminationReadout out;
  for (size_t k = 0; k < pivots.size(); ++k)
    if (pivots[k] == cols) {
      out.consistent = false;
      return out;
    }
  out.particular.assign(cols, 0);
  std::vector<long> pivot_of_col(cols, -1);
  for (size_t k = 0; k < pivots.size(); ++k) pivot_of_col[pivots[k]] = static_cast<long>(k);
  for (size_t k = 0; k < pivots.size(); ++k) out.particular[pivots[k]] = m.get(k, cols) ? 1 : 0;
  for (size_t f = 0; f < cols; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<uint8_t> v(cols, 0);
    v[f] = 1;
    for (size_t k = 0; k < pivots.size(); ++k)
      if (m.get(k, f)) v[pivots[k]] = 1;
    out.nullspace_basis.push_back(std::move(v));
  }
  return out;
}

inline EliminationReadout readout_generic(const PrimeFieldMatrix& m, const std::vector<size_t>& pivots, size_t cols) {
  EliminationReadout out;
  const uint32_t p = m.p;
  for (size_t k = 0; k < pivots.size(); ++k)
    if (pivots[k] == cols) {
      out.consistent = false;
      return out;
    }
  out.particular.assign(cols, 0);
  std::vector<long> pivot_of_col(cols, -1);
  for (size_t k = 0; k < pivots.size(); ++k) pivot_of_col[pivots[k]] = static_cast<long>(k);
  for (size_t k = 0; k < pivots.size(); ++k) out.particular[pivots[k]] = m.at(k, cols);
  for (size_t f = 0; f < cols; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<uint8_t> v(cols, 0);
    v[f] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) {
      uint32_t coeff = m.at(k, f);
      if (coeff) v[pivots[k]] = static_cast<uint8_t>((p - coeff) % p);
    }
    out.nullspace_basis.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

// Forward declaration: certificate extraction solves the transposed system.
inline SolveOutcome solve(const PrimeFieldMatrix& a, const std::vector<uint8_t>& b, SolvePath path = SolvePath::automatic);

namespace detail {

inline std::vector<uint8_t> fredholm_certificate(const PrimeFieldMatrix& a, const std::vector<uint8_t>& b, SolvePath path) {
  // y with y^T A = 0 and y^T b = 1, found by solving the transposed
  // homogeneous system augmented with the normalization row.
  PrimeFieldMatrix t(a.p, a.cols + 1, a.rows);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  for (size_t i = 0; i < a.rows; ++i) t.at(a.cols, i) = b[i];
  std::vector<uint8_t> rhs(a.cols + 1, 0);
  rhs[a.cols] = 1;
  SolveOutcome inner = solve(t, rhs, path);
  if (!inner.feasible) fail(ErrorCode::InternalError, "transposed certificate system unexpectedly infeasible");
  return inner.particular;
}

inline void verify_outcome(const PrimeFieldMatrix& a, const std::vector<uint8_t>& b, const SolveOutcome& out) {
  const uint32_t p = a.p;
  if (out.feasible) {
    if (a.mul(out.particular) != b) fail(ErrorCode::InternalError, "solve self-check failed: A x != b");
    std::vector<uint8_t> zero(a.rows, 0);
    for (const auto& v : out.nullspace_basis)
      if (a.mul(v) != zero) fail(ErrorCode::InternalError, "solve self-check failed: A v != 0 for null-space vector");
  } else {
    std::vector<uint8_t> yta = a.mul_transpose(out.certificate);
    for (uint8_t v : yta)
      if (v) fail(ErrorCode::InternalError, "solve self-check failed: y^T A != 0");
    uint64_t dot = 0;
    for (size_t i = 0; i < a.rows; ++i) dot += uint64_t(out.certificate[i]) * b[i];
    if (dot % p != 1) fail(ErrorCode::InternalError, "solve self-check failed: y^T b != 1");
  }
}

}  // namespace detail

/// Exact solve of A x = b over F_p. Returns either a particular solution with
/// a null-space basis or a Fredholm infeasibility certificate; the returned
/// evidence is checked by direct multiplication before the call returns.
inline SolveOutcome solve(const PrimeFieldMatrix& a, const std::vector<uint8_t>& b, SolvePath path) {
  if (b.size() != a.rows) fail(ErrorCode::DimensionMismatch, "rhs length " + std::to_string(b.size()) + " vs rows " + std::to_string(a.rows));
  if (!is_prime(a.p)) fail(ErrorCode::NonPrimeModulus, "p=" + std::to_string(a.p));
  bool use_packed = (path == SolvePath::packed) || (path == SolvePath::automatic && a.p == 2);
  if (use_packed && a.p != 2) fail(ErrorCode::UnsupportedModulus, "packed path is F_2 only");

  SolveOutcome out;
  detail::EliminationReadout ro;
  if (use_packed) {
    detail::PackedMatrix m(a.rows, a.cols + 1);
    for (size_t i = 0; i < a.rows; ++i) {
      for (size_t j = 0; j < a.cols; ++j)
        if (a.at(i, j)) m.set(i, j);
      if (b[i]) m.set(i, a.cols);
    }
    auto pivots = detail::rref_packed(m);
    ro = detail::readout_packed(m, pivots, a.cols);
  } else {
    PrimeFieldMatrix m(a.p, a.rows, a.cols + 1);
    for (size_t i = 0; i < a.rows; ++i) {
      for (size_t j = 0; j < a.cols; ++j) m.at(i, j) = a.at(i, j);
      m.at(i, a.cols) = b[i] % a.p;
    }
    auto pivots = detail::rref_generic(m);
    ro = detail::readout_generic(m, pivots, a.cols);
  }

  if (ro.consistent) {
    out.feasible = true;
    out.particular = std::move(ro.particular);
    out.nullspace_basis = std::move(ro.nullspace_basis);
  } else {
    out.feasible = false;
    out.certificate = detail::fredholm_certificate(a, b, path);
  }
  detail::verify_outcome(a, b, out);
  return out;
}

/// Solve for sparse F_2 systems (constant-weight rows). Equivalent to
/// solve(to_dense(), b) but assembled straight into packed words; `max_bytes`
/// bounds the elimination workspace and fails loudly when exceeded.
inline SolveOutcome solve_f2_sparse(const SparseBitMatrix& a, const std::vector<uint8_t>& b,
                                    size_t max_bytes = size_t{2} << 30) {
  if (b.size() != a.rows) fail(ErrorCode::DimensionMismatch, "rhs length vs rows");
  size_t words = (a.cols + 1 + 63) / 64;
  if (a.rows * words * 8 > max_bytes)
    fail(ErrorCode::SizeOverBudget, "packed elimination needs " + std::to_string(a.rows * words * 8) + " bytes, budget " + std::to_string(max_bytes));

  detail::PackedMatrix m(a.rows, a.cols + 1);
  for (size_t i = 0; i < a.rows; ++i) {
    for (uint32_t c : a.row_cols[i]) m.set(i, c);
    if (b[i]) m.set(i, a.cols);
  }
  auto pivots = detail::rref_packed(m);
  detail::EliminationReadout ro = detail::readout_packed(m, pivots, a.cols);

  SolveOutcome out;
  if (ro.consistent) {
    out.feasible = true;
    out.particular = std::move(ro.particular);
    out.nullspace_basis = std::move(ro.nullspace_basis);
    // Verify against the sparse rows: cheap row-weight passes.
    for (size_t i = 0; i < a.rows; ++i) {
      unsigned par = 0;
      for (uint32_t c : a.row_cols[i]) par ^= out.particular[c];
      if (par != (b[i] & 1)) fail(ErrorCode::InternalError, "sparse solve self-check failed: A x != b");
    }
    for (const auto& v : out.nullspace_basis) {
      for (size_t i = 0; i < a.rows; ++i) {
        unsigned par = 0;
        for (uint32_t c : a.row_cols[i]) par ^= v[c];
        if (par) fail(ErrorCode::InternalError, "sparse solve self-check failed: A v != 0");
      }
    }
  } else {
    // Transposed solve on the sparse transpose, still packed.
    detail::PackedMatrix t(a.cols + 1, a.rows + 1);
    for (size_t i = 0; i < a.rows; ++i) {
      for (uint32_t c : a.row_cols[i]) t.set(c, i);
      if (b[i]) t.set(a.cols, i);
    }
    t.set(a.cols, a.rows);  // normalization: y^T b = 1
    auto tp = detail::rref_packed(t);
    detail::EliminationReadout tro = detail::readout_packed(t, tp, a.rows);
    if (!tro.consistent) fail(ErrorCode::InternalError, "transposed certificate system unexpectedly infeasible");
    out.feasible = false;
    out.certificate = std::move(tro.particular);
    std::vector<unsigned> colpar(a.cols, 0);
    unsigned bdot = 0;
    for (size_t i = 0; i < a.rows; ++i) {
      if (!out.certificate[i]) continue;
      for (uint32_t c : a.row_cols[i]) colpar[c] ^= 1;
      bdot ^= (b[i] & 1);
    }
    for (unsigned v : colpar)
      if (v) fail(ErrorCode::InternalError, "sparse solve self-check failed: y^T A != 0");
    if (bdot != 1) fail(ErrorCode::InternalError, "sparse solve self-check failed: y^T b != 1");
  }
  return out;
}

}  // namespace matorient
