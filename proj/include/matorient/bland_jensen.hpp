#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matorient/errors.hpp"
#include "matorient/ff_linalg.hpp"
#include "matorient/matroid.hpp"
#include "matorient/subsets.hpp"

namespace matorient {

/// One unknown of the circuit/cocircuit sign systems: an a-variable a_{e,X}
/// for an element e of circuit X, or a b-variable b_{e,Y} for a cocircuit Y.
struct SystemVariable {
  enum class Kind : uint8_t { a, b };
  Kind kind;
  int element;
  uint32_t set_index;  // circuit index for a, cocircuit index for b
};

/// Canonical variable enumeration shared by the linear and polynomial systems:
/// a-variables ordered by (circuit index, element), then b-variables by
/// (cocircuit index, element).
struct VariableTable {
  std::vector<SetMask> circuits;
  std::vector<SetMask> cocircuits;
  std::vector<uint32_t> a_start;
  std::vector<uint32_t> b_start;
  uint32_t num_vars = 0;

  uint32_t index_a(uint32_t ci, int e) const { return a_start[ci] + static_cast<uint32_t>(popcount(circuits[ci] & (bit(e) - 1))); }
  uint32_t index_b(uint32_t cj, int e) const { return b_start[cj] + static_cast<uint32_t>(popcount(cocircuits[cj] & (bit(e) - 1))); }

  size_t num_a_vars() const { return b_start.empty() ? num_vars : b_start.front(); }

  SystemVariable var(VarId v) const {
    if (v >= num_vars) fail(ErrorCode::IndexOutOfRange, "variable " + std::to_string(v));
    uint32_t na = b_start.empty() ? num_vars : b_start.front();
    if (v < na) {
      size_t ci = static_cast<size_t>(std::upper_bound(a_start.begin(), a_start.end(), v) - a_start.begin()) - 1;
      auto elems = elements_of(circuits[ci]);
      return {SystemVariable::Kind::a, elems[v - a_start[ci]], static_cast<uint32_t>(ci)};
    }
    size_t cj = static_cast<size_t>(std::upper_bound(b_start.begin(), b_start.end(), v) - b_start.begin()) - 1;
    auto elems = elements_of(cocircuits[cj]);
    return {SystemVariable::Kind::b, elems[v - b_start[cj]], static_cast<uint32_t>(cj)};
  }
};

inline VariableTable make_variable_table(const CircuitSystem& cs) {
  VariableTable t;
  t.circuits = cs.circuits;
  t.cocircuits = cs.cocircuits;
  uint32_t next = 0;
  t.a_start.reserve(cs.circuits.size());
  for (SetMask x : cs.circuits) {
    t.a_start.push_back(next);
    next += static_cast<uint32_t>(popcount(x));
  }
  t.b_start.reserve(cs.cocircuits.size());
  for (SetMask y : cs.cocircuits) {
    t.b_start.push_back(next);
    next += static_cast<uint32_t>(popcount(y));
  }
  t.num_vars = next;
  return t;
}

/// The Bland-Jensen system of a matroid: over F_2, one parity equation
///   a_{e,X} + b_{e,Y} + a_{f,X} + b_{f,Y} = 1
/// per circuit/cocircuit pair with X meet Y = {e,f}. Feasible over F_2 exactly
/// when the matroid is weakly orientable.
struct BlandJensenSystem {
  CircuitSystem cs;
  VariableTable table;
  SparseBitMatrix matrix;  // 4 ones per row
  std::vector<std::pair<uint32_t, uint32_t>> row_pairs;  // (circuit, cocircuit)

  size_t num_rows() const { return matrix.rows; }
  size_t num_vars() const { return table.num_vars; }
  std::vector<uint8_t> rhs() const { return std::vector<uint8_t>(matrix.rows, 1); }
  PrimeFieldMatrix dense_matrix() const { return matrix.to_dense(); }
};

inline BlandJensenSystem build_bland_jensen(const CircuitSystem& cs) {
  BlandJensenSystem sys;
  sys.cs = cs;
  sys.table = make_variable_table(cs);
  sys.matrix.cols = sys.table.num_vars;
  for (uint32_t i = 0; i < cs.circuits.size(); ++i) {
    for (uint32_t j = 0; j < cs.cocircuits.size(); ++j) {
      SetMask common = cs.circuits[i] & cs.cocircuits[j];
      if (popcount(common) != 2) continue;
      int e = std::countr_zero(common);
      int f = std::countr_zero(common & (common - 1));
      std::vector<uint32_t> cols = {sys.table.index_a(i, e), sys.table.index_a(i, f), sys.table.index_b(j, e), sys.table.index_b(j, f)};
      std::sort(cols.begin(), cols.end());
      sys.matrix.row_cols.push_back(std::move(cols));
      sys.row_pairs.push_back({i, j});
    }
  }
  sys.matrix.rows = sys.matrix.row_cols.size();
  return sys;
}

inline BlandJensenSystem build_bland_jensen(const Matroid& m) { return build_bland_jensen(circuit_system(m)); }

// -- certificates -------------------------------------------------------------

/// Infeasibility witness for A x = b: y with y^T A = 0 and y^T b = 1.
struct FredholmCertificate {
  std::vector<uint8_t> y;
};

/// Odd-cardinality list of circuit/cocircuit pairs (with multiplicity)
/// witnessing non-weak-orientability: every pair meets in exactly two
/// elements and every (set, element) incidence is covered an even number of
/// times.
struct OddListCertificate {
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
};

/// All weak orientations, as the affine family particular + span(nullspace)
/// of F_2 assignments to the system variables.
struct WeakOrientationFamily {
  std::vector<uint8_t> particular;
  std::vector<std::vector<uint8_t>> nullspace_basis;
};

inline bool verify_odd_list(const CircuitSystem& cs, const OddListCertificate& cert) {
  if (cert.pairs.size() % 2 == 0) return false;
  std::map<std::pair<uint32_t, int>, size_t> a_count, b_count;
  for (auto [ci, cj] : cert.pairs) {
    if (ci >= cs.circuits.size() || cj >= cs.cocircuits.size())
      fail(ErrorCode::IndexOutOfRange, "pair (" + std::to_string(ci) + "," + std::to_string(cj) + ")");
    SetMask common = cs.circuits[ci] & cs.cocircuits[cj];
    if (popcount(common) != 2) return false;
    for (int e : elements_of(common)) {
      ++a_count[{ci, e}];
      ++b_count[{cj, e}];
    }
  }
  for (auto& [k, c] : a_count)
    if (c % 2) return false;
  for (auto& [k, c] : b_count)
    if (c % 2) return false;
  return true;
}

inline bool verify_odd_list(const Matroid& m, const OddListCertificate& cert) { return verify_odd_list(circuit_system(m), cert); }

/// Reads the support of a Fredholm vector for the Bland-Jensen system as an
/// odd list of circuit/cocircuit pairs.
inline OddListCertificate odd_list_certificate(const BlandJensenSystem& sys, const std::vector<uint8_t>& y) {
  if (y.size() != sys.num_rows()) fail(ErrorCode::InvalidFredholmVector, "length " + std::to_string(y.size()) + " vs rows " + std::to_string(sys.num_rows()));
  std::vector<unsigned> colpar(sys.num_vars(), 0);
  unsigned bdot = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] & 1)) continue;
    for (uint32_t c : sys.matrix.row_cols[i]) colpar[c] ^= 1;
    bdot ^= 1;
  }
  for (unsigned v : colpar)
    if (v) fail(ErrorCode::InvalidFredholmVector, "y^T A != 0");
  if (bdot != 1) fail(ErrorCode::InvalidFredholmVector, "y^T b != 1");
  OddListCertificate cert;
  for (size_t i = 0; i < y.size(); ++i)
    if (y[i] & 1) cert.pairs.push_back(sys.row_pairs[i]);
  if (!verify_odd_list(sys.cs, cert)) fail(ErrorCode::InternalError, "extracted odd list failed verification");
  return cert;
}

/// The Fredholm vector of an odd list: 1 on the rows named by the list.
inline FredholmCertificate fredholm_from_odd_list(const BlandJensenSystem& sys, const OddListCertificate& cert) {
  std::map<std::pair<uint32_t, uint32_t>, size_t> row_of;
  for (size_t i = 0; i < sys.row_pairs.size(); ++i) row_of[sys.row_pairs[i]] = i;
  FredholmCertificate fc;
  fc.y.assign(sys.num_rows(), 0);
  for (auto& pr : cert.pairs) {
    auto it = row_of.find(pr);
    if (it == row_of.end()) fail(ErrorCode::IndexOutOfRange, "pair not a system row");
    fc.y[it->second] ^= 1;
  }
  return fc;
}

/// Turns a solution of the Bland-Jensen system into a sigma mapping
/// (0 -> '+', 1 -> '-') and checks orthogonality on every pair meeting in two
/// elements.
inline SigmaMapping sigma_from_solution(const BlandJensenSystem& sys, const CircuitSystem& cs, const std::vector<uint8_t>& x) {
  if (x.size() != sys.num_vars()) fail(ErrorCode::NotASolution, "assignment length mismatch");
  for (size_t i = 0; i < sys.num_rows(); ++i) {
    unsigned par = 0;
    for (uint32_t c : sys.matrix.row_cols[i]) par ^= (x[c] & 1);
    if (par != 1) fail(ErrorCode::NotASolution, "row " + std::to_string(i) + " unsatisfied");
  }
  SigmaMapping sm;
  sm.system = &cs;
  sm.circuit_signs.resize(cs.circuits.size());
  for (uint32_t ci = 0; ci < cs.circuits.size(); ++ci) {
    auto elems = elements_of(cs.circuits[ci]);
    for (size_t k = 0; k < elems.size(); ++k) sm.circuit_signs[ci].push_back((x[sys.table.index_a(ci, elems[k])] & 1) ? -1 : 1);
  }
  sm.cocircuit_signs.resize(cs.cocircuits.size());
  for (uint32_t cj = 0; cj < cs.cocircuits.size(); ++cj) {
    auto elems = elements_of(cs.cocircuits[cj]);
    for (size_t k = 0; k < elems.size(); ++k) sm.cocircuit_signs[cj].push_back((x[sys.table.index_b(cj, elems[k])] & 1) ? -1 : 1);
  }
  for (uint32_t ci = 0; ci < cs.circuits.size(); ++ci)
    for (uint32_t cj = 0; cj < cs.cocircuits.size(); ++cj)
      if (popcount(cs.circuits[ci] & cs.cocircuits[cj]) == 2 && !sigma_pair_orthogonal(sm, ci, cj))
        fail(ErrorCode::InternalError, "solution produced a non-orthogonal pair");
  return sm;
}

// -- the decision -------------------------------------------------------------

struct WeakOrientabilityResult {
  bool weakly_orientable = false;
  BlandJensenSystem system;
  std::optional<WeakOrientationFamily> family;       // if weakly orientable
  std::optional<FredholmCertificate> fredholm;       // if not
  std::optional<OddListCertificate> odd_list;        // if not
};

struct WeakOrientOptions {
  size_t solver_max_bytes = size_t{2} << 30;
};

inline WeakOrientabilityResult is_weakly_orientable(const CircuitSystem& cs, const WeakOrientOptions& opts = {}) {
  WeakOrientabilityResult res;
  res.system = build_bland_jensen(cs);
  SolveOutcome out = solve_f2_sparse(res.system.matrix, res.system.rhs(), opts.solver_max_bytes);
  if (out.feasible) {
    res.weakly_orientable = true;
    res.family = WeakOrientationFamily{std::move(out.particular), std::move(out.nullspace_basis)};
    sigma_from_solution(res.system, res.system.cs, res.family->particular);
  } else {
    res.weakly_orientable = false;
    res.fredholm = FredholmCertificate{std::move(out.certificate)};
    res.odd_list = odd_list_certificate(res.system, res.fredholm->y);
  }
  return res;
}

inline WeakOrientabilityResult is_weakly_orientable(const Matroid& m, const WeakOrientOptions& opts = {}) {
  return is_weakly_orientable(circuit_system(m), opts);
}

// -- infeasible four-point pattern ---------------------------------------------

/// Witness of the sufficient non-weak-orientability pattern on a four-element
/// set F: a circuit through the distinguished 3-subset A4 of F, circuits
/// through the 2-subsets B_j of F not inside A4, and cocircuits through the
/// other three 3-subsets A_i, with the intersection conditions
///   C*_{A_i} meet C_{B_j} = B_j   (whenever B_j is a subset of A_i)
///   C*_{A_i} meet C_{A_4} = A_i meet A_4.
/// The nine pairs involved form an odd list, so a witness proves the matroid
/// non-weakly-orientable.
struct PatternWitness {
  SetMask f_set = 0;
  SetMask a4 = 0;
  uint32_t circuit_a4 = 0;                // circuit index
  std::array<uint32_t, 3> circuit_b{};    // circuit indices, B_j in lex order
  std::array<uint32_t, 3> cocircuit_a{};  // cocircuit indices, A_i in lex order
  std::array<SetMask, 3> b_sets{};
  std::array<SetMask, 3> a_sets{};
};

inline bool pattern_witness_valid(const CircuitSystem& cs, const PatternWitness& w) {
  if (popcount(w.f_set) != 4 || popcount(w.a4) != 3 || (w.a4 & ~w.f_set)) return false;
  SetMask ca4 = cs.circuits.at(w.circuit_a4);
  if ((w.a4 & ~ca4)) return false;
  for (int i = 0; i < 3; ++i) {
    SetMask ai = w.a_sets[i];
    SetMask coc = cs.cocircuits.at(w.cocircuit_a[i]);
    if ((ai & ~coc)) return false;
    if ((coc & ca4) != (ai & w.a4)) return false;  // condition (ii)
    for (int j = 0; j < 3; ++j) {
      SetMask bj = w.b_sets[j];
      if ((bj & ~ai)) continue;  // condition (i) applies only when B_j inside A_i
      SetMask cb = cs.circuits.at(w.circuit_b[j]);
      if ((bj & ~cb)) return false;
      if ((coc & cb) != bj) return false;
    }
  }
  return true;
}

/// The odd list induced by a pattern witness: nine pairs.
inline OddListCertificate pattern_odd_list(const PatternWitness& w) {
  OddListCertificate cert;
  for (int i = 0; i < 3; ++i) {
    cert.pairs.push_back({w.circuit_a4, w.cocircuit_a[i]});
    for (int j = 0; j < 3; ++j)
      if (!(w.b_sets[j] & ~w.a_sets[i])) cert.pairs.push_back({w.circuit_b[j], w.cocircuit_a[i]});
  }
  return cert;
}

/// Exhaustive search for a pattern witness in canonical order: F ascending
/// (lexicographic), A4 ascending among the 3-subsets of F, candidate circuits
/// and cocircuits in list order. Returns the first witness, if any. This is a
/// diagnostic with exponential worst case; the decision procedure is the
/// linear system.
inline std::optional<PatternWitness> syst1_witness(const CircuitSystem& cs) {
  std::vector<SetMask> fs;
  for (SetMask f : all_subsets_of_size(cs.n, 4)) fs.push_back(f);
  std::sort(fs.begin(), fs.end(), lex_less);
  for (SetMask f : fs) {
    std::vector<SetMask> triples = all_subsets_of_size(4, 3);  // within f, via element mapping
    auto felems = elements_of(f);
    auto expand = [&](SetMask local) {
      SetMask out = 0;
      for (int k = 0; k < 4; ++k)
        if (contains(local, k)) out |= bit(felems[k]);
      return out;
    };
    std::vector<SetMask> a4cands;
    for (SetMask t : triples) a4cands.push_back(expand(t));
    std::sort(a4cands.begin(), a4cands.end(), lex_less);
    for (SetMask a4 : a4cands) {
      int w_elem = std::countr_zero(f & ~a4);
      PatternWitness w;
      w.f_set = f;
      w.a4 = a4;
      // A_i: the other three 3-subsets (each contains w_elem); B_j = {w, u}.
      std::vector<SetMask> asets, bsets;
      for (int u : elements_of(a4)) {
        asets.push_back(f & ~bit(u));
        bsets.push_back(bit(w_elem) | bit(u));
      }
      std::sort(asets.begin(), asets.end(), lex_less);
      std::sort(bsets.begin(), bsets.end(), lex_less);
      for (int i = 0; i < 3; ++i) {
        w.a_sets[i] = asets[i];
        w.b_sets[i] = bsets[i];
      }
      // Candidate lists (indices in canonical list order).
      std::vector<uint32_t> ca4s;
      for (uint32_t i = 0; i < cs.circuits.size(); ++i)
        if (!(a4 & ~cs.circuits[i])) ca4s.push_back(i);
      std::array<std::vector<uint32_t>, 3> cbs, cocs;
      bool viable = !ca4s.empty();
      for (int j = 0; j < 3 && viable; ++j) {
        for (uint32_t i = 0; i < cs.circuits.size(); ++i)
          if (!(w.b_sets[j] & ~cs.circuits[i])) cbs[j].push_back(i);
        viable = !cbs[j].empty();
      }
      for (int i = 0; i < 3 && viable; ++i) {
        for (uint32_t j = 0; j < cs.cocircuits.size(); ++j)
          if (!(w.a_sets[i] & ~cs.cocircuits[j])) cocs[i].push_back(j);
        viable = !cocs[i].empty();
      }
      if (!viable) continue;
      // Condition (ii) couples each cocircuit with C_{A4} alone, and
      // condition (i) couples each C_{B_j} with the two cocircuits whose A_i
      // contains B_j; the C_{B_j} choices are independent of each other.
      for (uint32_t ca4 : ca4s) {
        w.circuit_a4 = ca4;
        SetMask ca4mask = cs.circuits[ca4];
        std::array<std::vector<uint32_t>, 3> coc_ok;
        bool any = true;
        for (int i = 0; i < 3 && any; ++i) {
          for (uint32_t c : cocs[i])
            if ((cs.cocircuits[c] & ca4mask) == (w.a_sets[i] & a4)) coc_ok[i].push_back(c);
          any = !coc_ok[i].empty();
        }
        if (!any) continue;
        for (uint32_t c0 : coc_ok[0]) {
          w.cocircuit_a[0] = c0;
          for (uint32_t c1 : coc_ok[1]) {
            w.cocircuit_a[1] = c1;
            for (uint32_t c2 : coc_ok[2]) {
              w.cocircuit_a[2] = c2;
              bool all = true;
              for (int j = 0; j < 3 && all; ++j) {
                bool found = false;
                for (uint32_t b : cbs[j]) {
                  bool ok = true;
                  for (int i = 0; i < 3 && ok; ++i) {
                    if (w.b_sets[j] & ~w.a_sets[i]) continue;
                    ok = (cs.cocircuits[w.cocircuit_a[i]] & cs.circuits[b]) == w.b_sets[j];
                  }
                  if (ok) {
                    w.circuit_b[j] = b;
                    found = true;
                    break;
                  }
                }
                all = found;
              }
              if (all) {
                if (!pattern_witness_valid(cs, w)) fail(ErrorCode::InternalError, "pattern search produced an invalid witness");
                if (!verify_odd_list(cs, pattern_odd_list(w)))
                  fail(ErrorCode::InternalError, "pattern witness odd list failed verification");
                return w;
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

inline std::optional<PatternWitness> syst1_witness(const Matroid& m) { return syst1_witness(circuit_system(m)); }

}  // namespace matorient
