#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "matorient/bland_jensen.hpp"
#include "matorient/errors.hpp"
#include "matorient/matroid.hpp"
#include "matorient/polynomial.hpp"

namespace matorient {

enum class PolyOrigin : uint8_t { g, h, p, q, h_prime };

inline const char* poly_origin_name(PolyOrigin o) {
  switch (o) {
    case PolyOrigin::g: return "g";
    case PolyOrigin::h: return "h";
    case PolyOrigin::p: return "p";
    case PolyOrigin::q: return "q";
    case PolyOrigin::h_prime: return "h'";
  }
  return "?";
}

struct TaggedPolynomial {
  PolyOrigin origin;
  // g/h/h': (circuit index, cocircuit index); p: (circuit index, element);
  // q: (cocircuit index, element).
  uint32_t idx1 = 0;
  int idx2 = 0;
  Polynomial poly;
};

/// Polynomial system whose solutions over F_p are exactly the orientations
/// (sigma mappings) of the matroid. Shares the canonical variable order of
/// the Bland-Jensen system.
struct OrientabilitySystem {
  uint32_t p = 2;
  CircuitSystem cs;
  VariableTable table;
  std::vector<TaggedPolynomial> polys;

  std::vector<Polynomial> polynomials() const {
    std::vector<Polynomial> out;
    out.reserve(polys.size());
    for (auto& tp : polys) out.push_back(tp.poly);
    return out;
  }
};

namespace detail {

// The linear form a_{e,X} + b_{e,Y} + a_{f,X} + b_{f,Y} + 1 over F_2.
inline Polynomial g_form(const VariableTable& t, uint32_t ci, uint32_t cj, int e, int f) {
  Polynomial g(2);
  g.add_term(Monomial::var(t.index_a(ci, e)), 1);
  g.add_term(Monomial::var(t.index_b(cj, e)), 1);
  g.add_term(Monomial::var(t.index_a(ci, f)), 1);
  g.add_term(Monomial::var(t.index_b(cj, f)), 1);
  g.add_term(Monomial::one(), 1);
  return g;
}

}  // namespace detail

/// Over F_2: one linear g per 2-intersection pair and, per 3-intersection
/// pair, the quadratic h
///   1 + sum of the six variables + all products of two distinct variables
///   except the three diagonal products a_{e,X} b_{e,Y}.
/// Feasible over F_2 exactly when the matroid is orientable.
inline OrientabilitySystem build_orient_f2(const CircuitSystem& cs) {
  OrientabilitySystem sys;
  sys.p = 2;
  sys.cs = cs;
  sys.table = make_variable_table(cs);
  const VariableTable& t = sys.table;
  for (uint32_t i = 0; i < cs.circuits.size(); ++i) {
    for (uint32_t j = 0; j < cs.cocircuits.size(); ++j) {
      SetMask common = cs.circuits[i] & cs.cocircuits[j];
      int c = popcount(common);
      if (c == 2) {
        auto el = elements_of(common);
        sys.polys.push_back({PolyOrigin::g, i, static_cast<int>(j), detail::g_form(t, i, j, el[0], el[1])});
      } else if (c == 3) {
        auto el = elements_of(common);
        Polynomial h(2);
        h.add_term(Monomial::one(), 1);
        std::array<VarId, 6> v;
        for (int k = 0; k < 3; ++k) {
          v[2 * k] = t.index_a(i, el[k]);
          v[2 * k + 1] = t.index_b(j, el[k]);
        }
        for (VarId x : v) h.add_term(Monomial::var(x), 1);
        for (int x = 0; x < 6; ++x)
          for (int y = x + 1; y < 6; ++y) {
            if (y == x + 1 && x % 2 == 0) continue;  // skip diagonal a_{e}b_{e}
            h.add_term(Monomial::var(v[x]).times(Monomial::var(v[y])), 1);
          }
        sys.polys.push_back({PolyOrigin::h, i, static_cast<int>(j), std::move(h)});
      }
    }
  }
  return sys;
}

inline OrientabilitySystem build_orient_f2(const Matroid& m) { return build_orient_f2(circuit_system(m)); }

/// The three pairwise linear factors of an F_2 h-polynomial: for the pair
/// intersection {e,f,g} these are g_{ef}, g_{eg}, g_{gf}. The h polynomial
/// equals their product modulo the field equations x^2 = x.
inline std::array<Polynomial, 3> h_linear_factors(const OrientabilitySystem& sys, const TaggedPolynomial& h) {
  if (h.origin != PolyOrigin::h || sys.p != 2) fail(ErrorCode::ShapeMismatch, "expects an F_2 h-polynomial");
  SetMask common = sys.cs.circuits[h.idx1] & sys.cs.cocircuits[static_cast<uint32_t>(h.idx2)];
  auto el = elements_of(common);
  const VariableTable& t = sys.table;
  uint32_t i = h.idx1, j = static_cast<uint32_t>(h.idx2);
  return {detail::g_form(t, i, j, el[0], el[1]), detail::g_form(t, i, j, el[0], el[2]), detail::g_form(t, i, j, el[2], el[1])};
}

/// Over an odd prime p: squares a^2 - 1 and b^2 - 1 per incidence, one
///   h' = a_{e,X} b_{e,Y} + a_{f,X} b_{f,Y}
/// per 2-intersection pair, and per 3-intersection pair the degree-4
///   h = ab ab + ab ab + ab ab + 1 (cyclic over e,f,g).
/// With `include_h = false`, the 3-intersection h polynomials are dropped;
/// the remaining degree-2 system tracks weak orientability instead.
inline OrientabilitySystem build_orient_fp(const CircuitSystem& cs, uint32_t p, bool include_h = true) {
  if (p == 2) fail(ErrorCode::EvenCharacteristic, "the square/h' system needs an odd prime");
  if (!is_prime(p)) fail(ErrorCode::NonPrimeModulus, "p=" + std::to_string(p));
  OrientabilitySystem sys;
  sys.p = p;
  sys.cs = cs;
  sys.table = make_variable_table(cs);
  const VariableTable& t = sys.table;
  const uint32_t minus1 = p - 1;
  for (uint32_t i = 0; i < cs.circuits.size(); ++i)
    for (int e : elements_of(cs.circuits[i])) {
      Polynomial sq(p);
      sq.add_term(Monomial::var(t.index_a(i, e), 2), 1);
      sq.add_term(Monomial::one(), minus1);
      sys.polys.push_back({PolyOrigin::p, i, e, std::move(sq)});
    }
  for (uint32_t j = 0; j < cs.cocircuits.size(); ++j)
    for (int e : elements_of(cs.cocircuits[j])) {
      Polynomial sq(p);
      sq.add_term(Monomial::var(t.index_b(j, e), 2), 1);
      sq.add_term(Monomial::one(), minus1);
      sys.polys.push_back({PolyOrigin::q, j, e, std::move(sq)});
    }
  auto pair_product = [&](uint32_t i, uint32_t j, int e) {
    return Monomial::var(t.index_a(i, e)).times(Monomial::var(t.index_b(j, e)));
  };
  for (uint32_t i = 0; i < cs.circuits.size(); ++i) {
    for (uint32_t j = 0; j < cs.cocircuits.size(); ++j) {
      SetMask common = cs.circuits[i] & cs.cocircuits[j];
      int c = popcount(common);
      if (c == 2) {
        auto el = elements_of(common);
        Polynomial hp(p);
        hp.add_term(pair_product(i, j, el[0]), 1);
        hp.add_term(pair_product(i, j, el[1]), 1);
        sys.polys.push_back({PolyOrigin::h_prime, i, static_cast<int>(j), std::move(hp)});
      } else if (c == 3 && include_h) {
        auto el = elements_of(common);
        Polynomial h(p);
        h.add_term(pair_product(i, j, el[0]).times(pair_product(i, j, el[1])), 1);
        h.add_term(pair_product(i, j, el[1]).times(pair_product(i, j, el[2])), 1);
        h.add_term(pair_product(i, j, el[2]).times(pair_product(i, j, el[0])), 1);
        h.add_term(Monomial::one(), 1);
        sys.polys.push_back({PolyOrigin::h, i, static_cast<int>(j), std::move(h)});
      }
    }
  }
  return sys;
}

inline OrientabilitySystem build_orient_fp(const Matroid& m, uint32_t p, bool include_h = true) {
  return build_orient_fp(circuit_system(m), p, include_h);
}

/// The condensed odd-prime system: squares retained, and every pair meeting
/// in 2 or 3 elements contributes the single unified
///   h = 1 + sum over {e,f} in the intersection of a_{e,X} b_{e,Y} a_{f,X} b_{f,Y}.
inline OrientabilitySystem build_orient_fp_condensed(const CircuitSystem& cs, uint32_t p) {
  if (p == 2) fail(ErrorCode::EvenCharacteristic, "the condensed system needs an odd prime");
  OrientabilitySystem sys = build_orient_fp(cs, p, false);
  sys.polys.erase(std::remove_if(sys.polys.begin(), sys.polys.end(),
                                 [](const TaggedPolynomial& tp) { return tp.origin == PolyOrigin::h_prime; }),
                  sys.polys.end());
  const VariableTable& t = sys.table;
  auto pair_product = [&](uint32_t i, uint32_t j, int e) {
    return Monomial::var(t.index_a(i, e)).times(Monomial::var(t.index_b(j, e)));
  };
  for (uint32_t i = 0; i < cs.circuits.size(); ++i) {
    for (uint32_t j = 0; j < cs.cocircuits.size(); ++j) {
      SetMask common = cs.circuits[i] & cs.cocircuits[j];
      int c = popcount(common);
      if (c != 2 && c != 3) continue;
      auto el = elements_of(common);
      Polynomial h(p);
      h.add_term(Monomial::one(), 1);
      for (size_t x = 0; x < el.size(); ++x)
        for (size_t y = x + 1; y < el.size(); ++y)
          h.add_term(pair_product(i, j, el[x]).times(pair_product(i, j, el[y])), 1);
      sys.polys.push_back({PolyOrigin::h, i, static_cast<int>(j), std::move(h)});
    }
  }
  return sys;
}

inline OrientabilitySystem build_orient_fp_condensed(const Matroid& m, uint32_t p) {
  return build_orient_fp_condensed(circuit_system(m), p);
}

/// True iff every polynomial vanishes at the (complete) assignment.
inline bool evaluate_system(const OrientabilitySystem& sys, const std::vector<uint8_t>& assignment) {
  if (assignment.size() < sys.table.num_vars) fail(ErrorCode::IncompleteAssignment, "assignment shorter than the variable table");
  for (auto& tp : sys.polys)
    if (tp.poly.evaluate(assignment) != 0) return false;
  return true;
}

// -- variable fixings ----------------------------------------------------------

/// Sign-normalization fixings: per circuit, the a-variable of its smallest
/// element; per cocircuit, the b-variable of its smallest element; and for
/// every element never chosen above, the a-variable of the smallest-index
/// circuit containing it. Fixed variables take the sign '+' (field value 1,
/// F_2 value 0). Fixing preserves feasibility.
inline std::vector<VarId> variable_fixings(const CircuitSystem& cs) {
  VariableTable t = make_variable_table(cs);
  std::vector<VarId> fixed;
  std::vector<uint8_t> chosen(static_cast<size_t>(std::max(cs.n, 1)), 0);
  for (uint32_t i = 0; i < cs.circuits.size(); ++i) {
    int e = std::countr_zero(cs.circuits[i]);
    fixed.push_back(t.index_a(i, e));
    chosen[e] = 1;
  }
  for (uint32_t j = 0; j < cs.cocircuits.size(); ++j) {
    int e = std::countr_zero(cs.cocircuits[j]);
    fixed.push_back(t.index_b(j, e));
    chosen[e] = 1;
  }
  for (int e = 0; e < cs.n; ++e) {
    if (chosen[e]) continue;
    for (uint32_t i = 0; i < cs.circuits.size(); ++i) {
      if (contains(cs.circuits[i], e)) {
        fixed.push_back(t.index_a(i, e));
        break;
      }
    }
  }
  std::sort(fixed.begin(), fixed.end());
  fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());
  return fixed;
}

inline std::vector<VarId> variable_fixings(const Matroid& m) { return variable_fixings(circuit_system(m)); }

// -- decision procedure ---------------------------------------------------------

struct OrientabilityDecision {
  bool decided = false;
  bool orientable = false;
  std::optional<SigmaMapping> witness;
  uint64_t nodes = 0;
};

struct OrientabilityOptions {
  bool use_fixings = true;
  uint64_t node_budget = 0;  // 0 = unlimited
};

namespace detail {

// Backtracking over +/- values of the sigma-mapping entries. Each
// 2-intersection pair is a 4-variable parity constraint (propagated: three
// assigned values force the fourth); each 3-intersection pair forbids its
// three sign products from being all equal (checked once fully assigned).
class OrientabilitySearch {
 public:
  OrientabilitySearch(const CircuitSystem& cs, const OrientabilityOptions& opts) : cs_(cs), opts_(opts) {
    table_ = make_variable_table(cs);
    values_.assign(table_.num_vars, kUnassigned);
    for (uint32_t i = 0; i < cs.circuits.size(); ++i) {
      for (uint32_t j = 0; j < cs.cocircuits.size(); ++j) {
        SetMask common = cs.circuits[i] & cs.cocircuits[j];
        int c = popcount(common);
        if (c == 2) {
          auto el = elements_of(common);
          parity_.push_back({table_.index_a(i, el[0]), table_.index_b(j, el[0]), table_.index_a(i, el[1]), table_.index_b(j, el[1])});
        } else if (c == 3) {
          auto el = elements_of(common);
          NotEqual ne;
          for (int k = 0; k < 3; ++k) {
            ne.av[k] = table_.index_a(i, el[k]);
            ne.bv[k] = table_.index_b(j, el[k]);
          }
          notequal_.push_back(ne);
        }
      }
    }
    watch_.resize(table_.num_vars);
    for (size_t c = 0; c < parity_.size(); ++c)
      for (VarId v : parity_[c]) watch_[v].push_back(static_cast<uint32_t>(c));
    ne_watch_.resize(table_.num_vars);
    for (size_t c = 0; c < notequal_.size(); ++c)
      for (int k = 0; k < 3; ++k) {
        ne_watch_[notequal_[c].av[k]].push_back(static_cast<uint32_t>(c));
        ne_watch_[notequal_[c].bv[k]].push_back(static_cast<uint32_t>(c));
      }
  }

  OrientabilityDecision run() {
    OrientabilityDecision dec;
    if (opts_.use_fixings) {
      for (VarId v : variable_fixings(cs_)) {
        if (!assign(v, 0)) {  // '+' is F_2 value 0
          // A fixing can only conflict with propagation of earlier fixings;
          // fixing preserves feasibility, so this means infeasible.
          dec.decided = true;
          dec.orientable = false;
          dec.nodes = nodes_;
          return dec;
        }
      }
    }
    int status = dfs(0);
    dec.nodes = nodes_;
    if (status == kBudget) {
      dec.decided = false;
      return dec;
    }
    dec.decided = true;
    dec.orientable = (status == kSat);
    if (dec.orientable) {
      dec.witness = build_sigma();
      for (uint32_t ci = 0; ci < cs_.circuits.size(); ++ci)
        for (uint32_t cj = 0; cj < cs_.cocircuits.size(); ++cj) {
          int c = popcount(cs_.circuits[ci] & cs_.cocircuits[cj]);
          if ((c == 2 || c == 3) && !sigma_pair_orthogonal(*dec.witness, ci, cj))
            fail(ErrorCode::InternalError, "orientation witness failed orthogonality check");
        }
    }
    return dec;
  }

  const CircuitSystem* system() const { return &cs_; }

 private:
  static constexpr int kSat = 1, kUnsat = 0, kBudget = -1;

  struct NotEqual {
    std::array<VarId, 3> av{}, bv{};
  };

  bool assign(VarId v, uint8_t val) {
    size_t trail_mark = trail_.size();
    if (!push(v, val)) return true_rollback(trail_mark);
    size_t qhead = trail_mark;
    while (qhead < trail_.size()) {
      VarId u = trail_[qhead++];
      for (uint32_t c : watch_[u]) {
        int unassigned = -1;
        unsigned par = 1;  // rhs of the parity row
        for (VarId w : parity_[c]) {
          if (values_[w] == kUnassigned) {
            if (unassigned >= 0) {
              unassigned = -2;
              break;
            }
            unassigned = static_cast<int>(w);
          } else {
            par ^= values_[w];
          }
        }
        if (unassigned == -2) continue;
        if (unassigned == -1) {
          if (par) return true_rollback(trail_mark);
        } else {
          if (!push(static_cast<VarId>(unassigned), static_cast<uint8_t>(par))) return true_rollback(trail_mark);
        }
      }
      for (uint32_t c : ne_watch_[u]) {
        if (!check_notequal(notequal_[c])) return true_rollback(trail_mark);
      }
    }
    return true;
  }

  bool push(VarId v, uint8_t val) {
    if (values_[v] != kUnassigned) return values_[v] == val;
    values_[v] = val;
    trail_.push_back(v);
    return true;
  }

  bool true_rollback(size_t mark) {
    while (trail_.size() > mark) {
      values_[trail_.back()] = kUnassigned;
      trail_.pop_back();
    }
    return false;
  }

  bool check_notequal(const NotEqual& ne) const {
    // Prune only when all three sign products are known.
    unsigned prods[3];
    for (int k = 0; k < 3; ++k) {
      if (values_[ne.av[k]] == kUnassigned || values_[ne.bv[k]] == kUnassigned) return true;
      prods[k] = values_[ne.av[k]] ^ values_[ne.bv[k]];
    }
    return !(prods[0] == prods[1] && prods[1] == prods[2]);
  }

  int dfs(VarId from) {
    if (opts_.node_budget && nodes_ >= opts_.node_budget) return kBudget;
    ++nodes_;
    VarId v = from;
    while (v < table_.num_vars && values_[v] != kUnassigned) ++v;
    if (v == table_.num_vars) return kSat;
    for (uint8_t val : {uint8_t{0}, uint8_t{1}}) {
      size_t mark = trail_.size();
      if (assign(v, val)) {
        int st = dfs(v + 1);
        if (st != kUnsat) return st;
        true_rollback(mark);
      }
    }
    return kUnsat;
  }

  SigmaMapping build_sigma() const {
    SigmaMapping sm;
    sm.system = &cs_;
    sm.circuit_signs.resize(cs_.circuits.size());
    for (uint32_t ci = 0; ci < cs_.circuits.size(); ++ci)
      for (int e : elements_of(cs_.circuits[ci]))
        sm.circuit_signs[ci].push_back(values_[table_.index_a(ci, e)] ? -1 : 1);
    sm.cocircuit_signs.resize(cs_.cocircuits.size());
    for (uint32_t cj = 0; cj < cs_.cocircuits.size(); ++cj)
      for (int e : elements_of(cs_.cocircuits[cj]))
        sm.cocircuit_signs[cj].push_back(values_[table_.index_b(cj, e)] ? -1 : 1);
    return sm;
  }

  const CircuitSystem& cs_;
  OrientabilityOptions opts_;
  VariableTable table_;
  std::vector<uint8_t> values_;
  std::vector<std::array<VarId, 4>> parity_;
  std::vector<NotEqual> notequal_;
  std::vector<std::vector<uint32_t>> watch_, ne_watch_;
  std::vector<VarId> trail_;
  uint64_t nodes_ = 0;
};

}  // namespace detail

/// Decides orientability by backtracking over sigma-mapping signs. Worst case
/// exponential; `node_budget` (when nonzero) bounds the search, returning
/// decided = false instead of an answer. The caller's sigma-mapping lives as
/// long as the CircuitSystem passed in.
inline OrientabilityDecision decide_orientability(const CircuitSystem& cs, const OrientabilityOptions& opts = {}) {
  detail::OrientabilitySearch search(cs, opts);
  return search.run();
}

struct OwningOrientabilityDecision {
  std::shared_ptr<CircuitSystem> cs;
  OrientabilityDecision decision;
};

inline OwningOrientabilityDecision decide_orientability(const Matroid& m, const OrientabilityOptions& opts = {}) {
  auto cs = std::make_shared<CircuitSystem>(circuit_system(m));
  detail::OrientabilitySearch search(*cs, opts);
  OwningOrientabilityDecision out{cs, search.run()};
  if (out.decision.witness) out.decision.witness->system = cs.get();
  return out;
}

// -- assignment-search feasibility oracles --------------------------------------

struct SearchOptions {
  uint64_t node_budget = 0;  // 0 = unlimited
};

namespace detail {

// Plain depth-first assignment search over F_p values, pruning only on fully
// assigned polynomials. Deliberately free of propagation so it can serve as
// an independent oracle for the decision procedures.
class SystemSearch {
 public:
  SystemSearch(const OrientabilitySystem& sys, const SearchOptions& opts) : sys_(sys), opts_(opts) {
    values_.assign(sys.table.num_vars, kUnassigned);
    // Static variable order: variables in order of first appearance in the
    // polynomial list, so constraints complete as early as possible.
    std::vector<uint8_t> seen(sys.table.num_vars, 0);
    for (auto& tp : sys_.polys)
      for (VarId v : tp.poly.variables())
        if (!seen[v]) {
          seen[v] = 1;
          order_.push_back(v);
        }
    for (VarId v = 0; v < sys.table.num_vars; ++v)
      if (!seen[v]) order_.push_back(v);
    // For each variable, the polynomials whose support becomes complete at it.
    complete_at_.resize(order_.size());
    std::vector<uint32_t> pos(sys.table.num_vars, 0);
    for (size_t k = 0; k < order_.size(); ++k) pos[order_[k]] = static_cast<uint32_t>(k);
    for (size_t pi = 0; pi < sys_.polys.size(); ++pi) {
      auto vars = sys_.polys[pi].poly.variables();
      uint32_t last = 0;
      for (VarId v : vars) last = std::max(last, pos[v]);
      if (vars.empty()) {
        constant_polys_.push_back(pi);
      } else {
        complete_at_[last].push_back(pi);
      }
    }
  }

  // Returns 1 feasible, 0 infeasible, -1 budget exceeded.
  int run() {
    for (size_t pi : constant_polys_)
      if (sys_.polys[pi].poly.constant_coefficient() != 0) return 0;
    return dfs(0);
  }

  uint64_t nodes() const { return nodes_; }

 private:
  int dfs(size_t k) {
    if (opts_.node_budget && nodes_ >= opts_.node_budget) return -1;
    ++nodes_;
    if (k == order_.size()) return 1;
    VarId v = order_[k];
    for (uint32_t val = 0; val < sys_.p; ++val) {
      values_[v] = static_cast<uint8_t>(val);
      bool ok = true;
      for (size_t pi : complete_at_[k])
        if (sys_.polys[pi].poly.evaluate(values_) != 0) {
          ok = false;
          break;
        }
      if (ok) {
        int st = dfs(k + 1);
        if (st != 0) return st;
      }
    }
    values_[v] = kUnassigned;
    return 0;
  }

  const OrientabilitySystem& sys_;
  SearchOptions opts_;
  std::vector<uint8_t> values_;
  std::vector<VarId> order_;
  std::vector<std::vector<size_t>> complete_at_;
  std::vector<size_t> constant_polys_;
  uint64_t nodes_ = 0;
};

}  // namespace detail

/// Exhaustive assignment search for system feasibility (independent oracle;
/// no propagation beyond pruning fully assigned polynomials). Throws
/// SizeOverBudget when a node budget is set and exhausted.
inline bool system_feasible_by_search(const OrientabilitySystem& sys, const SearchOptions& opts = {}) {
  detail::SystemSearch s(sys, opts);
  int st = s.run();
  if (st < 0) fail(ErrorCode::SizeOverBudget, "assignment search exceeded node budget");
  return st == 1;
}

namespace detail {

// Brute-force search directly over sigma-mapping signs, checking the
// orthogonality definition on every pair whose incidences are fully signed.
// Independent of both the polynomial encodings and the propagating search.
class SigmaBruteSearch {
 public:
  SigmaBruteSearch(const CircuitSystem& cs, bool weak_only, const SearchOptions& opts) : cs_(cs), opts_(opts) {
    table_ = make_variable_table(cs);
    values_.assign(table_.num_vars, kUnassigned);
    for (uint32_t i = 0; i < cs.circuits.size(); ++i)
      for (uint32_t j = 0; j < cs.cocircuits.size(); ++j) {
        int c = popcount(cs.circuits[i] & cs.cocircuits[j]);
        if (c == 2 || (c == 3 && !weak_only)) pairs_.push_back({i, j});
      }
    // Pair completes when its last incidence variable (in index order) is set.
    complete_at_.resize(table_.num_vars);
    for (size_t pi = 0; pi < pairs_.size(); ++pi) {
      auto [i, j] = pairs_[pi];
      VarId last = 0;
      for (int e : elements_of(cs.circuits[i] & cs.cocircuits[j])) {
        last = std::max(last, table_.index_a(i, e));
        last = std::max(last, table_.index_b(j, e));
      }
      complete_at_[last].push_back(pi);
    }
  }

  int run() { return dfs(0); }

 private:
  bool pair_ok(size_t pi) const {
    auto [i, j] = pairs_[pi];
    bool agree = false, disagree = false;
    for (int e : elements_of(cs_.circuits[i] & cs_.cocircuits[j])) {
      unsigned prod = values_[table_.index_a(i, e)] ^ values_[table_.index_b(j, e)];
      (prod ? disagree : agree) = true;
    }
    return agree == disagree;
  }

  int dfs(VarId v) {
    if (opts_.node_budget && nodes_ >= opts_.node_budget) return -1;
    ++nodes_;
    if (v == table_.num_vars) return 1;
    for (uint8_t val : {uint8_t{0}, uint8_t{1}}) {
      values_[v] = val;
      bool ok = true;
      for (size_t pi : complete_at_[v])
        if (!pair_ok(pi)) {
          ok = false;
          break;
        }
      if (ok) {
        int st = dfs(v + 1);
        if (st != 0) return st;
      }
    }
    values_[v] = kUnassigned;
    return 0;
  }

  const CircuitSystem& cs_;
  SearchOptions opts_;
  VariableTable table_;
  std::vector<uint8_t> values_;
  std::vector<std::pair<uint32_t, uint32_t>> pairs_;
  std::vector<std::vector<size_t>> complete_at_;
  uint64_t nodes_ = 0;
};

}  // namespace detail

/// Brute-force sigma-mapping search: orientability when weak_only = false,
/// weak orientability when weak_only = true.
inline bool sigma_search(const CircuitSystem& cs, bool weak_only = false, const SearchOptions& opts = {}) {
  detail::SigmaBruteSearch s(cs, weak_only, opts);
  int st = s.run();
  if (st < 0) fail(ErrorCode::SizeOverBudget, "sigma search exceeded node budget");
  return st == 1;
}

/// Applies a set of '+' fixings to a polynomial system by substituting the
/// field value 1 and dropping vanished polynomials. Variable ids keep their
/// meaning in the shared table.
inline std::vector<Polynomial> apply_fixings(const std::vector<Polynomial>& polys, const std::vector<VarId>& fixed) {
  std::vector<Polynomial> out;
  out.reserve(polys.size());
  for (const Polynomial& f : polys) {
    Polynomial g = f;
    for (VarId v : fixed) g = g.substituted(v, 1);
    if (!g.is_zero()) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace matorient
