#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "matorient/errors.hpp"

namespace matorient {

using VarId = uint32_t;

/// Unassigned sentinel in dense assignment vectors.
constexpr uint8_t kUnassigned = 0xFF;

/// Product of variable powers; factors sorted by variable, exponents >= 1.
struct Monomial {
  std::vector<std::pair<VarId, uint32_t>> powers;

  bool is_constant() const { return powers.empty(); }
  uint32_t total_degree() const {
    uint32_t d = 0;
    for (auto& [v, e] : powers) d += e;
    return d;
  }
  uint32_t degree_of(VarId v) const {
    for (auto& [w, e] : powers)
      if (w == v) return e;
    return 0;
  }
  bool operator==(const Monomial& o) const { return powers == o.powers; }
  bool operator<(const Monomial& o) const { return powers < o.powers; }

  static Monomial one() { return {}; }
  static Monomial var(VarId v, uint32_t e = 1) {
    Monomial m;
    if (e) m.powers.push_back({v, e});
    return m;
  }

  Monomial times(const Monomial& o) const {
    Monomial out;
    out.powers.reserve(powers.size() + o.powers.size());
    size_t i = 0, j = 0;
    while (i < powers.size() && j < o.powers.size()) {
      if (powers[i].first < o.powers[j].first)
        out.powers.push_back(powers[i++]);
      else if (powers[i].first > o.powers[j].first)
        out.powers.push_back(o.powers[j++]);
      else {
        out.powers.push_back({powers[i].first, powers[i].second + o.powers[j].second});
        ++i;
        ++j;
      }
    }
    while (i < powers.size()) out.powers.push_back(powers[i++]);
    while (j < o.powers.size()) out.powers.push_back(o.powers[j++]);
    return out;
  }
};

/// Sparse multivariate polynomial over F_p. No zero coefficients are stored;
/// term order (and hence printing) is deterministic.
struct Polynomial {
  uint32_t p = 2;
  std::map<Monomial, uint32_t> terms;

  explicit Polynomial(uint32_t p_ = 2) : p(p_) {}

  bool is_zero() const { return terms.empty(); }
  bool is_one() const { return terms.size() == 1 && terms.begin()->first.is_constant() && terms.begin()->second == 1; }
  uint32_t constant_coefficient() const {
    auto it = terms.find(Monomial::one());
    return it == terms.end() ? 0 : it->second;
  }
  uint32_t total_degree() const {
    uint32_t d = 0;
    for (auto& [m, c] : terms) d = std::max(d, m.total_degree());
    return d;
  }

  void add_term(const Monomial& m, uint32_t coeff) {
    coeff %= p;
    if (!coeff) return;
    auto [it, fresh] = terms.try_emplace(m, coeff);
    if (!fresh) {
      it->second = (it->second + coeff) % p;
      if (it->second == 0) terms.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (auto& [m, c] : o.terms) add_term(m, c);
    return *this;
  }

  Polynomial scaled(uint32_t k) const {
    Polynomial out(p);
    k %= p;
    for (auto& [m, c] : terms) out.add_term(m, c * k % p);
    return out;
  }

  Polynomial times(const Polynomial& o) const {
    Polynomial out(p);
    for (auto& [m1, c1] : terms)
      for (auto& [m2, c2] : o.terms) out.add_term(m1.times(m2), c1 * c2 % p);
    return out;
  }

  Polynomial times(const Monomial& m, uint32_t coeff) const {
    Polynomial out(p);
    for (auto& [m1, c1] : terms) out.add_term(m1.times(m), c1 * coeff % p);
    return out;
  }

  /// Substitute a constant for one variable.
  Polynomial substituted(VarId v, uint32_t value) const {
    Polynomial out(p);
    value %= p;
    for (auto& [m, c] : terms) {
      uint32_t e = m.degree_of(v);
      if (!e) {
        out.add_term(m, c);
        continue;
      }
      uint64_t f = 1;
      for (uint32_t k = 0; k < e; ++k) f = f * value % p;
      if (!f) continue;
      Monomial rest;
      for (auto& [w, we] : m.powers)
        if (w != v) rest.powers.push_back({w, we});
      out.add_term(rest, static_cast<uint32_t>(c * f % p));
    }
    return out;
  }

  /// Reduce every exponent to 1 (the quotient by the field equations x^2 = x;
  /// meaningful over F_2 where polynomials are compared as point functions).
  Polynomial multilinear() const {
    Polynomial out(p);
    for (auto& [m, c] : terms) {
      Monomial red;
      for (auto& [v, e] : m.powers) red.powers.push_back({v, 1});
      out.add_term(red, c);
    }
    return out;
  }

  uint32_t evaluate(const std::vector<uint8_t>& values) const {
    uint64_t acc = 0;
    for (auto& [m, c] : terms) {
      uint64_t t = c;
      for (auto& [v, e] : m.powers) {
        if (v >= values.size() || values[v] == kUnassigned)
          fail(ErrorCode::IncompleteAssignment, "variable " + std::to_string(v) + " unassigned");
        uint64_t base = values[v] % p, pw = 1;
        for (uint32_t k = 0; k < e; ++k) pw = pw * base % p;
        t = t * pw % p;
      }
      acc = (acc + t) % p;
    }
    return static_cast<uint32_t>(acc);
  }

  std::vector<VarId> variables() const {
    std::vector<VarId> out;
    for (auto& [m, c] : terms)
      for (auto& [v, e] : m.powers) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool operator==(const Polynomial& o) const { return p == o.p && terms == o.terms; }
};

inline Polynomial poly_constant(uint32_t p, uint32_t c) {
  Polynomial out(p);
  out.add_term(Monomial::one(), c);
  return out;
}

inline Polynomial poly_var(uint32_t p, VarId v) {
  Polynomial out(p);
  out.add_term(Monomial::var(v), 1);
  return out;
}

}  // namespace matorient
