#pragma once

// Commutative polynomials in slot-tagged rotation entries r[slot][i][j] and the
// orthogonality ideal generated by R^T R - I and R R^T - I in each slot.

#include "kgal/scalars.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace kgal {

/// Variable id of r[slot][i][j]; slot, i, j are 1-based.
constexpr int rot_var(int slot, int i, int j) { return (slot - 1) * 9 + (i - 1) * 3 + (j - 1); }
constexpr int rot_var_slot(int v) { return v / 9 + 1; }

/// Monomial = sorted multiset of variable ids (one char per factor).
using Monomial = std::string;

inline Monomial make_monomial(std::vector<int> vars) {
  std::sort(vars.begin(), vars.end());
  Monomial m;
  for (int v : vars) m.push_back(static_cast<char>(v));
  return m;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
  return m;
}

/// Polynomial in commuting rotation entries with exact complex coefficients.
class CommPoly {
 public:
  CommPoly() = default;
  CommPoly(ExactComplex c) { add(Monomial{}, std::move(c)); }  // NOLINT

  static CommPoly var(int v) {
    CommPoly p;
    p.add(Monomial(1, static_cast<char>(v)), ExactComplex(1));
    return p;
  }
  static CommPoly r(int slot, int i, int j) { return var(rot_var(slot, i, j)); }

  void add(const Monomial& m, const ExactComplex& c) {
    if (c.is_zero()) return;
    auto [it, ins] = terms_.try_emplace(m, c);
    if (!ins) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<Monomial, ExactComplex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
    return d;
  }

  /// True if every variable belongs to `slot`.
  bool uses_only_slot(int slot) const {
    for (const auto& [m, c] : terms_)
      for (char v : m)
        if (rot_var_slot(v) != slot) return false;
    return true;
  }

  CommPoly& operator+=(const CommPoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  CommPoly& operator-=(const CommPoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend CommPoly operator+(CommPoly a, const CommPoly& b) { return a += b; }
  friend CommPoly operator-(CommPoly a, const CommPoly& b) { return a -= b; }
  friend CommPoly operator*(const CommPoly& a, const CommPoly& b) {
    CommPoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add(mono_mul(ma, mb), ca * cb);
    return out;
  }
  friend CommPoly operator*(const ExactComplex& s, CommPoly p) {
    for (auto& [m, c] : p.terms_) c *= s;
    if (s.is_zero()) p.terms_.clear();
    return p;
  }
  friend bool operator==(const CommPoly& a, const CommPoly& b) { return a.terms_ == b.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + c.str() + ")";
      for (char v : m) {
        int s = rot_var_slot(v), loc = v % 9;
        out += "*r" + std::to_string(s) + "[" + std::to_string(loc / 3 + 1) + "," + std::to_string(loc % 3 + 1) + "]";
      }
    }
    return out;
  }

 private:
  std::map<Monomial, ExactComplex> terms_;
};

/// The twelve generators of the orthogonality ideal of one slot:
/// (R^T R - I)_{jl} for j <= l, then (R R^T - I)_{il} for i <= l.
inline std::vector<CommPoly> orthogonality_generators(int slot) {
  std::vector<CommPoly> gens;
  for (int j = 1; j <= 3; ++j)
    for (int l = j; l <= 3; ++l) {
      CommPoly g;
      for (int i = 1; i <= 3; ++i) g += CommPoly::r(slot, i, j) * CommPoly::r(slot, i, l);
      if (j == l) g -= CommPoly(ExactComplex(1));
      gens.push_back(std::move(g));
    }
  for (int i = 1; i <= 3; ++i)
    for (int l = i; l <= 3; ++l) {
      CommPoly g;
      for (int j = 1; j <= 3; ++j) g += CommPoly::r(slot, i, j) * CommPoly::r(slot, l, j);
      if (i == l) g -= CommPoly(ExactComplex(1));
      gens.push_back(std::move(g));
    }
  return gens;
}

/// All monomials in `vars` of total degree <= max_degree.
inline std::vector<Monomial> monomials_up_to(const std::vector<int>& vars, int max_degree) {
  std::vector<Monomial> out{Monomial{}};
  std::vector<Monomial> frontier{Monomial{}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Monomial> next;
    for (const auto& m : frontier) {
      int last = m.empty() ? -1 : static_cast<unsigned char>(m.back());
      for (int v : vars)
        if (v >= last) next.push_back(m + static_cast<char>(v));
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

struct MemberCertificate {
  int slot = 1;
  std::vector<CommPoly> multipliers;  // one per orthogonality generator, same order
};

struct NotFoundAtBound {
  int bound = 0;
};

using MembershipResult = std::variant<MemberCertificate, NotFoundAtBound>;

/// Bounded-degree membership test: solves p = sum_g m_g * g exactly with every
/// multiplier of degree <= degree_bound - 2.
inline MembershipResult ideal_membership(const CommPoly& p, int slot, int degree_bound) {
  if (!p.uses_only_slot(slot)) throw std::invalid_argument("ideal_membership: polynomial uses foreign slot");
  if (degree_bound < p.degree()) throw std::invalid_argument("ideal_membership: degree_bound below deg(p)");
  const auto gens = orthogonality_generators(slot);
  std::vector<int> vars;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) vars.push_back(rot_var(slot, i, j));
  if (degree_bound < 2) return NotFoundAtBound{degree_bound};
  const auto mults = monomials_up_to(vars, degree_bound - 2);

  std::map<Monomial, int> eq_index;
  auto eq_of = [&](const Monomial& m) {
    auto [it, ins] = eq_index.try_emplace(m, static_cast<int>(eq_index.size()));
    return it->second;
  };
  SparseSystem sys;
  sys.cols = static_cast<int>(gens.size() * mults.size());
  std::map<int, SparseRow> by_eq;
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t k = 0; k < mults.size(); ++k) {
      int col = static_cast<int>(g * mults.size() + k);
      for (const auto& [m, c] : gens[g].terms()) by_eq[eq_of(mono_mul(mults[k], m))][col] += c;
    }
  for (const auto& [m, c] : p.terms()) by_eq.try_emplace(eq_of(m));
  std::vector<ExactComplex> rhs(eq_index.size());
  for (const auto& [m, c] : p.terms()) rhs[eq_of(m)] = c;
  for (auto& [e, row] : by_eq) sys.add_row(std::move(row), rhs[e]);

  auto res = solve_linear_exact(sys);
  if (std::holds_alternative<Infeasible>(res)) return NotFoundAtBound{degree_bound};
  const auto& x = std::get<Solution>(res).x;
  MemberCertificate cert;
  cert.slot = slot;
  cert.multipliers.resize(gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t k = 0; k < mults.size(); ++k)
      cert.multipliers[g].add(mults[k], x[g * mults.size() + k]);
  return cert;
}

/// Re-multiplies a certificate: sum_g multiplier_g * g.
inline CommPoly replay_certificate(const MemberCertificate& cert) {
  const auto gens = orthogonality_generators(cert.slot);
  CommPoly acc;
  for (std::size_t g = 0; g < gens.size(); ++g) acc += cert.multipliers[g] * gens[g];
  return acc;
}

// ---------------------------------------------------------------------------
// Linear normal form modulo the orthogonality ideal of a single 3x3 block.
// Monomials here use local variables 0..8 (entry (i,j) -> 3(i-1)+(j-1)).

class OrthoNormalForm {
 public:
  using Poly = std::map<Monomial, Rational>;

  /// Shared table for local monomials of degree <= max_degree. Built once per degree.
  static const OrthoNormalForm& instance(int max_degree) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<OrthoNormalForm>> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = tables[max_degree];
    if (!slot) slot.reset(new OrthoNormalForm(max_degree, 0));
    return *slot;
  }

  /// Table whose multipliers go `extra` degrees beyond max_degree - 2.
  OrthoNormalForm(int max_degree, int extra) : max_degree_(max_degree) { build(extra); }

  int max_degree() const { return max_degree_; }
  std::size_t pivot_count() const { return pivots_.size(); }

  /// Number of pivots whose leading monomial has degree <= d: dim(I cap P_{<=d}).
  std::size_t ideal_dimension(int d) const {
    std::size_t n = 0;
    for (const auto& [m, row] : pivots_)
      if (static_cast<int>(m.size()) <= d) ++n;
    return n;
  }

  /// Normal form of a local monomial of degree <= max_degree.
  const Poly& reduce(const Monomial& m) const {
    if (static_cast<int>(m.size()) > max_degree_)
      throw std::out_of_range("OrthoNormalForm: monomial degree exceeds table");
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    Poly r{{m, Rational(1)}};
    full_reduce(r);
    return cache_.emplace(m, std::move(r)).first->second;
  }

  Poly reduce(const Poly& p) const {
    Poly out;
    for (const auto& [m, c] : p)
      for (const auto& [mm, cc] : reduce(m)) {
        auto [it, ins] = out.try_emplace(mm, 0);
        it->second += c * cc;
        if (sgn(it->second) == 0) out.erase(it);
      }
    return out;
  }

 private:
  // Graded order, highest first: larger degree, then lexicographically larger.
  struct Desc {
    bool operator()(const Monomial& a, const Monomial& b) const {
      if (a.size() != b.size()) return a.size() > b.size();
      return a > b;
    }
  };
  using Row = std::map<Monomial, Rational, Desc>;

  static void axpy(Row& r, const Rational& f, const Row& p) {
    for (const auto& [m, v] : p) {
      auto [it, ins] = r.try_emplace(m, 0);
      it->second -= f * v;
      if (sgn(it->second) == 0) r.erase(it);
    }
  }

  void build(int extra) {
    std::vector<Row> gens;
    for (const auto& g : orthogonality_generators(1)) {
      Row r;
      for (const auto& [m, c] : g.terms()) r[m] = c.re();
      gens.push_back(std::move(r));
    }
    std::vector<int> vars{0, 1, 2, 3, 4, 5, 6, 7, 8};
    const int mult_deg = max_degree_ - 2 + extra;
    if (mult_deg < 0) return;
    auto mults = monomials_up_to(vars, mult_deg);
    // Low-degree rows first keeps the fill-in small.
    std::stable_sort(mults.begin(), mults.end(), [](const Monomial& a, const Monomial& b) { return a.size() < b.size(); });
    for (const auto& mono : mults)
      for (const auto& g : gens) {
        Row r;
        for (const auto& [m, c] : g) r.emplace(mono_mul(mono, m), c);
        insert(std::move(r));
      }
  }

  void insert(Row r) {
    while (!r.empty()) {
      auto pit = pivots_.find(r.begin()->first);
      if (pit == pivots_.end()) break;
      Rational f = r.begin()->second / pit->second.begin()->second;
      axpy(r, f, pit->second);
    }
    if (r.empty()) return;
    Rational lead = r.begin()->second;
    for (auto& [m, c] : r) c /= lead;
    Monomial key = r.begin()->first;
    pivots_.emplace(std::move(key), std::move(r));
  }

  void full_reduce(Poly& p) const {
    Row r(p.begin(), p.end());
    for (auto it = r.begin(); it != r.end();) {
      auto pit = pivots_.find(it->first);
      if (pit == pivots_.end()) {
        ++it;
        continue;
      }
      Monomial here = it->first;
      Rational f = it->second;  // pivot rows are monic
      axpy(r, f, pit->second);
      it = r.upper_bound(here);
    }
    p = Poly(r.begin(), r.end());
  }

  int max_degree_;
  std::map<Monomial, Row, Desc> pivots_;
  mutable std::mutex cache_mu_;
  mutable std::map<Monomial, Poly> cache_;
};

/// Normal form of a multi-slot polynomial modulo the sum of per-slot ideals.
/// Zero iff p lies in I_1 + I_2 + I_3 (within the table's degree bound).
inline CommPoly reduce_orthogonality(const CommPoly& p, int table_degree = -1) {
  int need = 0;
  for (const auto& [m, c] : p.terms()) {
    std::array<int, 3> per{};
    for (char v : m) ++per[rot_var_slot(v) - 1];
    need = std::max({need, per[0], per[1], per[2]});
  }
  const auto& nf = OrthoNormalForm::instance(std::max(need, table_degree));
  CommPoly out;
  for (const auto& [m, c] : p.terms()) {
    std::array<Monomial, 3> local;
    for (char v : m) local[rot_var_slot(v) - 1].push_back(static_cast<char>(v % 9));
    std::vector<std::pair<Monomial, Rational>> acc{{Monomial{}, Rational(1)}};
    for (int s = 0; s < 3; ++s) {
      const auto& red = nf.reduce(local[s]);
      std::vector<std::pair<Monomial, Rational>> next;
      for (const auto& [am, ac] : acc)
        for (const auto& [rm, rc] : red) {
          Monomial shifted;
          for (char v : rm) shifted.push_back(static_cast<char>(v + 9 * s));
          next.emplace_back(mono_mul(am, shifted), ac * rc);
        }
      acc = std::move(next);
    }
    for (const auto& [am, ac] : acc) out.add(am, c * ExactComplex(ac));
  }
  return out;
}

}  // namespace kgal
