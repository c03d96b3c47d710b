#pragma once

// Exact coefficient arithmetic: Gaussian rationals, lambda/M-graded scalars
// and a sparse exact linear solver with infeasibility witnesses.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kgal {

using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Complex number with exact rational real and imaginary parts.
class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  ExactComplex(Rational re) : re_(std::move(re)) {}  // NOLINT
  ExactComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static ExactComplex i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  ExactComplex conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  ExactComplex& operator+=(const ExactComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ *= o.re_;
      return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  ExactComplex& operator/=(const ExactComplex& o) {
    if (o.is_zero()) throw std::domain_error("ExactComplex: division by zero");
    Rational n = o.norm2();
    Rational r = (re_ * o.re_ + im_ * o.im_) / n;
    Rational m = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  ExactComplex operator-() const { return {-re_, -im_}; }

  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }

  /// Plain-text form: "3/2", "-I", "1/2+3*I".
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    if (sgn(re_) != 0) out = re_.get_str();
    if (sgn(im_) != 0) {
      Rational a = abs(im_);
      std::string mag = (a == 1) ? std::string("I") : a.get_str() + "*I";
      if (out.empty())
        out = (sgn(im_) < 0 ? "-" : "") + mag;
      else
        out += (sgn(im_) < 0 ? "-" : "+") + mag;
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactComplex& c) { return os << c.str(); }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Finite sum of coeff * lambda^p * M^q, lambda = 1/k formal, M formal mass.
class GradedScalar {
 public:
  using Key = std::pair<int, int>;  // (lambda power, M power)

  GradedScalar() = default;
  GradedScalar(ExactComplex c, int lambda_pow = 0, int m_pow = 0) {  // NOLINT
    add_term(lambda_pow, m_pow, std::move(c));
  }

  static GradedScalar lambda(int p = 1) { return GradedScalar(ExactComplex(1), p, 0); }
  static GradedScalar mass(int p = 1) { return GradedScalar(ExactComplex(1), 0, p); }

  void add_term(int lambda_pow, int m_pow, const ExactComplex& c) {
    if (lambda_pow < 0 || m_pow < 0) throw std::invalid_argument("GradedScalar: negative power");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(Key{lambda_pow, m_pow}, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<Key, ExactComplex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ExactComplex coeff(int lambda_pow, int m_pow) const {
    auto it = terms_.find({lambda_pow, m_pow});
    return it == terms_.end() ? ExactComplex() : it->second;
  }

  int max_lambda() const {
    int best = -1;
    for (const auto& [k, c] : terms_) best = std::max(best, k.first);
    return best;
  }

  GradedScalar truncated(int N) const {
    GradedScalar out;
    for (const auto& [k, c] : terms_)
      if (k.first <= N) out.terms_.emplace(k, c);
    return out;
  }

  GradedScalar conj() const {
    GradedScalar out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, c.conj());
    return out;
  }

  GradedScalar& operator+=(const GradedScalar& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  GradedScalar& operator-=(const GradedScalar& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
  }
  friend GradedScalar operator+(GradedScalar a, const GradedScalar& b) { return a += b; }
  friend GradedScalar operator-(GradedScalar a, const GradedScalar& b) { return a -= b; }
  GradedScalar operator-() const {
    GradedScalar out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
  }

  friend bool operator==(const GradedScalar& a, const GradedScalar& b) { return a.terms_ == b.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      if (k.first > 0) os << "*L" << (k.first > 1 ? "^" + std::to_string(k.first) : "");
      if (k.second > 0) os << "*M" << (k.second > 1 ? "^" + std::to_string(k.second) : "");
    }
    return os.str();
  }

 private:
  std::map<Key, ExactComplex> terms_;
};

/// Product with every lambda power above N discarded.
inline GradedScalar graded_mul(const GradedScalar& a, const GradedScalar& b, int N) {
  GradedScalar out;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms())
      if (ka.first + kb.first <= N) out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return out;
}

// ---------------------------------------------------------------------------
// Exact linear solving

using SparseRow = std::map<int, ExactComplex>;

/// Sparse system A x = b with `cols` unknowns.
struct SparseSystem {
  int cols = 0;
  std::vector<SparseRow> rows;
  std::vector<ExactComplex> rhs;

  void add_row(SparseRow row, ExactComplex b) {
    for (auto it = row.begin(); it != row.end();) {
      if (it->first < 0 || it->first >= cols) throw std::invalid_argument("SparseSystem: column out of range");
      it = it->second.is_zero() ? row.erase(it) : std::next(it);
    }
    rows.push_back(std::move(row));
    rhs.push_back(std::move(b));
  }
};

struct Solution {
  std::vector<ExactComplex> x;
  int rank = 0;
};

/// Left null vector y of A with y^T b != 0.
struct Infeasible {
  std::vector<ExactComplex> witness;
};

using SolveResult = std::variant<Solution, Infeasible>;

namespace detail {

struct EchelonResult {
  std::map<int, std::pair<SparseRow, ExactComplex>> pivots;  // leading column -> (row, rhs)
  bool consistent = true;
};

inline void axpy(SparseRow& r, const ExactComplex& f, const SparseRow& p) {
  for (const auto& [c, v] : p) {
    auto [it, inserted] = r.try_emplace(c, ExactComplex());
    it->second -= f * v;
    if (it->second.is_zero()) r.erase(it);
  }
}

inline EchelonResult echelon(const SparseSystem& sys) {
  EchelonResult res;
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    SparseRow r = sys.rows[i];
    ExactComplex b = sys.rhs[i];
    while (!r.empty()) {
      auto pit = res.pivots.find(r.begin()->first);
      if (pit == res.pivots.end()) break;
      const auto& [prow, pb] = pit->second;
      ExactComplex f = r.begin()->second / prow.begin()->second;
      axpy(r, f, prow);
      b -= f * pb;
    }
    if (r.empty()) {
      if (!b.is_zero()) res.consistent = false;
      continue;
    }
    int lead = r.begin()->first;
    res.pivots.emplace(lead, std::make_pair(std::move(r), std::move(b)));
  }
  return res;
}

}  // namespace detail

/// Exact solve of a sparse system. Returns a solution (free unknowns set to 0)
/// or a left-null witness computed from the transposed system [A^T; b^T] y = [0; 1].
inline SolveResult solve_linear_exact(const SparseSystem& sys) {
  auto ech = detail::echelon(sys);
  if (ech.consistent) {
    Solution sol;
    sol.x.assign(static_cast<std::size_t>(sys.cols), ExactComplex());
    sol.rank = static_cast<int>(ech.pivots.size());
    for (auto it = ech.pivots.rbegin(); it != ech.pivots.rend(); ++it) {
      const auto& [row, b] = it->second;
      ExactComplex acc = b;
      for (auto c = std::next(row.begin()); c != row.end(); ++c) acc -= c->second * sol.x[c->first];
      sol.x[it->first] = acc / row.begin()->second;
    }
    return sol;
  }
  // Transposed system: unknowns y_i (one per row), equations per column of A plus b^T y = 1.
  SparseSystem t;
  t.cols = static_cast<int>(sys.rows.size());
  std::vector<SparseRow> by_col(static_cast<std::size_t>(sys.cols));
  for (std::size_t i = 0; i < sys.rows.size(); ++i)
    for (const auto& [c, v] : sys.rows[i]) by_col[c].emplace(static_cast<int>(i), v);
  for (auto& col : by_col)
    if (!col.empty()) t.add_row(std::move(col), ExactComplex());
  SparseRow brow;
  for (std::size_t i = 0; i < sys.rhs.size(); ++i)
    if (!sys.rhs[i].is_zero()) brow.emplace(static_cast<int>(i), sys.rhs[i]);
  // Put the normalisation row first so that it never becomes a dependent row.
  t.rows.insert(t.rows.begin(), std::move(brow));
  t.rhs.insert(t.rhs.begin(), ExactComplex(1));
  auto dual = solve_linear_exact(t);
  if (auto* s = std::get_if<Solution>(&dual)) return Infeasible{std::move(s->x)};
  throw std::logic_error("solve_linear_exact: Fredholm alternative violated");
}

/// Dense convenience overload. Shape mismatch is a usage error.
inline SolveResult solve_linear_exact(const std::vector<std::vector<ExactComplex>>& A,
                                      const std::vector<ExactComplex>& b) {
  if (A.size() != b.size()) throw std::invalid_argument("solve_linear_exact: row count mismatch");
  SparseSystem sys;
  sys.cols = A.empty() ? 0 : static_cast<int>(A.front().size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (static_cast<int>(A[i].size()) != sys.cols) throw std::invalid_argument("solve_linear_exact: ragged matrix");
    SparseRow r;
    for (int c = 0; c < sys.cols; ++c)
      if (!A[i][c].is_zero()) r.emplace(c, A[i][c]);
    sys.add_row(std::move(r), b[i]);
  }
  return solve_linear_exact(sys);
}

/// y^T A == 0 and y^T b != 0, exactly.
inline bool verify_witness(const SparseSystem& sys, const std::vector<ExactComplex>& y) {
  if (y.size() != sys.rows.size()) return false;
  SparseRow acc;
  ExactComplex yb;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i].is_zero()) continue;
    for (const auto& [c, v] : sys.rows[i]) {
      auto [it, ins] = acc.try_emplace(c, ExactComplex());
      it->second += y[i] * v;
      if (it->second.is_zero()) acc.erase(it);
    }
    yb += y[i] * sys.rhs[i];
  }
  return acc.empty() && !yb.is_zero();
}

/// A x - b == 0, exactly.
inline bool verify_solution(const SparseSystem& sys, const std::vector<ExactComplex>& x) {
  if (static_cast<int>(x.size()) != sys.cols) return false;
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    ExactComplex acc = -sys.rhs[i];
    for (const auto& [c, v] : sys.rows[i]) acc += v * x[c];
    if (!acc.is_zero()) return false;
  }
  return true;
}

}  // namespace kgal
