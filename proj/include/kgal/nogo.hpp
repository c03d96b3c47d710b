#pragma once

// Obstruction to lifting the Galilei central extension: the 2-cochain
// beta = M/2 v^2 (x) tau + M v^k R^k_i (x) a^i is not the coboundary
// Delta(X) - X (x) 1 - 1 (x) X of any polynomial X of bounded degree.
// All systems are assembled and solved exactly; certificates are left-null
// vectors keyed by readable row labels so they can be replayed independently.

#include "kgal/multiplier.hpp"

#include <numeric>
#include <optional>
#include <variant>

namespace kgal {

namespace detail {
inline Word letters(std::initializer_list<Letter> ls) {
  Word w;
  for (Letter l : ls) w.push_back(static_cast<char>(l));
  return w;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Commutative (classical) group algebra: lambda^0 with every commutator dropped.

/// Polynomial in the commuting generators a, v, R, tau of one or more slots.
/// A key holds one sorted letter multiset per slot.
class ClassicalElement {
 public:
  using Key = std::vector<Word>;

  ClassicalElement() = default;
  explicit ClassicalElement(int slots) : slots_(slots) {}

  static ClassicalElement one(int slots) {
    ClassicalElement e(slots);
    e.add(Key(static_cast<std::size_t>(slots)), ExactComplex(1));
    return e;
  }
  static ClassicalElement monomial(int slots, Key k, const ExactComplex& c = ExactComplex(1)) {
    ClassicalElement e(slots);
    for (auto& w : k) std::sort(w.begin(), w.end());
    e.add(k, c);
    return e;
  }

  int slots() const { return slots_; }
  const std::map<Key, ExactComplex>& terms() const& { return terms_; }
  const std::map<Key, ExactComplex>& terms() const&& = delete;  // would dangle in range-for
  bool is_zero() const { return terms_.empty(); }

  void add(const Key& k, const ExactComplex& c) {
    if (c.is_zero()) return;
    auto [it, ins] = terms_.try_emplace(k, c);
    if (!ins) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  ExactComplex coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? ExactComplex() : it->second;
  }

  ClassicalElement& operator+=(const ClassicalElement& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  ClassicalElement& operator-=(const ClassicalElement& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  friend ClassicalElement operator+(ClassicalElement a, const ClassicalElement& b) { return a += b; }
  friend ClassicalElement operator-(ClassicalElement a, const ClassicalElement& b) { return a -= b; }
  ClassicalElement scaled(const ExactComplex& s) const {
    ClassicalElement out(slots_);
    for (const auto& [k, c] : terms_) out.add(k, c * s);
    return out;
  }

  friend ClassicalElement operator*(const ClassicalElement& a, const ClassicalElement& b) {
    ClassicalElement out(a.slots_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        Key k(ka.size());
        for (std::size_t s = 0; s < k.size(); ++s) std::merge(ka[s].begin(), ka[s].end(), kb[s].begin(), kb[s].end(), std::back_inserter(k[s]));
        out.add(k, ca * cb);
      }
    return out;
  }

  friend bool operator==(const ClassicalElement& a, const ClassicalElement& b) { return a.terms_ == b.terms_; }

  static std::string key_str(const Key& k) {
    std::string out;
    for (std::size_t s = 0; s < k.size(); ++s) {
      if (s) out += " | ";
      if (k[s].empty()) out += "1";
      for (std::size_t i = 0; i < k[s].size(); ++i) out += (i ? " " : "") + G::name(static_cast<Letter>(k[s][i]));
    }
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + c.str() + ") " + key_str(k);
    }
    return out;
  }

 private:
  int slots_ = 1;
  std::map<Key, ExactComplex> terms_;
};

/// Normal form modulo R^T R - I, R R^T - I in every slot.
inline ClassicalElement reduce_orthogonality(const ClassicalElement& e) {
  int need = 2;
  for (const auto& [k, c] : e.terms())
    for (const auto& w : k) need = std::max<int>(need, std::count_if(w.begin(), w.end(), [](char x) { return G::is_rot(static_cast<Letter>(x)); }));
  const auto& nf = OrthoNormalForm::instance(need);
  ClassicalElement out(e.slots());
  for (const auto& [k, c] : e.terms()) {
    std::vector<std::pair<ClassicalElement::Key, Rational>> acc{{ClassicalElement::Key(k.size()), Rational(1)}};
    for (std::size_t s = 0; s < k.size(); ++s) {
      Word rest, rot;
      for (char x : k[s]) (G::is_rot(static_cast<Letter>(x)) ? rot : rest).push_back(G::is_rot(static_cast<Letter>(x)) ? static_cast<char>(x - 6) : x);
      std::vector<std::pair<ClassicalElement::Key, Rational>> next;
      for (const auto& [ak, ac] : acc)
        for (const auto& [rm, rc] : nf.reduce(rot)) {
          auto nk = ak;
          nk[s] = rest;
          for (char v : rm) nk[s].push_back(static_cast<char>(v + 6));
          std::sort(nk[s].begin(), nk[s].end());
          next.emplace_back(std::move(nk), ac * rc);
        }
      acc = std::move(next);
    }
    for (const auto& [ak, ac] : acc) out.add(ak, c * ExactComplex(ac));
  }
  return out;
}

/// Classical coproduct of a single-slot monomial (same formulas, commuting product).
class ClassicalCoproduct {
 public:
  const ClassicalElement& operator()(const Word& m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    ClassicalElement r = m.empty() ? ClassicalElement::one(2) : letter(static_cast<Letter>(m[0])) * (*this)(m.substr(1));
    return memo_.emplace(m, std::move(r)).first->second;
  }

  static ClassicalElement letter(Letter x) {
    ClassicalElement out(2);
    // Policy is irrelevant: the group coproduct is lambda-free and degree-preserving.
    group_coproduct_letter(x, Policy{0, 64}).for_each_term([&](const auto& t) {
      ClassicalElement::Key k{t.words[0], t.words[1]};
      for (auto& w : k) std::sort(w.begin(), w.end());
      out.add(k, t.coeff);
    });
    return out;
  }

 private:
  std::map<Word, ClassicalElement> memo_;
};

/// delta X = Delta(X) - X (x) 1 - 1 (x) X, reduced.
inline ClassicalElement classical_coboundary(const ClassicalElement& x) {
  ClassicalCoproduct cop;
  ClassicalElement out(2);
  for (const auto& [k, c] : x.terms()) {
    out += cop(k[0]).scaled(c);
    out.add({k[0], Word{}}, -c);
    out.add({Word{}, k[0]}, -c);
  }
  return reduce_orthogonality(out);
}

/// M/2 v^m v^m (x) tau + M v^k R^k_i (x) a^i at M = 1 (beta is homogeneous of degree one in M).
inline ClassicalElement build_beta() {
  ClassicalElement b(2);
  for (int m = 1; m <= 3; ++m)
    b += ClassicalElement::monomial(2, {detail::letters({G::v(m), G::v(m)}), detail::letters({G::tau()})}, ExactComplex(rational(1, 2)));
  for (int k = 1; k <= 3; ++k)
    for (int i = 1; i <= 3; ++i) b += ClassicalElement::monomial(2, {detail::letters({G::v(k), G::R(k, i)}), detail::letters({G::a(i)})});
  return reduce_orthogonality(b);
}

/// 2 R^i_k v^i (x) v^k: the coboundary of v^m v^m.
inline ClassicalElement positive_control_target() {
  ClassicalElement t(2);
  for (int i = 1; i <= 3; ++i)
    for (int k = 1; k <= 3; ++k) t += ClassicalElement::monomial(2, {detail::letters({G::R(i, k), G::v(i)}), detail::letters({G::v(k)})}, ExactComplex(2));
  return reduce_orthogonality(t);
}

/// Sorted letter multisets over all 16 generators of total length 1..D (constants are
/// primitive-free: delta(1) = -1 (x) 1, so they are included too).
inline std::vector<Word> classical_monomials(int D) {
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (int d = 1; d <= D; ++d) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      int start = w.empty() ? 0 : static_cast<unsigned char>(w.back());
      for (int l = start; l < G::kLetters; ++l) next.push_back(w + static_cast<char>(l));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linear systems keyed by readable row labels

struct LabelledSystem {
  SparseSystem sys;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

struct CoboundarySolution {
  std::vector<ExactComplex> x;
  int rank = -1;  // -1 when not computed
};

struct CoboundaryInfeasible {
  std::vector<ExactComplex> witness;  // indexed like the system rows
};

using CoboundaryOutcome = std::variant<CoboundarySolution, CoboundaryInfeasible>;

namespace detail {

/// Column-major assembly: cols[j] maps row label -> coefficient; rhs maps row label -> value.
inline LabelledSystem assemble(const std::vector<std::string>& col_labels,
                               const std::vector<std::map<std::string, ExactComplex>>& cols,
                               const std::map<std::string, ExactComplex>& rhs) {
  LabelledSystem L;
  L.col_labels = col_labels;
  std::map<std::string, int> row_of;
  auto row = [&](const std::string& label) {
    auto [it, ins] = row_of.try_emplace(label, static_cast<int>(L.row_labels.size()));
    if (ins) L.row_labels.push_back(label);
    return it->second;
  };
  for (const auto& c : cols)
    for (const auto& [lab, v] : c) row(lab);
  for (const auto& [lab, v] : rhs) row(lab);
  L.sys.cols = static_cast<int>(cols.size());
  std::vector<SparseRow> rows(L.row_labels.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [lab, v] : cols[j]) rows[row_of.at(lab)].emplace(static_cast<int>(j), v);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = rhs.find(L.row_labels[i]);
    L.sys.add_row(std::move(rows[i]), it == rhs.end() ? ExactComplex() : it->second);
  }
  return L;
}

/// Solves by connected components of the column/row incidence graph. Components with zero
/// right-hand side are skipped unless `want_rank`.
inline CoboundaryOutcome solve_by_components(const SparseSystem& sys, bool want_rank) {
  const int R = static_cast<int>(sys.rows.size());
  std::vector<int> parent(static_cast<std::size_t>(sys.cols + R));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < R; ++i)
    for (const auto& [c, v] : sys.rows[i]) parent[find(sys.cols + i)] = find(c);
  std::map<int, std::vector<int>> comp_rows;
  for (int i = 0; i < R; ++i) comp_rows[find(sys.cols + i)].push_back(i);

  CoboundarySolution sol;
  sol.x.assign(static_cast<std::size_t>(sys.cols), ExactComplex());
  sol.rank = want_rank ? 0 : -1;
  for (const auto& [root, rows] : comp_rows) {
    bool homogeneous = std::all_of(rows.begin(), rows.end(), [&](int i) { return sys.rhs[i].is_zero(); });
    if (homogeneous && !want_rank) continue;
    // Local column numbering.
    std::map<int, int> local;
    for (int i : rows)
      for (const auto& [c, v] : sys.rows[i]) local.try_emplace(c, static_cast<int>(local.size()));
    SparseSystem sub;
    sub.cols = static_cast<int>(local.size());
    for (int i : rows) {
      SparseRow r;
      for (const auto& [c, v] : sys.rows[i]) r.emplace(local.at(c), v);
      sub.add_row(std::move(r), sys.rhs[i]);
    }
    auto res = solve_linear_exact(sub);
    if (auto* inf = std::get_if<Infeasible>(&res)) {
      CoboundaryInfeasible out;
      out.witness.assign(static_cast<std::size_t>(R), ExactComplex());
      for (std::size_t k = 0; k < rows.size(); ++k) out.witness[rows[k]] = inf->witness[k];
      return out;
    }
    const auto& s = std::get<Solution>(res);
    for (const auto& [g, l] : local) sol.x[g] = s.x[l];
    if (want_rank) sol.rank += s.rank;
  }
  return sol;
}

inline std::string rational_json(const Rational& q) { return q.get_str(); }

}  // namespace detail

/// Witness as {row label: [re, im]} over its nonzero entries.
inline ordered_json witness_to_json(const LabelledSystem& L, const std::vector<ExactComplex>& y) {
  ordered_json j = ordered_json::object();
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!y[i].is_zero()) j[L.row_labels[i]] = {y[i].re().get_str(), y[i].im().get_str()};
  return j;
}

/// Replays a serialized witness against an independently assembled system:
/// y^T A == 0 and y^T b != 0 exactly. Unknown row labels invalidate the witness.
inline bool replay_witness(const LabelledSystem& L, const ordered_json& w) {
  std::map<std::string, int> row_of;
  for (std::size_t i = 0; i < L.row_labels.size(); ++i) row_of.emplace(L.row_labels[i], static_cast<int>(i));
  std::vector<ExactComplex> y(L.row_labels.size());
  for (const auto& [label, v] : w.items()) {
    auto it = row_of.find(label);
    if (it == row_of.end()) return false;
    Rational re(v.at(0).get<std::string>()), im(v.at(1).get<std::string>());
    re.canonicalize();
    im.canonicalize();
    y[it->second] = ExactComplex(re, im);
  }
  return verify_witness(L.sys, y);
}

// ---------------------------------------------------------------------------
// Classical coboundary problem

struct CoboundaryProblem {
  ClassicalElement target;
  int D = 1;
  std::vector<Word> unknowns;
  LabelledSystem system;
};

/// Assembles delta X = target over all monomials of length <= D, reduced modulo orthogonality.
inline CoboundaryProblem assemble_coboundary(const ClassicalElement& target, int D) {
  if (D < 1) throw std::invalid_argument("coboundary: need D >= 1");
  CoboundaryProblem P;
  P.target = reduce_orthogonality(target);
  P.D = D;
  P.unknowns = classical_monomials(D);
  ClassicalCoproduct cop;
  std::vector<std::string> col_labels;
  std::vector<std::map<std::string, ExactComplex>> cols;
  for (const auto& m : P.unknowns) {
    ClassicalElement d = cop(m);
    d.add({m, Word{}}, -1);
    d.add({Word{}, m}, -1);
    std::map<std::string, ExactComplex> col;
    const auto red = reduce_orthogonality(d);
    for (const auto& [k, c] : red.terms()) col.emplace(ClassicalElement::key_str(k), c);
    col_labels.push_back(ClassicalElement::key_str({m}));
    cols.push_back(std::move(col));
  }
  std::map<std::string, ExactComplex> rhs;
  for (const auto& [k, c] : P.target.terms()) rhs.emplace(ClassicalElement::key_str(k), c);
  P.system = detail::assemble(col_labels, cols, rhs);
  return P;
}

struct CoboundaryResult {
  CoboundaryProblem problem;
  CoboundaryOutcome outcome;

  bool infeasible() const { return std::holds_alternative<CoboundaryInfeasible>(outcome); }

  /// X from a solution (empty when infeasible).
  ClassicalElement solution() const {
    ClassicalElement x(1);
    if (auto* s = std::get_if<CoboundarySolution>(&outcome))
      for (std::size_t j = 0; j < s->x.size(); ++j) x.add({problem.unknowns[j]}, s->x[j]);
    return reduce_orthogonality(x);
  }
};

inline CoboundaryResult coboundary_solve(const ClassicalElement& target, int D, bool want_rank = false) {
  CoboundaryResult r{assemble_coboundary(target, D), {}};
  r.outcome = detail::solve_by_components(r.problem.system.sys, want_rank);
  return r;
}

inline CoboundaryResult coboundary_solve(int D) { return coboundary_solve(build_beta(), D); }

/// CheckReport: pass iff infeasible with a witness that replays against a fresh assembly.
inline CheckReport nogo_report(int D) {
  auto r = coboundary_solve(D);
  CheckReport rep;
  rep.check_id = "nogo.coboundary";
  rep.param("D", std::to_string(D));
  rep.artifacts["unknowns"] = r.problem.unknowns.size();
  rep.artifacts["equations"] = r.problem.system.row_labels.size();
  rep.artifacts["scope"] = "evidence at degree <= " + std::to_string(D);
  if (auto* inf = std::get_if<CoboundaryInfeasible>(&r.outcome)) {
    auto w = witness_to_json(r.problem.system, inf->witness);
    bool replays = replay_witness(assemble_coboundary(build_beta(), D).system, w);
    rep.artifacts["result"] = "infeasible";
    rep.artifacts["witness_replays"] = replays;
    rep.artifacts["witness"] = w;
    rep.status = replays ? Status::Pass : Status::Fail;
    rep.residual = "0";
  } else {
    rep.artifacts["result"] = "solution";
    rep.artifacts["X"] = r.solution().str();
    rep.status = Status::Fail;
    rep.residual = "coboundary exists";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quantum version: Delta(X) = w^-1 (X (x) 1) w + w^-1 (1 (x) X) w + g beta, graded in lambda and M.
//
// X = sum_{l <= n, j <= J} lambda^l M^j X_lj with X_lj spanned by words of length <= D.
// Every M in the multiplier sits on two slot-1 letters, so with slot bound D + 2J all terms
// of M-grade <= J are exact; equations are collected at lambda-grade <= n and M-grade <= J.

struct QuantumObstruction {
  LabelledSystem system;
  CoboundaryOutcome outcome;
  int n = 0, D = 1, J = 1;
};

inline QuantumObstruction quantum_obstruction_solve(int n, int D, bool zero_beta = false) {
  if (n < 0 || n > 1) throw std::invalid_argument("quantum_obstruction: order must be 0 or 1");
  if (D < 1) throw std::invalid_argument("quantum_obstruction: need D >= 1");
  const int J = n + 1;
  const Policy p{n, D + 2 * J};
  auto w = build_omega(p).body;
  auto winv = w.star();
  auto label = [](int l, int j, const NCElement::Words& ws) {
    ClassicalElement::Key k{ws[0], ws[1]};
    return "lambda^" + std::to_string(l) + " M^" + std::to_string(j) + " : " + ClassicalElement::key_str(k);
  };
  auto keep = [&](const NCElement& e) { return e.filtered([&](const auto& t) { return t.lambda <= n && t.mass <= J; }); };

  QuantumObstruction Q;
  Q.n = n;
  Q.D = D;
  Q.J = J;
  std::vector<std::string> col_labels;
  std::vector<std::map<std::string, ExactComplex>> cols;
  for (const auto& m : classical_monomials(D)) {
    NCElement x(1, p);
    x.add_word(0, 0, NCElement::Words{m}, ExactComplex(1));
    auto lhs = coproduct_group(x) - winv * x.embedded(2, 0) * w - winv * x.embedded(2, 1) * w;
    auto base = reduce_orthogonality(lhs);
    for (int l = 0; l <= n; ++l)
      for (int j = 0; j <= J; ++j) {
        auto shifted = keep(base.scaled(GradedScalar(ExactComplex(1), l, j)));
        std::map<std::string, ExactComplex> col;
        shifted.for_each_term([&](const auto& t) { col.emplace(label(t.lambda, t.mass, t.words), t.coeff); });
        col_labels.push_back("lambda^" + std::to_string(l) + " M^" + std::to_string(j) + " " + ClassicalElement::key_str({m}));
        cols.push_back(std::move(col));
      }
  }
  std::map<std::string, ExactComplex> rhs;
  if (!zero_beta) {
    auto src = keep(reduce_orthogonality(detail::geometric_factor(p) * detail::beta_element(p)));
    src.for_each_term([&](const auto& t) { rhs.emplace(label(t.lambda, t.mass, t.words), t.coeff); });
  }
  Q.system = detail::assemble(col_labels, cols, rhs);
  Q.outcome = detail::solve_by_components(Q.system.sys, false);
  return Q;
}

/// Order 0 is asserted (it is the classical problem); order 1 is exploratory and report-only.
inline CheckReport quantum_obstruction(int n, int D) {
  auto q = quantum_obstruction_solve(n, D);
  CheckReport rep;
  rep.check_id = "nogo.quantum";
  rep.param("order", std::to_string(n)).param("D", std::to_string(D));
  rep.artifacts["unknowns"] = q.system.sys.cols;
  rep.artifacts["equations"] = q.system.row_labels.size();
  bool infeasible = std::holds_alternative<CoboundaryInfeasible>(q.outcome);
  rep.artifacts["result"] = infeasible ? "infeasible" : "solution";
  if (infeasible) {
    const auto& y = std::get<CoboundaryInfeasible>(q.outcome).witness;
    rep.artifacts["witness_replays"] = verify_witness(q.system.sys, y);
    rep.artifacts["witness"] = witness_to_json(q.system, y);
  }
  if (n == 0)
    rep.status = infeasible && rep.artifacts["witness_replays"].get<bool>() ? Status::Pass : Status::Fail;
  else
    rep.status = Status::ReportOnly;
  rep.residual = infeasible ? "0" : "coboundary exists";
  return rep;
}

}  // namespace kgal
