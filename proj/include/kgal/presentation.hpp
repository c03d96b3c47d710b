#pragma once

// Generator commutator tables written out from the defining relations, kept
// apart from the rewrite tables they are compared against.

#include "kgal/hopf.hpp"

namespace kgal {

namespace detail {

inline NCElement group_mono(std::initializer_list<Letter> ls, const ExactComplex& c, Policy p) {
  NCElement e(1, p);
  NCElement::Words w{};
  for (Letter l : ls) w[0].push_back(static_cast<char>(l));
  e.add_word(0, 0, w, c);
  return e;
}

inline int kron(int i, int j) { return i == j ? 1 : 0; }

}  // namespace detail

/// [x, y] in the group coordinate algebra.
inline NCElement expected_group_commutator(Letter x, Letter y, Policy p) {
  using detail::group_mono;
  const ExactComplex I = ExactComplex::i();
  NCElement out(1, p);
  auto L = [&](Letter z) { return NCElement::letter(z, p); };
  auto lam = [](NCElement e) { return e.scaled(GradedScalar::lambda()); };
  if (G::is_time(x) && (G::is_trans(y) || G::is_boost(y))) return lam(L(y).scaled(I));
  if (G::is_time(y) && (G::is_trans(x) || G::is_boost(x))) return lam(L(x).scaled(-I));
  if (G::is_boost(x) && G::is_trans(y)) {
    int i = G::index(x), j = G::index(y);
    NCElement vsq(1, p);
    for (int m = 1; m <= 3; ++m) vsq += group_mono({G::v(m), G::v(m)}, 1, p);
    NCElement e = vsq.scaled(ExactComplex(rational(detail::kron(i, j), 2))) - group_mono({G::v(i), G::v(j)}, 1, p);
    return lam(e.scaled(I));
  }
  if (G::is_trans(x) && G::is_boost(y)) return -expected_group_commutator(y, x, p);
  if (G::is_rot(x) && G::is_trans(y)) {
    int i = G::rot_row(x), j = G::rot_col(x), k = G::index(y);
    NCElement e(1, p);
    for (int m = 1; m <= 3; ++m) e += group_mono({G::v(m), G::R(m, j)}, detail::kron(i, k), p);
    e -= group_mono({G::v(i), G::R(k, j)}, 1, p);
    return lam(e.scaled(I));
  }
  if (G::is_trans(x) && G::is_rot(y)) return -expected_group_commutator(y, x, p);
  return out;
}

/// [X, Y] in the dual algebra.
inline DualElement expected_dual_commutator(Letter x, Letter y, Policy p) {
  const ExactComplex I = ExactComplex::i();
  DualElement out(1, p);
  auto dl = [&](Letter z) { return DualElement::letter(z, p); };
  auto rot_like = [](Letter z) { return D::is_J(z) || D::is_L(z) || D::is_P(z); };
  auto same_class = [](Letter z, int l) -> Letter {
    if (D::is_J(z)) return D::J(l);
    if (D::is_L(z)) return D::L(l);
    return D::P(l);
  };
  if (D::is_J(x) && rot_like(y)) {
    for (int l = 1; l <= 3; ++l)
      if (int e = levi_civita(D::index(x), D::index(y), l)) out += dl(same_class(y, l)).scaled(I * ExactComplex(e));
    return out;
  }
  if (D::is_J(y) && rot_like(x)) return -expected_dual_commutator(y, x, p);
  if (D::is_L(x) && D::is_H(y)) return dl(D::P(D::index(x))).scaled(I);
  if (D::is_H(x) && D::is_L(y)) return -expected_dual_commutator(y, x, p);
  if (D::is_L(x) && D::is_P(y)) {
    const int i = D::index(x), j = D::index(y);
    if (i == j)
      for (int m = 1; m <= 3; ++m) out += (dl(D::P(m)) * dl(D::P(m))).scaled(ExactComplex(0, rational(1, 2)));
    out -= (dl(D::P(i)) * dl(D::P(j))).scaled(I);
    return out.scaled(GradedScalar::lambda());
  }
  if (D::is_P(x) && D::is_L(y)) return -expected_dual_commutator(y, x, p);
  return out;
}

template <AlgebraTraits Alg, class Expected>
CheckReport commutator_table_check(std::string id, Policy p, Expected expected) {
  using E = Element<Alg>;
  ordered_json mismatches = ordered_json::array();
  int checked = 0;
  for (int x = 0; x < Alg::kLetters; ++x)
    for (int y = 0; y < Alg::kLetters; ++y) {
      auto got = commutator(E::letter(x, p), E::letter(y, p));
      ++checked;
      if (!(got == expected(x, y, p))) mismatches.push_back(Alg::name(x) + "," + Alg::name(y));
    }
  CheckReport r;
  r.check_id = std::move(id);
  r.param("N", std::to_string(p.N)).param("D", std::to_string(p.D));
  r.artifacts["entries"] = checked;
  r.artifacts["mismatches"] = mismatches;
  r.residual = std::to_string(mismatches.size());
  r.status = mismatches.empty() ? Status::Pass : Status::Fail;
  return r;
}

inline CheckReport group_presentation_check(Policy p = {2, 8}) {
  return commutator_table_check<GroupAlgebra>("presentation.group", p, expected_group_commutator);
}

inline CheckReport dual_presentation_check(Policy p = {2, 64}) {
  return commutator_table_check<DualAlgebra>("presentation.dual", p, expected_dual_commutator);
}

}  // namespace kgal
