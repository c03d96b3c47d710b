#pragma once

// Numeric realization of the contracted unitary representation in momentum
// space: generators as first-order differential operators with matrix-valued
// zeroth-order parts, their commutators evaluated pointwise, the finite group
// action, and generator extraction by differentiating that action.

#include "kgal/report.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgal::rep {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

inline constexpr cd I{0.0, 1.0};

inline double levi(int i, int j, int k) {  // 0-based
  return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
}

// ---------------------------------------------------------------------------
// Spin

struct SpinRep {
  int twice_s = 0;
  std::array<MatX, 3> S;

  int dim() const { return twice_s + 1; }
  double s() const { return twice_s / 2.0; }
  bool half_integer() const { return twice_s % 2 != 0; }
  MatX identity() const { return MatX::Identity(dim(), dim()); }
};

/// Standard basis |s,m>, m = s, s-1, ..., -s.
inline SpinRep make_spin(int twice_s) {
  if (twice_s < 0) throw std::invalid_argument("make_spin: negative spin");
  SpinRep r;
  r.twice_s = twice_s;
  const int n = twice_s + 1;
  const double s = twice_s / 2.0;
  MatX sp = MatX::Zero(n, n), sz = MatX::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    double m = s - a;
    sz(a, a) = m;
    if (a > 0) sp(a - 1, a) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  MatX sm = sp.adjoint();
  r.S[0] = (sp + sm) / 2.0;
  r.S[1] = (sp - sm) / (2.0 * I);
  r.S[2] = sz;
  return r;
}

/// max |[S_i,S_j] - i eps S_k| and |sum S_i^2 - s(s+1)|.
inline std::pair<double, double> spin_defects(const SpinRep& r) {
  double comm = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      MatX d = r.S[i] * r.S[j] - r.S[j] * r.S[i];
      for (int k = 0; k < 3; ++k) d -= I * levi(i, j, k) * r.S[k];
      comm = std::max(comm, d.cwiseAbs().maxCoeff());
    }
  MatX cas = r.S[0] * r.S[0] + r.S[1] * r.S[1] + r.S[2] * r.S[2] - r.s() * (r.s() + 1) * r.identity();
  return {comm, cas.cwiseAbs().maxCoeff()};
}

/// exp(-i theta n.S) for R = rotation by theta about n.
inline MatX spin_matrix(const SpinRep& r, const Mat3& R) {
  Eigen::AngleAxisd aa(R);
  MatX gen = MatX::Zero(r.dim(), r.dim());
  for (int k = 0; k < 3; ++k) gen += aa.axis()(k) * r.S[k];
  Eigen::SelfAdjointEigenSolver<MatX> es(gen);
  VecX ph = (-I * aa.angle() * es.eigenvalues().cast<cd>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// First-order operators  X = sum_m A_m(q) d/dq_m + B(q)

struct CoeffFn {
  std::function<cd(const Vec3&)> f;
  std::function<Vec3c(const Vec3&)> grad;  // optional

  Vec3c gradient(const Vec3& q, double h) const {
    if (grad) return grad(q);
    Vec3c g;
    for (int m = 0; m < 3; ++m) {
      Vec3 e = Vec3::Zero();
      e(m) = h;
      g(m) = (f(q + e) - f(q - e)) / (2 * h);
    }
    return g;
  }
};

struct MatFn {
  std::function<MatX(const Vec3&)> f;
  std::function<std::array<MatX, 3>(const Vec3&)> grad;  // optional

  std::array<MatX, 3> gradient(const Vec3& q, double h) const {
    if (grad) return grad(q);
    std::array<MatX, 3> g;
    for (int m = 0; m < 3; ++m) {
      Vec3 e = Vec3::Zero();
      e(m) = h;
      g[m] = (f(q + e) - f(q - e)) / (2 * h);
    }
    return g;
  }
};

/// Pointwise values of a first-order operator.
struct OpValue {
  Vec3c A;
  MatX B;
};

inline double distance(const OpValue& x, const OpValue& y) {
  return std::max((x.A - y.A).cwiseAbs().maxCoeff(), (x.B - y.B).cwiseAbs().maxCoeff());
}

struct FirstOrderOp {
  std::array<CoeffFn, 3> A;  // scalar times identity in spin space
  MatFn B;
  int dim = 1;
  double fd_step = 1e-5;  // used where a gradient is not attached

  OpValue at(const Vec3& q) const {
    OpValue v{Vec3c::Zero(), B.f(q)};
    for (int m = 0; m < 3; ++m) v.A(m) = A[m].f(q);
    return v;
  }

  /// (X f)(q) for a spin-valued f with Jacobian df[m] = d f / d q_m.
  VecX apply(const Vec3& q, const VecX& f, const std::array<VecX, 3>& df) const {
    VecX out = B.f(q) * f;
    for (int m = 0; m < 3; ++m) out += A[m].f(q) * df[m];
    return out;
  }

  FirstOrderOp without_gradients(double h) const {
    FirstOrderOp o = *this;
    for (auto& a : o.A) a.grad = nullptr;
    o.B.grad = nullptr;
    o.fd_step = h;
    return o;
  }
};

inline FirstOrderOp zero_op(int dim) {
  FirstOrderOp o;
  o.dim = dim;
  for (auto& a : o.A) a = {[](const Vec3&) { return cd(0); }, [](const Vec3&) { return Vec3c::Zero().eval(); }};
  o.B = {[dim](const Vec3&) { return MatX::Zero(dim, dim).eval(); },
         [dim](const Vec3&) { return std::array<MatX, 3>{MatX::Zero(dim, dim), MatX::Zero(dim, dim), MatX::Zero(dim, dim)}; }};
  return o;
}

/// [X,Y] = (A_X.dA_Y - A_Y.dA_X).d + A_X.dB_Y - A_Y.dB_X + [B_X,B_Y], pointwise.
/// The result carries no gradients; its own gradients fall back to central differences.
inline FirstOrderOp op_commutator(const FirstOrderOp& X, const FirstOrderOp& Y) {
  FirstOrderOp C;
  C.dim = X.dim;
  C.fd_step = X.fd_step;
  for (int m = 0; m < 3; ++m)
    C.A[m].f = [X, Y, m](const Vec3& q) {
      cd s = 0;
      for (int n = 0; n < 3; ++n)
        s += X.A[n].f(q) * Y.A[m].gradient(q, Y.fd_step)(n) - Y.A[n].f(q) * X.A[m].gradient(q, X.fd_step)(n);
      return s;
    };
  C.B.f = [X, Y](const Vec3& q) {
    MatX bx = X.B.f(q), by = Y.B.f(q);
    MatX s = bx * by - by * bx;
    auto gx = X.B.gradient(q, X.fd_step), gy = Y.B.gradient(q, Y.fd_step);
    for (int n = 0; n < 3; ++n) s += X.A[n].f(q) * gy[n] - Y.A[n].f(q) * gx[n];
    return s;
  };
  return C;
}

// ---------------------------------------------------------------------------
// Generators

struct Params {
  double M = 1;
  double k = 2;
  int twice_s = 0;
};

/// rho = 1 + q^2/(2Mk); throws at or beyond the excluded radius (k < 0).
inline double rho(const Vec3& q, double M, double k) {
  double r = 1 + q.squaredNorm() / (2 * M * k);
  if (!(r > 0)) throw std::domain_error("momentum outside the domain q^2 < -2Mk");
  return r;
}

/// k ln(1 + q^2/2Mk), accurate for large |k|.
inline double energy(const Vec3& q, double M, double k) {
  rho(q, M, k);
  return k * std::log1p(q.squaredNorm() / (2 * M * k));
}

struct Generators {
  SpinRep spin;
  Params p;
  std::array<FirstOrderOp, 3> J, L, P;
  FirstOrderOp H;
};

inline Generators build_generators(const Params& p) {
  if (p.k == 0) throw std::invalid_argument("build_generators: k must be nonzero");
  if (!(p.M > 0)) throw std::invalid_argument("build_generators: M must be positive");
  Generators g;
  g.p = p;
  g.spin = make_spin(p.twice_s);
  const int dim = g.spin.dim();
  const double M = p.M, k = p.k;
  auto scalar_B = [dim](std::function<double(const Vec3&)> f, std::function<Vec3(const Vec3&)> df) {
    MatFn b;
    b.f = [dim, f](const Vec3& q) { return (f(q) * MatX::Identity(dim, dim)).eval(); };
    b.grad = [dim, df](const Vec3& q) {
      Vec3 d = df(q);
      std::array<MatX, 3> out;
      for (int m = 0; m < 3; ++m) out[m] = d(m) * MatX::Identity(dim, dim);
      return out;
    };
    return b;
  };
  for (int kk = 0; kk < 3; ++kk) {
    // J_k = -i eps_klm q_l d_m + s_k
    auto& J = g.J[kk];
    J = zero_op(dim);
    for (int m = 0; m < 3; ++m)
      J.A[m] = {[kk, m](const Vec3& q) {
                  cd s = 0;
                  for (int l = 0; l < 3; ++l) s += -I * levi(kk, l, m) * q(l);
                  return s;
                },
                [kk, m](const Vec3&) {
                  Vec3c d;
                  for (int n = 0; n < 3; ++n) d(n) = -I * levi(kk, n, m);
                  return d;
                }};
    MatX S = g.spin.S[kk];
    J.B = {[S](const Vec3&) { return S; },
           [dim](const Vec3&) { return std::array<MatX, 3>{MatX::Zero(dim, dim), MatX::Zero(dim, dim), MatX::Zero(dim, dim)}; }};

    // L_k = i M d_k
    auto& L = g.L[kk];
    L = zero_op(dim);
    L.A[kk].f = [M](const Vec3&) { return I * M; };

    // P_k = q_k / rho
    g.P[kk] = zero_op(dim);
    g.P[kk].B = scalar_B([kk, M, k](const Vec3& q) { return q(kk) / rho(q, M, k); },
                         [kk, M, k](const Vec3& q) {
                           double r = rho(q, M, k);
                           Vec3 d = -q(kk) * q / (M * k * r * r);
                           d(kk) += 1 / r;
                           return d;
                         });
  }
  // H = k ln rho
  g.H = zero_op(dim);
  g.H.B = scalar_B([M, k](const Vec3& q) { return energy(q, M, k); },
                   [M, k](const Vec3& q) { return (q / (M * rho(q, M, k))).eval(); });
  return g;
}

inline Generators without_gradients(Generators g, double h) {
  for (auto* arr : {&g.J, &g.L, &g.P})
    for (auto& op : *arr) op = op.without_gradients(h);
  g.H = g.H.without_gradients(h);
  return g;
}

// ---------------------------------------------------------------------------
// Algebra check

struct AlgebraResult {
  std::vector<std::pair<std::string, double>> family_residuals;
  double max_residual = 0;
};

/// Every relation of the represented algebra, at one point q.
inline AlgebraResult algebra_residuals(const Generators& g, const Vec3& q) {
  const int dim = g.spin.dim();
  const double M = g.p.M, k = g.p.k;
  AlgebraResult res;
  auto family = [&](const std::string& name, auto&& body) {
    double worst = 0;
    body(worst);
    res.family_residuals.emplace_back(name, worst);
    res.max_residual = std::max(res.max_residual, worst);
  };
  auto comm_at = [&](const FirstOrderOp& x, const FirstOrderOp& y) { return op_commutator(x, y).at(q); };
  auto lin = [&](const std::array<FirstOrderOp, 3>& ops, Vec3c c) {
    OpValue v{Vec3c::Zero(), MatX::Zero(dim, dim)};
    for (int l = 0; l < 3; ++l) {
      auto o = ops[l].at(q);
      v.A += c(l) * o.A;
      v.B += c(l) * o.B;
    }
    return v;
  };
  auto eps_row = [](int i, int j) {
    Vec3c c;
    for (int l = 0; l < 3; ++l) c(l) = I * levi(i, j, l);
    return c;
  };
  auto scalar = [&](cd s) { return OpValue{Vec3c::Zero(), (s * MatX::Identity(dim, dim)).eval()}; };
  const OpValue zero = scalar(0);

  family("[J,J]", [&](double& w) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w = std::max(w, distance(comm_at(g.J[i], g.J[j]), lin(g.J, eps_row(i, j))));
  });
  family("[J,P]", [&](double& w) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w = std::max(w, distance(comm_at(g.J[i], g.P[j]), lin(g.P, eps_row(i, j))));
  });
  family("[J,K]", [&](double& w) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w = std::max(w, distance(comm_at(g.J[i], g.L[j]), lin(g.L, eps_row(i, j))));
  });
  family("[K,H]", [&](double& w) {
    for (int i = 0; i < 3; ++i) w = std::max(w, distance(comm_at(g.L[i], g.H), scalar(I * g.P[i].at(q).B(0, 0))));
  });
  const double e2 = std::exp(-2 * energy(q, M, k) / k);
  Vec3 Pq;
  for (int i = 0; i < 3; ++i) Pq(i) = g.P[i].at(q).B(0, 0).real();
  family("[K,P]", [&](double& w) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        cd rhs = I * M * (i == j ? e2 : 0.0) + (i == j ? I / (2 * k) * Pq.squaredNorm() : 0.0) - I / k * Pq(i) * Pq(j);
        w = std::max(w, distance(comm_at(g.L[i], g.P[j]), scalar(rhs)));
      }
  });
  family("[J,H]", [&](double& w) {
    for (int i = 0; i < 3; ++i) w = std::max(w, distance(comm_at(g.J[i], g.H), zero));
  });
  family("[K,K]", [&](double& w) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w = std::max(w, distance(comm_at(g.L[i], g.L[j]), zero));
  });
  family("[P,P]", [&](double& w) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w = std::max(w, distance(comm_at(g.P[i], g.P[j]), zero));
  });
  family("[H,P]", [&](double& w) {
    for (int i = 0; i < 3; ++i) w = std::max(w, distance(comm_at(g.H, g.P[i]), zero));
  });
  return res;
}

/// Uniform samples in the cube [-r, r]^3, restricted to the domain when k < 0.
inline std::vector<Vec3> sample_points(int n, std::uint64_t seed, double r = 1.0, std::optional<Params> domain = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<Vec3> out;
  while (static_cast<int>(out.size()) < n) {
    Vec3 q(u(rng), u(rng), u(rng));
    if (domain && 1 + q.squaredNorm() / (2 * domain->M * domain->k) < 0.1) continue;
    out.push_back(q);
  }
  return out;
}

/// [K_i,P_j] against the undeformed-mass algebraic sector (i/2k) delta P^2 - (i/k) P_i P_j.
inline double massless_sector_residual(double M, double k, const std::vector<Vec3>& qs) {
  auto g = build_generators({M, k, 0});
  double w = 0;
  for (const auto& q : qs) {
    Vec3 Pq;
    for (int i = 0; i < 3; ++i) Pq(i) = g.P[i].at(q).B(0, 0).real();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        cd rhs = (i == j ? I / (2 * k) * Pq.squaredNorm() : 0.0) - I / k * Pq(i) * Pq(j);
        w = std::max(w, std::abs(op_commutator(g.L[i], g.P[j]).at(q).B(0, 0) - rhs));
      }
  }
  return w;
}

struct AlgebraOptions {
  int samples = 100;
  std::uint64_t seed = 1;
  bool finite_differences = false;
  double h = 1e-5;
  double tol = -1;  // default: 1e-9 exact, 1e-6 finite differences
  double massless_M = 1e-8;
};

inline CheckReport check_algebra(const Params& p, const AlgebraOptions& opt = {}) {
  auto g = build_generators(p);
  if (opt.finite_differences) g = without_gradients(g, opt.h);
  const double tol = opt.tol > 0 ? opt.tol : (opt.finite_differences ? 1e-6 : 1e-9);
  CheckReport r;
  r.check_id = "rep.commutators";
  r.param("M", format_double(p.M)).param("k", format_double(p.k)).param("s", format_double(p.twice_s / 2.0));
  r.param("samples", std::to_string(opt.samples)).param("seed", std::to_string(opt.seed));
  r.param("gradients", opt.finite_differences ? "central-difference h=" + format_double(opt.h) : "exact");
  std::map<std::string, double> worst;
  double total = 0;
  auto qs = sample_points(opt.samples, opt.seed, 1.0, p);
  for (const auto& q : qs) {
    auto a = algebra_residuals(g, q);
    for (const auto& [name, v] : a.family_residuals) worst[name] = std::max(worst[name], v);
    total = std::max(total, a.max_residual);
  }
  ordered_json fam = ordered_json::object();
  for (const auto& [name, v] : worst) fam[name] = v;
  r.artifacts["families"] = fam;
  r.artifacts["boost_name"] = "L (the same operator is written K in the commutation rules)";
  double massless = massless_sector_residual(opt.massless_M, p.k, qs);
  r.artifacts["massless_sector"] = {{"M", opt.massless_M}, {"residual", massless}, {"tol", 1e-6}};
  if (g.spin.half_integer()) r.artifacts["scope"] = "half-integer spin: outside the integer-spin setting";
  r.residual = format_double(total);
  r.status = total < tol && massless < 1e-6 ? Status::Pass : Status::Fail;
  return r;
}

// ---------------------------------------------------------------------------
// Dispersion

struct DispersionForms {
  double printed;   // k(1 - e^{-H/k}) - P^2/2M
  double derived;   // k e^{-H/k}(1 - e^{-H/k}) - P^2/2M
  double momentum;  // k(e^{H/k} - 1) - q^2/2M
};

inline DispersionForms dispersion_forms(double M, double k, const Vec3& q) {
  double H = energy(q, M, k);
  double r = rho(q, M, k);
  double P2 = q.squaredNorm() / (r * r);
  double x = -std::expm1(-H / k);  // 1 - e^{-H/k}
  return {k * x - P2 / (2 * M), k * std::exp(-H / k) * x - P2 / (2 * M), k * std::expm1(H / k) - q.squaredNorm() / (2 * M)};
}

inline CheckReport dispersion_check(double M, double k, int samples, std::uint64_t seed = 1, double tol = 1e-12) {
  CheckReport r;
  r.check_id = "rep.dispersion";
  r.param("M", format_double(M)).param("k", format_double(k)).param("samples", std::to_string(samples));
  double derived = 0, momentum = 0, printed = 0;
  for (const auto& q : sample_points(samples, seed, 1.0, Params{M, k, 0})) {
    auto f = dispersion_forms(M, k, q);
    derived = std::max(derived, std::abs(f.derived));
    momentum = std::max(momentum, std::abs(f.momentum));
    printed = std::max(printed, std::abs(f.printed));
  }
  r.artifacts["derived_form"] = "P^2/2M = k e^{-H/k}(1 - e^{-H/k})";
  r.artifacts["derived_residual"] = derived;
  r.artifacts["momentum_form_residual"] = momentum;
  r.artifacts["printed_form_residual"] = printed;
  r.residual = format_double(std::max(derived, momentum));
  r.status = derived < tol && momentum < tol ? Status::Pass : Status::Fail;
  return r;
}

/// The form k(1 - e^{-H/k}) = P^2/2M fails on the representation; report-only evidence.
inline CheckReport dispersion_printed_probe(double M = 1, double k = 2, Vec3 q = Vec3(1, 0, 0)) {
  auto f = dispersion_forms(M, k, q);
  CheckReport r;
  r.check_id = "rep.dispersion.printed";
  r.param("M", format_double(M)).param("k", format_double(k));
  r.param("q", format_double(q(0)) + "," + format_double(q(1)) + "," + format_double(q(2)));
  r.status = Status::ReportOnly;
  r.residual = format_double(f.printed);
  r.artifacts["printed_form"] = "k(1 - e^{-H/k}) - P^2/2M";
  r.artifacts["derived_residual"] = f.derived;
  return r;
}

// ---------------------------------------------------------------------------
// Group action

struct GroupPointNR {
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  double t = 0;

  void validate() const {
    if ((R.transpose() * R - Mat3::Identity()).norm() > 1e-12 || R.determinant() <= 0)
      throw std::invalid_argument("GroupPointNR: R is not a proper rotation");
  }

  /// Galilei product: R'' = R R', v'' = v + R v', a'' = a + R a' + v t', t'' = t + t'.
  GroupPointNR operator*(const GroupPointNR& o) const {
    return {R * o.R, v + R * o.v, a + R * o.a + v * o.t, t + o.t};
  }
};

inline GroupPointNR rotation(const Vec3& axis, double angle) {
  return {Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(), Vec3::Zero(), Vec3::Zero(), 0};
}

/// Spin-valued test function with its Jacobian.
struct TestFunction {
  std::function<VecX(const Vec3&)> f;
  std::function<std::array<VecX, 3>(const Vec3&)> df;
  int dim = 1;
};

/// chi (1 + b.q + q^T C q) exp(-|q - c|^2 / 2 sigma^2), parameters drawn from `seed`.
inline TestFunction gaussian_test_function(int dim, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, 1);
  VecX chi(dim);
  for (int a = 0; a < dim; ++a) chi(a) = cd(n(rng), n(rng));
  chi /= chi.norm();
  Vec3 c(0.3 * n(rng), 0.3 * n(rng), 0.3 * n(rng));
  Vec3 b(0.3 * n(rng), 0.3 * n(rng), 0.3 * n(rng));
  Mat3 C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) C(i, j) = 0.1 * n(rng);
  C = (C + C.transpose()).eval() / 2;
  TestFunction t;
  t.dim = dim;
  auto env = [=](const Vec3& q) { return std::exp(-(q - c).squaredNorm() / (2 * sigma * sigma)); };
  t.f = [=](const Vec3& q) { return (chi * ((1 + b.dot(q) + q.dot(C * q)) * env(q))).eval(); };
  t.df = [=](const Vec3& q) {
    double poly = 1 + b.dot(q) + q.dot(C * q);
    Vec3 dpoly = b + 2 * C * q;
    Vec3 denv = -(q - c) / (sigma * sigma);
    std::array<VecX, 3> out;
    for (int m = 0; m < 3; ++m) out[m] = chi * ((dpoly(m) + poly * denv(m)) * env(q));
    return out;
  };
  return t;
}

/// (U(g) f)(q) = e^{-i k ln(1+q^2/2Mk) t} e^{-i q.a/(1+q^2/2Mk)} D(R) f(R^T (q + M v)).
inline VecX act(const GroupPointNR& g, const std::function<VecX(const Vec3&)>& f, const Vec3& q, const Params& p,
                const SpinRep& spin) {
  double r = rho(q, p.M, p.k);
  cd phase = std::exp(-I * (energy(q, p.M, p.k) * g.t + q.dot(g.a) / r));
  return phase * (spin_matrix(spin, g.R) * f(g.R.transpose() * (q + p.M * g.v)));
}

inline std::function<VecX(const Vec3&)> acted(const GroupPointNR& g, std::function<VecX(const Vec3&)> f, const Params& p,
                                              const SpinRep& spin) {
  return [g, f = std::move(f), p, spin](const Vec3& q) { return act(g, f, q, p, spin); };
}

// ---------------------------------------------------------------------------
// Quadrature

/// Gauss-Hermite nodes/weights for weight e^{-x^2} (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  Eigen::MatrixXd Jm = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) Jm(i, i - 1) = Jm(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Jm);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    w[i] = std::sqrt(M_PI) * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
  return {x, w};
}

/// Tensor grid for integrals over R^3 with nodes scaled by `scale`: sum w_i g(q_i) ~ int g.
struct Grid3 {
  std::vector<Vec3> q;
  std::vector<double> w;
};

inline Grid3 hermite_grid(int n, double scale) {
  auto [x, w] = gauss_hermite(n);
  Grid3 g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 node(x[i], x[j], x[k]);
        g.q.push_back(scale * node);
        g.w.push_back(w[i] * w[j] * w[k] * std::exp(node.squaredNorm()) * scale * scale * scale);
      }
  return g;
}

inline double l2_norm(const std::function<VecX(const Vec3&)>& f, const Grid3& g) {
  double s = 0;
  for (std::size_t i = 0; i < g.q.size(); ++i) s += g.w[i] * f(g.q[i]).squaredNorm();
  return std::sqrt(s);
}

inline CheckReport norm_preservation_check(const Params& p, const GroupPointNR& g, std::uint64_t seed, int nodes = 40,
                                           double scale = 1.5, double tol = 1e-8) {
  g.validate();
  auto spin = make_spin(p.twice_s);
  auto tf = gaussian_test_function(spin.dim(), seed);
  auto grid = hermite_grid(nodes, scale);
  double n0 = l2_norm(tf.f, grid), n1 = l2_norm(acted(g, tf.f, p, spin), grid);
  CheckReport r;
  r.check_id = "rep.unitarity";
  r.param("M", format_double(p.M)).param("k", format_double(p.k)).param("seed", std::to_string(seed));
  double defect = std::abs(n1 - n0) / n0;
  r.residual = format_double(defect);
  r.status = defect < tol ? Status::Pass : Status::Fail;
  return r;
}

// ---------------------------------------------------------------------------
// Generator extraction: X f = i d/de [U(exp e X) f] at e = 0.

enum class Direction { T, A1, A2, A3, V1, V2, V3, Rot1, Rot2, Rot3 };

inline std::string to_string(Direction d) {
  static const char* n[] = {"t", "a1", "a2", "a3", "v1", "v2", "v3", "rot1", "rot2", "rot3"};
  return n[static_cast<int>(d)];
}

inline GroupPointNR along(Direction d, double e) {
  GroupPointNR g;
  int i = static_cast<int>(d);
  if (d == Direction::T) g.t = e;
  else if (i <= 3) g.a(i - 1) = e;
  else if (i <= 6) g.v(i - 4) = e;
  else g = rotation(Vec3::Unit(i - 7), e);
  return g;
}

/// The generator each direction must reproduce: t -> H, a_k -> P_k, v_k -> +L_k, rot_k -> J_k.
inline const FirstOrderOp& generator_for(const Generators& g, Direction d) {
  int i = static_cast<int>(d);
  if (d == Direction::T) return g.H;
  if (i <= 3) return g.P[i - 1];
  if (i <= 6) return g.L[i - 4];
  return g.J[i - 7];
}

/// Richardson-extrapolated central differences over steps h, h/2, h/4, ...
inline VecX richardson_derivative(const std::function<VecX(double)>& F, double h, int levels) {
  std::vector<VecX> T;
  for (int l = 0; l < levels; ++l) {
    double s = h / std::pow(2.0, l);
    T.push_back((F(s) - F(-s)) / (2 * s));
  }
  for (int order = 1; order < levels; ++order) {
    double f = std::pow(4.0, order);
    for (int l = levels - 1; l >= order; --l) T[l] = (f * T[l] - T[l - 1]) / (f - 1);
  }
  return T.back();
}

struct ExtractOptions {
  double h = 1e-2;
  int levels = 4;
  int points = 20;
  std::uint64_t seed = 1;
  double tol = 1e-8;
};

inline CheckReport extract_generators(const Params& p, const ExtractOptions& opt = {}) {
  auto g = build_generators(p);
  auto tf = gaussian_test_function(g.spin.dim(), opt.seed);
  auto qs = sample_points(opt.points, opt.seed + 1, 1.0, p);
  CheckReport r;
  r.check_id = "rep.extract";
  r.param("M", format_double(p.M)).param("k", format_double(p.k)).param("s", format_double(p.twice_s / 2.0));
  r.param("h", format_double(opt.h)).param("levels", std::to_string(opt.levels));
  ordered_json dirs = ordered_json::object();
  double worst = 0;
  for (int di = 0; di < 10; ++di) {
    auto d = static_cast<Direction>(di);
    const auto& X = generator_for(g, d);
    double w = 0;
    for (const auto& q : qs) {
      VecX lhs = I * richardson_derivative([&](double e) { return act(along(d, e), tf.f, q, p, g.spin); }, opt.h, opt.levels);
      VecX rhs = X.apply(q, tf.f(q), tf.df(q));
      w = std::max(w, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    dirs[to_string(d)] = w;
    worst = std::max(worst, w);
  }
  r.artifacts["directions"] = dirs;
  r.artifacts["convention"] = "X f = i d/de U(e) f; v_k gives +L_k, rotation about e_k by +e gives J_k";
  r.residual = format_double(worst);
  r.status = worst < opt.tol ? Status::Pass : Status::Fail;
  return r;
}

// ---------------------------------------------------------------------------
// Composition: U(g)U(g') = w(g,g') U(g g') classically, up to O(1/k) at finite k.

/// The multiplier phase at points: exp(-i k ln(1+Mv^2/2k) t') exp(-i M v.R a' / (1+Mv^2/2k)).
inline cd multiplier_phase(const GroupPointNR& g, const GroupPointNR& h, double M, double k) {
  double u = M * g.v.squaredNorm() / (2 * k);
  return std::exp(-I * (k * std::log1p(u) * h.t + M * g.v.dot(g.R * h.a) / (1 + u)));
}

inline double composition_defect(const Params& p, const GroupPointNR& g, const GroupPointNR& h, std::uint64_t seed = 1,
                                 int nodes = 24) {
  g.validate();
  h.validate();
  auto spin = make_spin(p.twice_s);
  auto tf = gaussian_test_function(spin.dim(), seed);
  auto grid = hermite_grid(nodes, 1.5);
  auto lhs = acted(g, acted(h, tf.f, p, spin), p, spin);
  auto rhs = acted(g * h, tf.f, p, spin);
  cd w = multiplier_phase(g, h, p.M, p.k);
  auto diff = [&](const Vec3& q) { return (lhs(q) - w * rhs(q)).eval(); };
  return l2_norm(diff, grid) / l2_norm(tf.f, grid);
}

struct ConvergenceReport {
  std::vector<double> ks;
  std::vector<double> defects;
  double slope = 0;
};

/// Least-squares slope of log(defect) against log(k).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline ConvergenceReport composition_ramp(const Params& p, const GroupPointNR& g, const GroupPointNR& h,
                                          const std::vector<double>& ks, std::uint64_t seed = 1) {
  ConvergenceReport c;
  c.ks = ks;
  for (double k : ks) c.defects.push_back(composition_defect({p.M, k, p.twice_s}, g, h, seed));
  bool all_positive = std::all_of(c.defects.begin(), c.defects.end(), [](double d) { return d > 0; });
  c.slope = all_positive ? loglog_slope(c.ks, c.defects) : 0;
  return c;
}

inline CheckReport composition_check(const Params& p, const GroupPointNR& g, const GroupPointNR& h,
                                     const std::vector<double>& ks = {1e1, 1e2, 1e3, 1e4, 1e5}, std::uint64_t seed = 1) {
  auto c = composition_ramp(p, g, h, ks, seed);
  double classical = composition_defect({p.M, 1e8, p.twice_s}, g, h, seed);
  CheckReport r;
  r.check_id = "rep.compose";
  r.param("M", format_double(p.M)).param("s", format_double(p.twice_s / 2.0));
  r.artifacts["k"] = c.ks;
  r.artifacts["defect"] = c.defects;
  r.artifacts["slope"] = c.slope;
  r.artifacts["classical_defect_k1e8"] = classical;
  r.residual = format_double(classical);
  r.status = classical < 1e-7 && std::abs(c.slope + 1) <= 0.3 ? Status::Pass : Status::Fail;
  return r;
}

}  // namespace kgal::rep
