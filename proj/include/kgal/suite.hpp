#pragma once

// Suite runner: named check groups, a serializable configuration and a
// deterministic, ordered report list.

#include "kgal/contraction.hpp"
#include "kgal/multiplier.hpp"
#include "kgal/nogo.hpp"
#include "kgal/presentation.hpp"
#include "kgal/replab.hpp"
#include "kgal/report.hpp"

#include <functional>
#include <future>
#include <set>
#include <string>
#include <vector>

namespace kgal {

inline const std::vector<std::string>& suite_groups() {
  static const std::vector<std::string> g{"hopf", "cocycle", "nogo", "rep", "contract", "appendix"};
  return g;
}

struct RepParamSet {
  double M = 1;
  double k = 2;
};

struct SuiteConfig {
  // Exact algebra
  int N = 2;
  int D = 6;
  int dual_max_grade = 4;
  std::vector<Policy> cocycle_policies{{1, 4}, {2, 5}};
  int nogo_max_degree = 4;
  int quantum_degree = 1;

  // Numerics
  std::uint64_t seed = 1;
  int samples = 100;
  std::vector<RepParamSet> rep_params{{1, 2}, {1, 10}, {0.5, 1}};
  std::vector<int> twice_spins{0, 2};
  double rep_tol = 1e-9;
  double dispersion_tol = 1e-12;
  double extract_tol = 1e-8;

  // Contraction
  double contract_M = 1;
  double contract_k = -1;
  std::array<double, 3> contract_v{0.1, 0, 0};
  std::array<double, 3> contract_q{1, 0, 0};
  std::string c_grid = "1e1:1e6:11";
  int appendix_samples = 20;
  bool complex_mass = false;

  std::vector<std::string> groups = suite_groups();

  void validate() const {
    if (N < 0 || D < 1) throw std::invalid_argument("config: need N >= 0 and D >= 1");
    if (nogo_max_degree < 1) throw std::invalid_argument("config: nogo_max_degree must be >= 1");
    if (samples < 1 || appendix_samples < 1) throw std::invalid_argument("config: sample counts must be positive");
    for (const auto& g : groups)
      if (std::find(suite_groups().begin(), suite_groups().end(), g) == suite_groups().end())
        throw std::invalid_argument("config: unknown group '" + g + "'");
    for (const auto& p : rep_params)
      if (!(p.M > 0) || p.k == 0) throw std::invalid_argument("config: rep parameters need M > 0, k != 0");
    contract::parse_grid(c_grid);
  }
};

inline void to_json(ordered_json& j, const SuiteConfig& c) {
  ordered_json pols = ordered_json::array();
  for (auto p : c.cocycle_policies) pols.push_back({p.N, p.D});
  ordered_json reps = ordered_json::array();
  for (auto p : c.rep_params) reps.push_back({p.M, p.k});
  j = ordered_json{{"N", c.N},
                   {"D", c.D},
                   {"dual_max_grade", c.dual_max_grade},
                   {"cocycle_policies", pols},
                   {"nogo_max_degree", c.nogo_max_degree},
                   {"quantum_degree", c.quantum_degree},
                   {"seed", c.seed},
                   {"samples", c.samples},
                   {"rep_params", reps},
                   {"twice_spins", c.twice_spins},
                   {"rep_tol", c.rep_tol},
                   {"dispersion_tol", c.dispersion_tol},
                   {"extract_tol", c.extract_tol},
                   {"contract_M", c.contract_M},
                   {"contract_k", c.contract_k},
                   {"contract_v", c.contract_v},
                   {"contract_q", c.contract_q},
                   {"c_grid", c.c_grid},
                   {"appendix_samples", c.appendix_samples},
                   {"complex_mass", c.complex_mass},
                   {"groups", c.groups}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline SuiteConfig config_from_json(const ordered_json& j) {
  SuiteConfig c;
  ordered_json defaults;
  to_json(defaults, c);
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (!defaults.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("N", c.N);
  get("D", c.D);
  get("dual_max_grade", c.dual_max_grade);
  if (j.contains("cocycle_policies")) {
    c.cocycle_policies.clear();
    for (const auto& p : j.at("cocycle_policies")) c.cocycle_policies.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
  }
  get("nogo_max_degree", c.nogo_max_degree);
  get("quantum_degree", c.quantum_degree);
  get("seed", c.seed);
  get("samples", c.samples);
  if (j.contains("rep_params")) {
    c.rep_params.clear();
    for (const auto& p : j.at("rep_params")) c.rep_params.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  get("twice_spins", c.twice_spins);
  get("rep_tol", c.rep_tol);
  get("dispersion_tol", c.dispersion_tol);
  get("extract_tol", c.extract_tol);
  get("contract_M", c.contract_M);
  get("contract_k", c.contract_k);
  get("contract_v", c.contract_v);
  get("contract_q", c.contract_q);
  get("c_grid", c.c_grid);
  get("appendix_samples", c.appendix_samples);
  get("complex_mass", c.complex_mass);
  get("groups", c.groups);
  c.validate();
  return c;
}

/// Folds many sub-checks into one report listing the failures.
inline CheckReport aggregate(std::string id, const std::vector<CheckReport>& parts,
                             std::vector<std::pair<std::string, std::string>> params = {}) {
  CheckReport r;
  r.check_id = std::move(id);
  r.params = std::move(params);
  ordered_json failed = ordered_json::array();
  for (const auto& p : parts)
    if (p.failed()) failed.push_back({{"check_id", p.check_id}, {"residual", p.residual}, {"artifacts", p.artifacts}});
  r.artifacts["checked"] = parts.size();
  r.artifacts["failed"] = failed;
  r.residual = std::to_string(failed.size());
  r.status = failed.empty() ? Status::Pass : Status::Fail;
  return r;
}

// ---------------------------------------------------------------------------
// Groups

inline std::vector<CheckReport> hopf_reports(const SuiteConfig& c) {
  const Policy gp{c.N, c.D};
  std::vector<CheckReport> out{group_presentation_check(), dual_presentation_check()};
  std::vector<CheckReport> counit, coassoc, hom, dual;
  for (int g = 0; g < G::kLetters; ++g) {
    counit.push_back(counit_axiom_check(g, gp));
    coassoc.push_back(coassociativity_check_group(g, gp));
    for (int y = g + 1; y < G::kLetters; ++y) hom.push_back(relation_hom_check_group(g, y, gp));
  }
  auto pol = std::vector<std::pair<std::string, std::string>>{{"N", std::to_string(c.N)}, {"D", std::to_string(c.D)}};
  out.push_back(aggregate("hopf.group.counit", counit, pol));
  out.push_back(aggregate("hopf.group.coassociativity", coassoc, pol));
  out.push_back(aggregate("hopf.group.homomorphism", hom, pol));
  for (int N = 0; N <= c.dual_max_grade; ++N) {
    Policy p{N, 64};
    for (int x = 0; x < D::kLetters; ++x) {
      dual.push_back(coassociativity_check_dual(x, p));
      for (int y = x + 1; y < D::kLetters; ++y) dual.push_back(relation_hom_check_dual(x, y, p));
    }
  }
  out.push_back(aggregate("hopf.dual.axioms", dual, {{"max_grade", std::to_string(c.dual_max_grade)}}));
  auto res = resolve_boost_coproduct({2, 64});
  CheckReport b;
  b.check_id = "hopf.dual.boost_form";
  b.status = Status::ReportOnly;
  b.residual = "0";
  for (const auto& [form, fails] : res.failures) b.artifacts["failures"][form] = fails;
  b.artifacts["selected"] = to_string(res.form);
  out.push_back(b);
  return out;
}

inline std::vector<CheckReport> multiplier_reports(const SuiteConfig& c) {
  const Policy p{c.N, c.D};
  auto w = build_omega(p);
  return {unitarity_check(w),      counit_normalization_check(w), form_equivalence_check(p), classical_limit_check(p),
          tau_commutator_check(p), missing_i_probe(p),            tau_commutator_typeset_probe(p)};
}

/// Exactly one slot convention must hold at the quantum level; both hold classically.
/// The failing convention is kept as a report-only probe with its residual.
inline std::vector<CheckReport> cocycle_convention_reports(Policy p) {
  auto s = cocycle_sweep(p);
  CheckReport r;
  r.check_id = "cocycle.convention";
  r.param("N", std::to_string(p.N)).param("D", std::to_string(p.D));
  r.artifacts["left"] = s.left.passed();
  r.artifacts["right"] = s.right.passed();
  r.artifacts["classical_left"] = s.classical_left.passed();
  r.artifacts["classical_right"] = s.classical_right.passed();
  r.residual = std::to_string(s.passing_conventions());
  bool ok = s.passing_conventions() == 1 && s.classical_left.passed() && s.classical_right.passed();
  r.status = ok ? Status::Pass : Status::Fail;
  CheckReport probe = s.left.passed() ? s.right : s.left;
  probe.check_id = "cocycle.convention_probe";
  probe.param("N", std::to_string(p.N)).param("D", std::to_string(p.D));
  probe.artifacts["convention"] = s.left.passed() ? "right" : "left";
  probe.status = Status::ReportOnly;
  return {r, probe};
}

inline std::vector<CheckReport> cocycle_reports(const SuiteConfig& c) {
  auto out = multiplier_reports(c);
  for (Policy p : c.cocycle_policies)
    for (auto& r : cocycle_convention_reports(p)) out.push_back(std::move(r));
  return out;
}

inline CheckReport positive_control_check(int D = 2) {
  auto res = coboundary_solve(positive_control_target(), D);
  ClassicalElement vsq(1);
  for (int m = 1; m <= 3; ++m) vsq += ClassicalElement::monomial(1, {detail::letters({G::v(m), G::v(m)})});
  CheckReport r;
  r.check_id = "nogo.positive_control";
  r.param("D", std::to_string(D));
  bool ok = !res.infeasible() && res.solution() == vsq;
  r.artifacts["solution"] = res.infeasible() ? std::string("infeasible") : res.solution().str();
  r.residual = ok ? "0" : "1";
  r.status = ok ? Status::Pass : Status::Fail;
  return r;
}

inline std::vector<CheckReport> nogo_reports(const SuiteConfig& c) {
  std::vector<CheckReport> out;
  for (int D = 1; D <= c.nogo_max_degree; ++D) out.push_back(nogo_report(D));
  out.push_back(positive_control_check());
  out.push_back(quantum_obstruction(0, 2));
  if (c.quantum_degree >= 1) out.push_back(quantum_obstruction(1, c.quantum_degree));
  return out;
}

inline std::vector<CheckReport> rep_reports(const SuiteConfig& c) {
  using namespace rep;
  std::vector<CheckReport> out;
  for (auto ps : c.rep_params)
    for (int s : c.twice_spins) {
      AlgebraOptions o;
      o.samples = c.samples;
      o.seed = c.seed;
      o.tol = c.rep_tol;
      out.push_back(check_algebra({ps.M, ps.k, s}, o));
    }
  for (auto ps : c.rep_params) out.push_back(dispersion_check(ps.M, ps.k, c.samples, c.seed, c.dispersion_tol));
  out.push_back(dispersion_printed_probe());
  for (auto ps : c.rep_params) {
    ExtractOptions o;
    o.seed = c.seed;
    o.tol = c.extract_tol;
    out.push_back(extract_generators({ps.M, ps.k, 2}, o));
  }
  GroupPointNR g;
  g.R = rotation(Vec3(0, 0, 1), 0.3).R;
  g.v = Vec3(0.2, -0.1, 0.1);
  g.a = Vec3(0.3, 0.1, -0.2);
  g.t = 0.4;
  out.push_back(norm_preservation_check({1, 2, 2}, g, c.seed));
  GroupPointNR b, t;
  b.v = Vec3(0.2, 0, 0);
  t.a = Vec3(1, 0, 0);
  out.push_back(composition_check({1, 2, 0}, b, t, {1e1, 1e2, 1e3, 1e4, 1e5}, c.seed));
  return out;
}

inline std::vector<CheckReport> contract_reports(const SuiteConfig& c) {
  using namespace contract;
  auto grid = parse_grid(c.c_grid);
  Vec3 v(c.contract_v[0], c.contract_v[1], c.contract_v[2]);
  Vec3 q(c.contract_q[0], c.contract_q[1], c.contract_q[2]);
  std::vector<CheckReport> out{multiplier_limit_check(c.contract_M, c.contract_k, v, Mat3::Identity(), grid),
                               classical_multiplier_check(c.contract_M, v, Mat3::Identity(), grid),
                               rep_limit_check(c.contract_M, c.contract_k, q, grid),
                               general_family_scan(c.contract_M, std::abs(c.contract_k)),
                               general_family_scan(c.contract_M, -std::abs(c.contract_k))};
  if (c.complex_mass) out.push_back(complex_mass_probe(c.contract_M, std::abs(c.contract_k), v, grid));
  return out;
}

inline std::vector<CheckReport> appendix_reports(const SuiteConfig& c) {
  return {contract::appendix_checks(c.appendix_samples, c.seed)};
}

inline std::vector<CheckReport> run_group(const std::string& name, const SuiteConfig& c) {
  if (name == "hopf") return hopf_reports(c);
  if (name == "cocycle") return cocycle_reports(c);
  if (name == "nogo") return nogo_reports(c);
  if (name == "rep") return rep_reports(c);
  if (name == "contract") return contract_reports(c);
  if (name == "appendix") return appendix_reports(c);
  throw std::invalid_argument("unknown group '" + name + "'");
}

/// Runs the enabled groups concurrently and concatenates in canonical group order.
inline std::vector<CheckReport> run_suite(const SuiteConfig& c) {
  c.validate();
  std::vector<std::future<std::vector<CheckReport>>> jobs;
  std::vector<std::string> order;
  for (const auto& g : suite_groups())
    if (std::find(c.groups.begin(), c.groups.end(), g) != c.groups.end()) {
      order.push_back(g);
      jobs.push_back(std::async(std::launch::async, [g, &c] { return run_group(g, c); }));
    }
  std::vector<CheckReport> out;
  for (auto& j : jobs) {
    auto part = j.get();
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace kgal
