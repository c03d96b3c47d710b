// kgal: command-line front end to the verification suite.
//
// Exit codes: 0 no failing check, 1 at least one failing check, 2 usage,
// configuration, domain or I/O error.

#include "kgal/expr.hpp"
#include "kgal/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace kgal;

namespace {

struct Globals {
  std::string format = "json";
  std::string out;
  std::string config;
  std::uint64_t seed = 1;
};

SuiteConfig load_config(const Globals& g, const CLI::App& app) {
  SuiteConfig c;
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw std::invalid_argument("cannot read config '" + g.config + "'");
    c = config_from_json(ordered_json::parse(in));
  }
  if (app.count("--seed")) c.seed = g.seed;
  return c;
}

int emit(const std::vector<CheckReport>& reports, const Globals& g) {
  const std::string text = g.format == "csv" ? emit_csv(reports) : emit_json(reports) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!(f << text)) {
      std::cerr << "kgal: cannot write '" << g.out << "'\n";
      return 2;
    }
  }
  return exit_code(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numeric verification of the k-Galilei quantum group"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Write the report here instead of stdout");
  app.add_option("--seed", g.seed, "Seed for every sampled check");
  app.add_option("--config", g.config, "JSON suite configuration");

  // Shared knobs. Unset options fall back to the config.
  int order = -1, degree = -1;
  double M = 0, k = 0;
  int twice_s = -1;
  std::vector<double> v, q;
  std::string grid;

  auto* verify = app.add_subcommand("verify", "Exact Hopf and multiplier checks");
  verify->require_subcommand(1);
  for (auto* sub : {verify->add_subcommand("hopf", "Presentation tables and Hopf axioms"),
                    verify->add_subcommand("cocycle", "Slot convention of the 2-cocycle identity"),
                    verify->add_subcommand("tau", "tau commutator of the multiplier"),
                    verify->add_subcommand("unitarity", "Unitarity, counit, form equivalence, classical limit")}) {
    sub->add_option("--order", order, "Maximal lambda power N");
    sub->add_option("--degree", degree, "Maximal slot degree D");
  }

  auto* nogo = app.add_subcommand("nogo", "Coboundary obstruction with exact witnesses");
  int max_degree = -1, quantum = -1;
  nogo->add_option("--max-degree", max_degree, "Largest polynomial degree of the unknown");
  nogo->add_option("--quantum-degree", quantum, "Degree for the order-1 quantum probe (0 disables)");

  auto* rep = app.add_subcommand("rep", "Numeric representation checks");
  rep->require_subcommand(1);
  for (auto* sub : {rep->add_subcommand("commutators", "Represented commutator algebra"),
                    rep->add_subcommand("dispersion", "Dispersion relation and its printed form"),
                    rep->add_subcommand("extract", "Generators from the group action"),
                    rep->add_subcommand("compose", "Projective composition law")}) {
    sub->add_option("--M", M, "Mass parameter");
    sub->add_option("--k", k, "Deformation parameter");
    sub->add_option("--spin", twice_s, "Twice the spin");
  }

  auto* con = app.add_subcommand("contract", "c -> infinity contraction laboratory");
  con->require_subcommand(1);
  bool complex_mass = false;
  for (auto* sub : {con->add_subcommand("multiplier", "Multiplier coefficients and their limit"),
                    con->add_subcommand("rep", "Representation coefficients and their limit"),
                    con->add_subcommand("appendix", "Scalar ODE and quadrature identities"),
                    con->add_subcommand("family", "(A, C) family scan for both signs of k")}) {
    sub->add_option("--M", M, "Galilei mass");
    sub->add_option("--k", k, "Deformation parameter");
    sub->add_option("--v", v, "Boost velocity")->delimiter(',')->expected(3);
    sub->add_option("--q", q, "Momentum")->delimiter(',')->expected(3);
    sub->add_option("--c-grid", grid, "start:stop:count, log-spaced");
    sub->add_flag("--complex-mass", complex_mass, "Exploratory complex mass for k > 0 (non-physical)");
  }

  auto* run = app.add_subcommand("run", "Run the configured suite");
  std::vector<std::string> groups;
  run->add_option("--groups", groups, "Subset of: hopf cocycle nogo rep contract appendix")->delimiter(',');

  auto* eval = app.add_subcommand("eval", "Normal form of a group-algebra expression");
  std::string expr;
  eval->add_option("expression", expr, "e.g. \"v[1] a[2] - a[2] v[1]\"")->required();
  eval->add_option("--order", order, "Maximal lambda power N");
  eval->add_option("--degree", degree, "Maximal slot degree D");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    SuiteConfig c = load_config(g, app);
    if (order >= 0) c.N = order;
    if (degree >= 0) c.D = degree;
    if (M != 0) c.contract_M = M;
    if (k != 0) c.contract_k = k;
    if (!v.empty()) c.contract_v = {v[0], v[1], v[2]};
    if (!q.empty()) c.contract_q = {q[0], q[1], q[2]};
    if (!grid.empty()) c.c_grid = grid;
    if (complex_mass) c.complex_mass = true;
    if (max_degree >= 0) c.nogo_max_degree = max_degree;
    if (quantum >= 0) c.quantum_degree = quantum;
    if (M != 0 || k != 0) c.rep_params = {{M != 0 ? M : 1.0, k != 0 ? k : 2.0}};
    if (twice_s >= 0) c.twice_spins = {twice_s};
    c.validate();

    std::vector<CheckReport> reports;
    if (verify->parsed()) {
      const Policy p{c.N, c.D};
      if (verify->got_subcommand("hopf")) reports = hopf_reports(c);
      if (verify->got_subcommand("cocycle"))
        for (auto& r : cocycle_convention_reports(p)) reports.push_back(std::move(r));
      if (verify->got_subcommand("tau")) reports = {tau_commutator_check(p), tau_commutator_typeset_probe(p)};
      if (verify->got_subcommand("unitarity")) {
        auto w = build_omega(p);
        reports = {unitarity_check(w), counit_normalization_check(w), form_equivalence_check(p),
                   classical_limit_check(p), missing_i_probe(p)};
      }
    } else if (nogo->parsed()) {
      reports = nogo_reports(c);
    } else if (rep->parsed()) {
      auto all = rep_reports(c);
      std::string prefix = rep->got_subcommand("commutators") ? "rep.commutators"
                           : rep->got_subcommand("dispersion") ? "rep.dispersion"
                           : rep->got_subcommand("extract")    ? "rep.extract"
                                                               : "rep.compose";
      for (auto& r : all)
        if (r.check_id.rfind(prefix, 0) == 0) reports.push_back(std::move(r));
    } else if (con->parsed()) {
      if (con->got_subcommand("appendix")) {
        reports = appendix_reports(c);
      } else {
        auto all = contract_reports(c);
        std::string prefix = con->got_subcommand("multiplier") ? "contract.multiplier"
                             : con->got_subcommand("rep")      ? "contract.rep"
                                                               : "contract.family";
        for (auto& r : all)
          if (r.check_id.rfind(prefix, 0) == 0) reports.push_back(std::move(r));
      }
    } else if (run->parsed()) {
      if (!groups.empty()) c.groups = groups;
      reports = run_suite(c);
    } else if (eval->parsed()) {
      Policy p{order >= 0 ? order : 4, degree >= 0 ? degree : 12};
      auto e = parse_group_expression(expr, p);
      if (g.format == "json") {
        ordered_json j{{"input", expr}, {"N", p.N}, {"D", p.D}, {"normal_form", e.str()}, {"terms", e.size()}};
        std::cout << j.dump() << "\n";
      } else {
        std::cout << e.str() << "\n";
      }
      return 0;
    }
    return emit(reports, g);
  } catch (const std::domain_error& e) {
    std::cerr << "kgal: domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kgal: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "kgal: parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "kgal: config error: " << e.what() << "\n";
    return 2;
  }
}
