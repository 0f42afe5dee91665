// Command-line driver: preset tables, verification suites, condition fits,
// and corollary tables over built-in or user-supplied manifolds.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nf/family.hpp"
#include "nf/geometry.hpp"
#include "nf/nk.hpp"
#include "nf/pseudosym.hpp"
#include "nf/runner.hpp"

namespace {

using json = nlohmann::json;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

const char* verdict_name(nf::DichotomyVerdict v) {
  switch (v) {
    case nf::DichotomyVerdict::PreconditionFailed: return "precondition-failed";
    case nf::DichotomyVerdict::EinsteinBranch: return "einstein-branch";
    case nf::DichotomyVerdict::LBranch: return "l-branch";
    case nf::DichotomyVerdict::EtaEinsteinBranch: return "eta-einstein-branch";
    case nf::DichotomyVerdict::Violation: return "violation";
  }
  return "violation";
}

json report_shell(const std::string& manifold, int points) {
  return json{{"manifold", manifold},
              {"points", points},
              {"suites", json::array()},
              {"fits", json::array()},
              {"tables", json::array()}};
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

// ---- presets ----

struct PresetsArgs {
  int n = 5;
  double a0 = 1.0;
  double a1 = 0.25;
};

int cmd_presets(const PresetsArgs& a) {
  std::cout << "presets at n = " << a.n << " (quasi-conformal and pseudo-projective shown at a0 = "
            << fmt("%.12g", a.a0) << ", a1 = " << fmt("%.12g", a.a1) << ")\n\n";
  std::cout << "| preset | a0 | a1 | a2 | a3 | a4 | a5 | a6 | a7 |\n";
  std::cout << "|---|---|---|---|---|---|---|---|---|\n";
  for (const nf::Preset p : nf::all_presets()) {
    const auto c = nf::preset_is_parametric(p) ? nf::coefficients(p, a.n, a.a0, a.a1)
                                               : nf::coefficients(p, a.n);
    std::cout << "| " << nf::preset_name(p);
    for (int i = 0; i < 8; ++i) std::cout << " | " << fmt("%.12g", c[i]);
    std::cout << " |\n";
  }
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  std::string manifold;
  int points = 10;
  unsigned seed = 1;
  std::optional<double> tol;
  std::string format = "markdown";
};

int cmd_verify(const VerifyArgs& a) {
  const auto spec = nf::resolve_manifold(a.manifold, a.seed);
  nf::VerifyOptions opt;
  opt.points = a.points;
  opt.seed = a.seed;
  opt.tol_override = a.tol;
  const auto rep = nf::run_verify(spec, opt);

  if (a.format == "json") {
    json doc = report_shell(rep.manifold, rep.points);
    for (const auto& row : rep.rows)
      doc["suites"].push_back(json{{"id", row.id},
                                   {"paper_tag", row.tag},
                                   {"max_residual", row.max_residual},
                                   {"pass", row.pass}});
    emit(doc);
  } else {
    std::cout << "manifold " << rep.manifold << ", points " << rep.points << "\n\n";
    std::cout << "| id | paper_tag | max_residual | pass |\n|---|---|---|---|\n";
    for (const auto& row : rep.rows)
      std::cout << "| " << row.id << " | " << (row.tag.empty() ? "-" : row.tag) << " | "
                << fmt("%.3e", row.max_residual) << " | " << (row.pass ? "pass" : "FAIL")
                << " |\n";
    std::cout << "\noverall: " << (rep.pass ? "pass" : "FAIL") << "\n";
  }
  return rep.pass ? 0 : 1;
}

// ---- fit ----

struct FitArgs {
  std::string manifold;
  std::string ta = "r";
  std::string tb = "r";
  std::string sigma = "g";
  int ell = 1;
  double a0 = 1.0;
  double a1 = 0.25;
  int points = 20;
  unsigned seed = 1;
  bool dichotomy = false;
  std::string format = "markdown";
};

nf::CoeffVector named_coeffs(const std::string& name, int n, double a0, double a1) {
  const auto p = nf::preset_from_name(name);
  if (!p || *p == nf::Preset::Custom)
    throw nf::ConfigError("unknown preset '" + name + "'; see the presets command");
  if (nf::preset_is_parametric(*p)) return nf::coefficients(*p, n, a0, a1);
  return nf::coefficients(*p, n);
}

int cmd_fit(const FitArgs& a) {
  const auto spec = nf::resolve_manifold(a.manifold, a.seed);

  nf::ConditionSpec cond;
  const bool ricci_kind = a.tb == "ric";
  const bool power_kind = a.sigma == "s";
  cond.kind = ricci_kind ? (power_kind ? nf::ConditionKind::TRicciT_Sl : nf::ConditionKind::TRicciT_g)
                         : (power_kind ? nf::ConditionKind::TT_Sl : nf::ConditionKind::TT_g);
  cond.ta = named_coeffs(a.ta, spec.n, a.a0, a.a1);
  cond.tb = ricci_kind ? named_coeffs("r", spec.n, a.a0, a.a1)
                       : named_coeffs(a.tb, spec.n, a.a0, a.a1);
  cond.ell = power_kind ? a.ell : 1;

  if (a.dichotomy && (a.ta != "r" || a.sigma != "g" || ricci_kind))
    throw nf::ConfigError("--dichotomy applies to the (r, <preset>, g) shape only");

  nf::FitOptions opt;
  opt.points = a.points;
  opt.seed = a.seed;
  opt.dichotomy = a.dichotomy;
  const std::string sigma_name = power_kind ? "s^" + std::to_string(cond.ell) : "g";
  const auto sum = nf::run_fit(spec, cond, a.ta, ricci_kind ? "ric" : a.tb, sigma_name, opt);

  int counts[5] = {};
  for (const auto v : sum.verdicts) ++counts[static_cast<int>(v)];

  if (a.format == "json") {
    json doc = report_shell(sum.manifold, sum.points);
    json f{{"ta", sum.ta_name},
           {"tb", sum.tb_name},
           {"sigma", sum.sigma_name},
           {"ell", cond.ell},
           {"points", sum.points},
           {"mean_L", sum.mean_L ? json(*sum.mean_L) : json(nullptr)},
           {"max_deviation", sum.max_deviation},
           {"max_residual", sum.max_residual},
           {"degenerate", sum.degenerate}};
    if (a.dichotomy) {
      json d = json::object();
      for (int v = 0; v < 5; ++v)
        d[verdict_name(static_cast<nf::DichotomyVerdict>(v))] = counts[v];
      f["dichotomy"] = d;
    }
    doc["fits"].push_back(f);
    emit(doc);
  } else {
    std::cout << "manifold " << sum.manifold << ", points " << sum.points << ", condition ("
              << sum.ta_name << ", " << sum.tb_name << ", " << sum.sigma_name << ")\n\n";
    std::cout << "degenerate: " << sum.degenerate << "/" << sum.points << " points\n";
    if (sum.mean_L) {
      std::cout << "mean L = " << fmt("%.6f", *sum.mean_L) << "\n";
      std::cout << "max deviation = " << fmt("%.3e", sum.max_deviation) << "\n";
    } else {
      std::cout << "mean L = n/a (every point degenerate: the condition holds at any L)\n";
    }
    std::cout << "max residual = " << fmt("%.3e", sum.max_residual) << "\n";
    if (a.dichotomy) {
      std::cout << "dichotomy:";
      for (int v = 0; v < 5; ++v)
        std::cout << (v ? "," : "") << " " << verdict_name(static_cast<nf::DichotomyVerdict>(v))
                  << " " << counts[v];
      std::cout << "\n";
    }
  }
  return sum.pass ? 0 : 1;
}

// ---- table ----

struct TableArgs {
  std::string name;
  int n = 5;
  int ell = 1;
  int points = 3;
  unsigned seed = 1;
  std::string format = "markdown";
};

int cmd_table(const TableArgs& a) {
  const auto rep = nf::run_table(a.name, a.n, a.ell, a.points, a.seed);

  if (a.format == "json") {
    json doc = report_shell("registry", a.points);
    json t{{"name", rep.name},
           {"n", rep.n},
           {"ell", rep.ell ? json(*rep.ell) : json(nullptr)},
           {"pass", rep.pass},
           {"rows", json::array()}};
    for (const auto& row : rep.rows)
      t["rows"].push_back(
          json{{"class", row.klass},
               {"L", row.L_pred},
               {"S", row.S_pred},
               {"witnessed", row.witnessed},
               {"witness", row.witness},
               {"max_residual", row.max_residual ? json(*row.max_residual) : json(nullptr)}});
    doc["tables"].push_back(t);
    emit(doc);
  } else {
    std::cout << "table " << rep.name << " at n = " << rep.n;
    if (rep.ell) std::cout << ", ell = " << *rep.ell;
    std::cout << " (witnesses sampled at " << a.points << " points)\n\n";
    std::cout << "| class | L | S | witnessed | witness | max_residual |\n"
              << "|---|---|---|---|---|---|\n";
    for (const auto& row : rep.rows)
      std::cout << "| " << row.klass << " | " << row.L_pred << " | " << row.S_pred << " | "
                << (row.witnessed ? "witnessed" : "unwitnessed") << " | "
                << (row.witness.empty() ? "-" : row.witness) << " | "
                << (row.max_residual ? fmt("%.3e", *row.max_residual) : std::string("-"))
                << " |\n";
    std::cout << "\noverall: " << (rep.pass ? "pass" : "FAIL") << "\n";
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nullity-forge: symbolic-numeric checks for generalized curvature-tensor "
               "families on manifolds with a distinguished unit field"};
  app.require_subcommand(1);

  PresetsArgs pa;
  auto* presets = app.add_subcommand("presets", "coefficient table of the named presets");
  presets->add_option("--n", pa.n, "dimension the formulas are rendered at")->check(CLI::Range(3, 32));
  presets->add_option("--a0", pa.a0, "free a0 for the parametric presets");
  presets->add_option("--a1", pa.a1, "free a1 for the parametric presets");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "identity and closed-form suites on a manifold");
  verify->add_option("--manifold", va.manifold, "builtin name, random-3d, or config path")
      ->required();
  verify->add_option("--points", va.points, "sample point count")->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed, "sampling seed");
  verify->add_option("--tol", va.tol, "override the per-row relative tolerance");
  verify->add_option("--format", va.format, "output format")
      ->check(CLI::IsMember({"markdown", "json"}));

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "per-point L fits of a derivation condition");
  fit->add_option("--manifold", fa.manifold, "builtin name, random-3d, or config path")
      ->required();
  fit->add_option("--ta", fa.ta, "preset acting as the derivation");
  fit->add_option("--tb", fa.tb, "preset being derived, or 'ric' for its Ricci trace");
  fit->add_option("--sigma", fa.sigma, "wedge tensor: metric (g) or Ricci power (s)")
      ->check(CLI::IsMember({"g", "s"}));
  fit->add_option("--ell", fa.ell, "Ricci-power exponent for --sigma s")->check(CLI::Range(0, 3));
  fit->add_option("--a0", fa.a0, "free a0 for the parametric presets");
  fit->add_option("--a1", fa.a1, "free a1 for the parametric presets");
  fit->add_option("--points", fa.points, "sample point count")->check(CLI::PositiveNumber);
  fit->add_option("--seed", fa.seed, "sampling seed");
  fit->add_flag("--dichotomy", fa.dichotomy, "also report dichotomy verdicts per point");
  fit->add_option("--format", fa.format, "output format")
      ->check(CLI::IsMember({"markdown", "json"}));

  TableArgs ta;
  auto* table = app.add_subcommand("table", "predicted corollary tables with registry witnesses");
  table->add_option("--name", ta.name, "tps, w2, or rr-sl")->required();
  table->add_option("--n", ta.n, "dimension the predictions are rendered at")
      ->check(CLI::Range(3, 32));
  table->add_option("--ell", ta.ell, "Ricci-power exponent for rr-sl")->check(CLI::Range(1, 3));
  table->add_option("--points", ta.points, "sample points per witness")
      ->check(CLI::PositiveNumber);
  table->add_option("--seed", ta.seed, "sampling seed");
  table->add_option("--format", ta.format, "output format")
      ->check(CLI::IsMember({"markdown", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*presets) return cmd_presets(pa);
    if (*verify) return cmd_verify(va);
    if (*fit) return cmd_fit(fa);
    if (*table) return cmd_table(ta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
