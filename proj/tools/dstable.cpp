// dstable: command-line front end for the discrete stable library.
//
// Exit codes: 0 success, 2 parameter/usage error, 3 table emitted but the
// tail bound was not reached, 4 statistical test failure.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "dstable/dstable.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::json;
using namespace dstable;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitStatFail = 4;

enum class Format { Csv, Json };

std::string fmt_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

json num_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return fmt_num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& obj, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [k, v] : obj.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ";") + csv_cell(e);
      out.emplace_back(key, joined);
    } else {
      out.emplace_back(key, csv_cell(v));
    }
  }
}

// Key-value report: JSON object as-is, CSV as key,value rows.
void emit_report(const json& report, Format f) {
  if (f == Format::Json) {
    std::cout << report.dump() << '\n';
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::cout << "key,value\n";
  for (const auto& [k, v] : rows) std::cout << k << ',' << v << '\n';
}

// Table: CSV header + rows; JSON {"schema", meta..., "columns", "rows"}.
void emit_table(const std::string& schema, const json& meta,
                const std::vector<std::string>& columns, const std::vector<json>& rows,
                Format f) {
  if (f == Format::Json) {
    json out = meta;
    out["schema"] = schema;
    out["columns"] = columns;
    out["rows"] = rows;
    std::cout << out.dump() << '\n';
    return;
  }
  std::string line;
  for (const auto& c : columns) line += (line.empty() ? "" : ",") + c;
  std::cout << line << '\n';
  for (const auto& r : rows) {
    line.clear();
    for (std::size_t i = 0; i < r.size(); ++i) line += (i ? "," : "") + csv_cell(r[i]);
    std::cout << line << '\n';
  }
}

struct DsArgs {
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "index alpha in (0, 2]")->required();
    app->add_option("--gamma", gamma, "dilation coefficient gamma")->required();
    app->add_option("--delta", delta, "translation coefficient delta")->required();
  }
  DSParams validate() const { return validate_ds(alpha, gamma, delta); }
};

json params_json(const DSParams& p) {
  return {{"alpha", p.alpha()}, {"gamma", p.gamma()}, {"delta", p.delta()}};
}

void warn_near_one(const DSParams& p) {
  if (p.near_alpha_one()) {
    std::cerr << "warning: alpha is within 1e-8 of 1; the alpha != 1 branch is used as given\n";
  }
}

int run_pmf(const DsArgs& a, std::size_t nmax, double tail_bound, Format f) {
  const DSParams p = a.validate();
  warn_near_one(p);
  const PmfTable t = ds_pmf(p, nmax, tail_bound);
  std::vector<json> rows;
  rows.reserve(t.masses().size());
  for (std::size_t n = 0; n <= t.last_index(); ++n) {
    rows.push_back(json::array({n, t.mass(n), t.cumulative()[n]}));
  }
  json meta = {{"params", params_json(p)},
               {"tail_mass", t.tail_mass()},
               {"tail_bound_reached", t.tail_bound_reached()}};
  emit_table("pmf", meta, {"n", "pmf", "cdf"}, rows, f);
  if (!t.tail_bound_reached()) {
    std::cerr << "warning: tail bound " << fmt_num(tail_bound) << " not reached by n = "
              << t.last_index() << "; remaining tail mass " << fmt_num(t.tail_mass()) << '\n';
    return kExitIncomplete;
  }
  return kExitOk;
}

int run_cdf(const DsArgs& a, std::size_t nmax, double tail_bound, std::optional<long long> at,
            std::optional<double> q, Format f) {
  const DSParams p = a.validate();
  warn_near_one(p);
  const PmfTable t = ds_pmf(p, nmax, tail_bound);
  json meta = {{"params", params_json(p)}, {"tail_mass", t.tail_mass()}};
  if (at || q) {
    json report = meta;
    report["schema"] = "cdf";
    if (at) {
      report["n"] = *at;
      report["cdf"] = cdf(t, *at);
    }
    if (q) {
      report["q"] = *q;
      report["quantile"] = quantile(t, *q);
    }
    emit_report(report, f);
    return kExitOk;
  }
  std::vector<json> rows;
  for (std::size_t n = 0; n <= t.last_index(); ++n) {
    rows.push_back(json::array({n, t.cumulative()[n]}));
  }
  emit_table("cdf", meta, {"n", "cdf"}, rows, f);
  return t.tail_bound_reached() ? kExitOk : kExitIncomplete;
}

int run_sample(const DsArgs& a, std::size_t n, std::uint64_t seed, Format f) {
  const DSParams p = a.validate();
  warn_near_one(p);
  RngStream rng(seed);
  DSSampler draw(p);
  std::vector<Count> xs(n);
  for (auto& x : xs) x = draw(rng);
  if (f == Format::Json) {
    json out = {{"schema", "sample"}, {"params", params_json(p)}, {"seed", seed}, {"values", xs}};
    std::cout << out.dump() << '\n';
  } else {
    std::cout << "x\n";
    for (Count x : xs) std::cout << x << '\n';
  }
  return kExitOk;
}

int run_check(const DsArgs& a, std::vector<double> rhos, Format f) {
  const DSParams p = a.validate();
  const Classification c = classify(p);
  const MomentReport m = moments(p);
  if (rhos.empty()) {
    for (int i = 1; i <= 9; ++i) rhos.push_back(i / 10.0);
  }
  const auto grid = default_stability_grid();
  double worst = 0.0;
  for (double rho : rhos) worst = std::max(worst, stability_residual(p, rho, grid).max_residual);

  json report = {{"schema", "check"},
                 {"valid", true},
                 {"params", params_json(p)},
                 {"strict", c.strict},
                 {"broad", !c.strict},
                 {"self_decomposable", c.self_decomposable},
                 {"is_poisson", c.is_poisson},
                 {"is_degenerate", c.is_degenerate},
                 {"mean", num_or_null(m.mean)},
                 {"mean_finite", c.mean_finite},
                 {"variance", num_or_null(m.variance)},
                 {"variance_finite", c.variance_finite},
                 {"rho", rhos},
                 {"stability_max_residual", worst}};
  if (p.degenerate()) {
    report["compound"] = nullptr;
  } else {
    const CompoundRep cr = ds_to_compound(p);
    report["compound"] = {{"lambda", cr.lambda}, {"rho", cr.summand.rho()}};
  }
  report["warnings"] = json::array();
  if (p.near_alpha_one()) report["warnings"].push_back("alpha_near_one");
  emit_report(report, f);
  return kExitOk;
}

int run_stability(const DsArgs& a, double rho, std::size_t n, std::uint64_t seed,
                  double threshold, std::optional<double> mu_override, Format f) {
  const DSParams p = a.validate();
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(Errc::DomainError, "--rho must lie in (0, 1), got " + fmt_num(rho));
  }
  RngStream rng(seed);
  const ExperimentResult r = stability_experiment(p, rho, n, rng, mu_override);
  const bool passed = r.tv_distance < threshold;
  json report = {{"schema", "stability-test"},
                 {"params", params_json(p)},
                 {"rho", rho},
                 {"mu", r.mu},
                 {"mu_overridden", mu_override.has_value()},
                 {"n_samples", r.n_samples},
                 {"seed", seed},
                 {"tv_distance", r.tv_distance},
                 {"tv_threshold", threshold},
                 {"chi_square_stat", r.chi_square_stat},
                 {"chi_square_p_value", r.chi_square_p_value},
                 {"bins_used", r.bins_used},
                 {"passed", passed}};
  emit_report(report, f);
  return passed ? kExitOk : kExitStatFail;
}

struct ConvertArgs {
  std::string from, to;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> gamma, delta, sigma, lambda, rho;
};

double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw Error(Errc::DomainError, std::string("missing ") + flag);
  return *v;
}

int run_convert(const ConvertArgs& a, Format f) {
  DSParams p = [&] {
    if (a.from == "ds") return validate_ds(a.alpha, need(a.gamma, "--gamma"), need(a.delta, "--delta"));
    if (a.from == "es") return es_to_ds(ESParams{a.alpha, need(a.sigma, "--sigma"), need(a.delta, "--delta")});
    return compound_to_ds(validate_compound(need(a.lambda, "--lambda"), a.alpha, need(a.rho, "--rho")));
  }();
  json report = {{"schema", "convert"}, {"from", a.from}, {"to", a.to}};
  if (a.to == "ds") {
    report["result"] = params_json(p);
  } else if (a.to == "es") {
    const ESParams e = ds_to_es(p);
    report["result"] = {{"alpha", e.alpha}, {"sigma", e.sigma}, {"delta", e.delta}};
  } else {
    const CompoundRep c = ds_to_compound(p);
    report["result"] = {{"lambda", c.lambda}, {"alpha", c.summand.alpha()}, {"rho", c.summand.rho()}};
  }
  emit_report(report, f);
  return kExitOk;
}

struct Regime {
  const char* label;
  const char* regime;
  double alpha, gamma, delta;
};

// Regime reproduction of the family's PMF shapes; exact plotted parameters
// are not known.
constexpr Regime kRegimes[] = {
    {"strict_alpha_0.5", "strict, alpha < 1", 0.5, -1.0, 0.0},
    {"alpha_1", "alpha = 1, self-decomposable", 1.0, 1.0, 2.0},
    {"sd_alpha_1.5", "alpha in (1,2], self-decomposable", 1.5, 1.0, 3.0},
    {"hermite_multimodal", "alpha = 2, not self-decomposable, multimodal", 2.0, 1.0, 2.0},
};

int run_plot_data(std::size_t nmax, Format f) {
  std::vector<json> rows;
  json series = json::array();
  for (const Regime& r : kRegimes) {
    const DSParams p = validate_ds(r.alpha, r.gamma, r.delta);
    const PmfTable t = ds_pmf(p, nmax, 1e-12);
    const ModeReport modes = mode_scan(t);
    const Classification c = classify(p);
    std::vector<double> pmf(t.masses().begin(), t.masses().end());
    for (std::size_t n = 0; n < pmf.size(); ++n) {
      rows.push_back(json::array({r.label, r.alpha, r.gamma, r.delta, n, pmf[n]}));
    }
    series.push_back({{"label", r.label},
                      {"regime", r.regime},
                      {"params", params_json(p)},
                      {"self_decomposable", c.self_decomposable},
                      {"unimodal", modes.unimodal},
                      {"mode_count", modes.modes.size()},
                      {"tail_mass", t.tail_mass()},
                      {"pmf", pmf}});
  }
  if (f == Format::Json) {
    json out = {{"schema", "plot-data"}, {"regime_reproduction", true}, {"series", series}};
    std::cout << out.dump() << '\n';
  } else {
    emit_table("plot-data", json::object(), {"label", "alpha", "gamma", "delta", "n", "pmf"}, rows,
               Format::Csv);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete stable distributions DS(alpha, gamma, delta)", "dstable"};
  app.require_subcommand(1);

  std::string format = "csv";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  DsArgs ds;
  std::size_t nmax = 10000;
  double tail_bound = kDefaultTailBound;

  auto* pmf = app.add_subcommand("pmf", "PMF table n, pmf(n), cdf(n)");
  ds.attach(pmf);
  pmf->add_option("--nmax", nmax, "largest n tabulated");
  pmf->add_option("--tail-bound", tail_bound, "stop once the remaining mass is below this");
  add_format(pmf);

  std::optional<long long> at;
  std::optional<double> qlevel;
  auto* cdf_cmd = app.add_subcommand("cdf", "CDF table, a single cdf value, or a quantile");
  ds.attach(cdf_cmd);
  cdf_cmd->add_option("--nmax", nmax, "largest n tabulated");
  cdf_cmd->add_option("--tail-bound", tail_bound, "stop once the remaining mass is below this");
  cdf_cmd->add_option("--at", at, "report P(X <= n) for this n");
  cdf_cmd->add_option("--quantile", qlevel, "report the smallest n with cdf(n) >= q");
  add_format(cdf_cmd);

  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
  auto* sample = app.add_subcommand("sample", "draw variates");
  ds.attach(sample);
  sample->add_option("--n", n_samples, "number of variates")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "64-bit seed")->required();
  add_format(sample);

  std::vector<double> rhos;
  auto* check = app.add_subcommand("check", "classification and stability residual report");
  ds.attach(check);
  check->add_option("--rho", rhos, "thinning fractions for the stability residual")->expected(1, -1);
  add_format(check);

  double rho = std::numeric_limits<double>::quiet_NaN();
  std::size_t mc_n = 100000;
  std::uint64_t mc_seed = 1;
  double tv_threshold = 0.02;
  std::optional<double> mu_override;
  auto* stab = app.add_subcommand("stability-test", "Monte Carlo check of the stability identity");
  ds.attach(stab);
  stab->add_option("--rho", rho, "thinning fraction in (0, 1)")->required();
  stab->add_option("--n", mc_n, "number of samples");
  stab->add_option("--seed", mc_seed, "64-bit seed");
  stab->add_option("--tv-threshold", tv_threshold, "pass when tv_distance is below this");
  stab->add_option("--mu-override", mu_override, "use this translation instead of the exact one");
  add_format(stab);

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "convert between DS, ES and compound forms");
  convert->add_option("--from", conv.from)->required()->check(CLI::IsMember({"ds", "es", "compound"}));
  convert->add_option("--to", conv.to)->required()->check(CLI::IsMember({"ds", "es", "compound"}));
  convert->add_option("--alpha", conv.alpha)->required();
  convert->add_option("--gamma", conv.gamma);
  convert->add_option("--delta", conv.delta);
  convert->add_option("--sigma", conv.sigma);
  convert->add_option("--lambda", conv.lambda);
  convert->add_option("--rho", conv.rho);
  add_format(convert);

  std::size_t plot_nmax = 60;
  auto* plot = app.add_subcommand("plot-data", "PMF tables for a curated set of regimes");
  plot->add_option("--nmax", plot_nmax, "largest n per series");
  add_format(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const Format f = format == "json" ? Format::Json : Format::Csv;
  try {
    if (*pmf) return run_pmf(ds, nmax, tail_bound, f);
    if (*cdf_cmd) return run_cdf(ds, nmax, tail_bound, at, qlevel, f);
    if (*sample) return run_sample(ds, n_samples, seed, f);
    if (*check) return run_check(ds, rhos, f);
    if (*stab) return run_stability(ds, rho, mc_n, mc_seed, tv_threshold, mu_override, f);
    if (*convert) return run_convert(conv, f);
    if (*plot) return run_plot_data(plot_nmax, f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (*check) {
      json report = {{"schema", "check"}, {"valid", false}, {"error", std::string(errc_name(e.code()))}};
      emit_report(report, f);
    }
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
