// pballs: exact and asymptotic volumes, threshold constants, Tracy-Widom
// tables and Monte Carlo intersection experiments for l_p and Schatten
// p-balls. Subcommands emit one CSV table or JSON envelope on stdout;
// diagnostics go to stderr. All randomness derives from --seed.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pballs/balls.hpp"
#include "pballs/envelope.hpp"
#include "pballs/estimators.hpp"
#include "pballs/sampling.hpp"
#include "pballs/tracywidom.hpp"

namespace {

using namespace pballs;

NormOrder parse_order(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity")
    return NormOrder::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse norm order '" + text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("cannot parse norm order '" + text + "'");
  return NormOrder(v);
}

std::vector<int> parse_int_range(const std::string& text) {
  // "a:b:step", inclusive.
  int a = 0, b = 0, step = 0;
  if (std::sscanf(text.c_str(), "%d:%d:%d", &a, &b, &step) != 3 || step <= 0 || b < a)
    throw std::invalid_argument("range must be a:b:step with step > 0, got '" + text + "'");
  std::vector<int> out;
  for (int v = a; v <= b; v += step) out.push_back(v);
  return out;
}

std::vector<double> parse_double_range(const std::string& text) {
  double a = 0, b = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || !(step > 0) ||
      b < a)
    throw std::invalid_argument("grid must be a:b:step with step > 0, got '" + text + "'");
  std::vector<double> out;
  for (double v = a; v <= b + 1e-12 * step; v += step) out.push_back(std::min(v, b));
  return out;
}

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  int precision = 15;
  std::string format = "csv";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "Master RNG seed (default 0)");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 1024));
  cmd->add_option("--precision", c.precision, "Significant digits for numbers")
      ->check(CLI::Range(6, 17));
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out_path, "Write the rendered output to PATH");
}

RunConfig make_config(const std::string& subcommand, const CommonOpts& c,
                      std::vector<std::pair<std::string, std::string>> flags) {
  RunConfig cfg;
  cfg.subcommand = subcommand;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  cfg.precision = c.precision;
  cfg.format = c.format == "csv" ? OutputFormat::csv : OutputFormat::json;
  cfg.out_path = c.out_path;
  cfg.flags = std::move(flags);
  cfg.validate();
  return cfg;
}

void emit(const ResultEnvelope& envelope) {
  const std::string text = render(envelope);
  if (!envelope.config.out_path.empty()) {
    std::ofstream file(envelope.config.out_path, std::ios::binary);
    if (!file)
      throw std::runtime_error("cannot open output file " + envelope.config.out_path);
    file << text;
    std::cerr << "wrote " << envelope.config.out_path << "\n";
  } else {
    std::cout << text;
  }
}

Cell num(double v) { return Cell(v); }

// ------------------------------------------------------------------------- //

void run_volume(const std::string& family, const std::string& p_text, int beta,
                const std::vector<int>& ns, const CommonOpts& common) {
  const NormOrder p = parse_order(p_text);
  ResultTable table;
  table.columns = {"family",       "p",          "beta",
                   "n",            "dim",        "log_volume",
                   "formula",      "radius_exact", "radius_asymptotic",
                   "expansion_residual"};
  for (int n : ns) {
    std::vector<Cell> row;
    row.emplace_back(family);
    row.emplace_back(p.str());
    if (family == "lp") {
      const LogVolume lv = log_volume_lp(p, n);
      const double radius = std::exp(lv.value / n);
      const double asym =
          p.is_inf() ? 2.0
                     : c_p_limit(p.value()) /
                           std::pow(static_cast<double>(n), p.reciprocal());
      row.emplace_back(std::string(""));
      row.emplace_back(static_cast<long long>(n));
      row.emplace_back(static_cast<long long>(n));
      row.push_back(num(lv.value));
      row.emplace_back(to_string(lv.formula));
      row.push_back(num(radius));
      row.push_back(num(asym));
      if (!p.is_inf() && n >= 2)
        row.push_back(num(e_n_lp(p.value(), n)));
      else
        row.push_back(num(0.0));  // e_n vanishes identically on the inf branch
    } else {
      const bool inf_branch = p.is_inf();
      if (!inf_branch && !(NormOrder(2.0) == p))
        throw std::invalid_argument(
            "volume: Schatten volumes exist only for p in {2, inf}");
      const LogVolume lv =
          inf_branch ? log_volume_schatten_inf(beta, n) : log_volume_schatten2(beta, n);
      const long long d = schatten_dimension(beta, n);
      row.emplace_back(static_cast<long long>(beta));
      row.emplace_back(static_cast<long long>(n));
      row.emplace_back(d);
      row.push_back(num(lv.value));
      row.emplace_back(to_string(lv.formula));
      row.push_back(num(std::exp(lv.value / static_cast<double>(d))));
      row.push_back(num(volume_radius_schatten_asymptotic(p, beta, n)));
      if (n >= 2)
        row.push_back(num(log_volume_expansion_residual(p, beta, n)));
      else
        row.emplace_back(std::string(""));
    }
    table.rows.push_back(std::move(row));
  }

  ResultEnvelope envelope;
  envelope.config = make_config(
      "volume", common,
      {{"family", family}, {"p", p.str()}, {"beta", std::to_string(beta)}});
  envelope.payload = std::move(table);
  emit(envelope);
}

void run_threshold(const std::string& family, const std::string& p_text,
                   const std::string& q_text, int beta, bool empirical, int n,
                   long long samples, const CommonOpts& common) {
  const NormOrder p = parse_order(p_text);
  const NormOrder q = parse_order(q_text);
  ResultTable table;
  table.columns = {"family", "p", "q", "beta", "threshold", "provenance"};
  std::vector<Cell> row{Cell(family), Cell(p.str()), Cell(q.str())};

  if (empirical) {
    if (samples < 100) throw std::invalid_argument("threshold: --samples must be >= 100");
    const RandomStream base(common.seed, 0);
    double value = 0.0;
    if (family == "lp") {
      value = empirical_threshold(BallSpec(LpBallSpec{p, n}), BallSpec(LpBallSpec{q, n}),
                                  samples, base, common.threads);
      row.emplace_back(std::string(""));
    } else {
      value = empirical_threshold(BallSpec(SchattenBallSpec{p, beta, n}),
                                  BallSpec(SchattenBallSpec{q, beta, n}), samples, base,
                                  common.threads);
      row.emplace_back(static_cast<long long>(beta));
    }
    row.push_back(num(value));
    row.emplace_back(std::string("empirical-bisection(n=" + std::to_string(n) +
                                 ",N=" + std::to_string(samples) + ")"));
  } else if (family == "lp") {
    if (!q.is_inf())
      throw std::invalid_argument(
          "threshold: closed-form lp constants are provided for q = inf only; "
          "use --empirical for finite q");
    row.emplace_back(std::string(""));
    row.push_back(num(threshold_lp_inf(p)));
    row.emplace_back(std::string("closed-form"));
  } else {
    if (p.is_inf())
      throw std::invalid_argument("threshold: Schatten constants require finite p");
    const SchattenThreshold t = threshold_schatten(p.value(), q, beta);
    row.emplace_back(static_cast<long long>(beta));
    row.push_back(num(t.value));
    row.emplace_back(std::string(t.conjectured
                                     ? "q-inf-limit (conjectured for p != 2 or beta != 2)"
                                     : "closed-form"));
  }
  table.rows.push_back(std::move(row));

  ResultEnvelope envelope;
  envelope.config = make_config("threshold", common,
                                {{"family", family},
                                 {"p", p.str()},
                                 {"q", q.str()},
                                 {"beta", std::to_string(beta)},
                                 {"empirical", empirical ? "true" : "false"}});
  envelope.payload = std::move(table);
  emit(envelope);
}

void run_intersect(const std::string& family, const std::string& p_text,
                   const std::string& q_text, int beta, const std::vector<int>& ns,
                   const std::vector<double>& ts, long long samples, bool log_dilate,
                   const CommonOpts& common) {
  if (samples < 100) throw std::invalid_argument("intersect: --samples must be >= 100");
  const NormOrder p = parse_order(p_text);
  const NormOrder q = parse_order(q_text);

  ResultTable table;
  table.columns = {"family",   "p",      "q",      "beta",   "n",
                   "t",        "dilation", "estimate", "std_error", "ci_low",
                   "ci_high",  "count",  "seed"};
  const RandomStream base(common.seed, 0);

  std::uint64_t stream_block = 0;
  for (int n : ns) {
    const BallSpec X = family == "lp" ? BallSpec(LpBallSpec{p, n})
                                      : BallSpec(SchattenBallSpec{p, beta, n});
    const BallSpec Y = family == "lp" ? BallSpec(LpBallSpec{q, n})
                                      : BallSpec(SchattenBallSpec{q, beta, n});
    const auto estimates = intersection_volume_grid(
        X, Y, ts, samples, base.sibling(stream_block), common.threads, log_dilate);
    const double dil_base =
        log_dilate ? std::pow(std::log(static_cast<double>(n)), p.reciprocal()) : 1.0;
    const Cell beta_cell = family == "lp" ? Cell(std::string(""))
                                          : Cell(static_cast<long long>(beta));
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const auto& e = estimates[j];
      table.rows.push_back({Cell(family), Cell(p.str()), Cell(q.str()), beta_cell,
                            Cell(static_cast<long long>(n)), num(ts[j]),
                            num(ts[j] * dil_base), num(e.value), num(e.std_error),
                            num(e.ci_low), num(e.ci_high),
                            Cell(static_cast<long long>(e.count)), Cell(e.seed)});
    }
    stream_block +=
        static_cast<std::uint64_t>((samples + kChunkSamples - 1) / kChunkSamples) + 2;
  }

  ResultEnvelope envelope;
  envelope.config = make_config("intersect", common,
                                {{"family", family},
                                 {"p", p.str()},
                                 {"q", q.str()},
                                 {"beta", std::to_string(beta)},
                                 {"samples", std::to_string(samples)},
                                 {"log-dilate", log_dilate ? "true" : "false"}});
  envelope.payload = std::move(table);
  emit(envelope);
}

void run_tw_table(int beta, double x_min, double x_max, double step,
                  std::optional<double> at, const CommonOpts& common) {
  const PainleveSolution sol = solve_painleve_ii();
  ResultTable table;
  const bool single_beta = beta != 0;
  if (single_beta) validate_beta(beta);

  std::vector<double> xs;
  if (at.has_value()) {
    xs.push_back(*at);
  } else {
    if (!(step > 0) || !(x_max > x_min))
      throw std::invalid_argument("tw-table: need x-max > x-min and step > 0");
    for (double x = x_min; x <= x_max + 1e-12; x += step)
      xs.push_back(std::min(x, x_max));
  }

  if (single_beta) {
    table.columns = {"x", "F" + std::to_string(beta)};
    for (double x : xs) table.rows.push_back({num(x), num(tw_cdf(beta, x, sol))});
  } else {
    table.columns = {"x", "F1", "F2", "F4"};
    for (double x : xs)
      table.rows.push_back({num(x), num(tw_cdf(1, x, sol)), num(tw_cdf(2, x, sol)),
                            num(tw_cdf(4, x, sol))});
  }

  ResultEnvelope envelope;
  envelope.config = make_config("tw-table", common,
                                {{"beta", std::to_string(beta)},
                                 {"x-min", format_number(x_min, 6)},
                                 {"x-max", format_number(x_max, 6)},
                                 {"step", format_number(step, 6)}});
  envelope.payload = std::move(table);
  emit(envelope);
}

void run_independence(int beta, int n, long long samples, const CommonOpts& common) {
  if (samples < 100) throw std::invalid_argument("independence: --samples must be >= 100");
  // Default grid spans the bulk of the Tracy-Widom support.
  std::vector<std::pair<double, double>> grid;
  const std::vector<double> marks = {-3.5, -2.0, -0.5, 1.0};
  for (double x : marks)
    for (double y : marks) grid.emplace_back(x, y);

  const IndependenceReport report = independence_probe(
      beta, n, samples, grid, RandomStream(common.seed, 0), common.threads);

  ResultTable table;
  table.columns = {"beta",    "n",   "x",           "y",            "joint",
                   "product", "gap", "max_abs_gap", "gap_std_error"};
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    table.rows.push_back({Cell(static_cast<long long>(report.beta)),
                          Cell(static_cast<long long>(report.n)),
                          num(report.grid[i].first), num(report.grid[i].second),
                          num(report.joint[i]), num(report.product[i]),
                          num(report.joint[i] - report.product[i]),
                          num(report.max_abs_gap), num(report.gap_std_error)});
  }

  ResultEnvelope envelope;
  envelope.config = make_config("independence", common,
                                {{"beta", std::to_string(beta)},
                                 {"n", std::to_string(n)},
                                 {"samples", std::to_string(samples)}});
  envelope.payload = std::move(table);
  emit(envelope);
}

void run_gumbel(double p, int n, long long samples, const CommonOpts& common) {
  if (samples < 100) throw std::invalid_argument("gumbel: --samples must be >= 100");
  const GumbelCheck check =
      gumbel_check(p, n, samples, RandomStream(common.seed, 0), common.threads);

  ResultTable table;
  table.columns = {"p", "n", "ks", "value", "ecdf"};
  const auto& sorted = check.cdf.sorted();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    table.rows.push_back({num(p), Cell(static_cast<long long>(n)), num(check.ks),
                          num(sorted[i]),
                          num((i + 1.0) / static_cast<double>(sorted.size()))});
  }

  ResultEnvelope envelope;
  envelope.config = make_config("gumbel", common,
                                {{"p", format_number(p, 6)},
                                 {"n", std::to_string(n)},
                                 {"samples", std::to_string(samples)}});
  envelope.payload = std::move(table);
  emit(envelope);
}

void run_clt(int beta, int n, long long samples, const CommonOpts& common) {
  if (samples < 100) throw std::invalid_argument("clt: --samples must be >= 100");
  const MomentSummary summary =
      norm_clt_check(beta, n, samples, RandomStream(common.seed, 0), common.threads);

  ResultTable table;
  table.columns = {"beta", "n", "samples", "mean", "std_error", "variance"};
  table.rows.push_back({Cell(static_cast<long long>(beta)),
                        Cell(static_cast<long long>(n)),
                        Cell(static_cast<long long>(summary.count)), num(summary.mean),
                        num(summary.std_error), num(summary.variance)});

  ResultEnvelope envelope;
  envelope.config = make_config("clt", common,
                                {{"beta", std::to_string(beta)},
                                 {"n", std::to_string(n)},
                                 {"samples", std::to_string(samples)}});
  envelope.payload = std::move(table);
  emit(envelope);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l_p and Schatten p-ball volumetrics"};
  app.require_subcommand(1);

  std::string vol_family, vol_p = "2";
  int vol_beta = 2, vol_n = 0;
  std::string vol_range;
  CommonOpts vol_common;
  auto* vol = app.add_subcommand("volume", "Exact and asymptotic ball volumes");
  vol->add_option("--family", vol_family)
      ->required()
      ->check(CLI::IsMember({"lp", "schatten"}));
  vol->add_option("--p", vol_p, "Norm order (number or 'inf')");
  vol->add_option("--beta", vol_beta)->check(CLI::IsMember({1, 2, 4}));
  auto* vol_n_opt = vol->add_option("--n", vol_n, "Single dimension");
  auto* vol_range_opt = vol->add_option("--n-range", vol_range, "Inclusive a:b:step");
  vol_n_opt->excludes(vol_range_opt);
  add_common(vol, vol_common);

  std::string thr_family, thr_p = "2", thr_q = "inf";
  int thr_beta = 2, thr_n = 100;
  long long thr_samples = 10000;
  bool thr_empirical = false;
  CommonOpts thr_common;
  auto* thr = app.add_subcommand("threshold", "Critical dilation constants");
  thr->add_option("--family", thr_family)
      ->required()
      ->check(CLI::IsMember({"lp", "schatten"}));
  thr->add_option("--p", thr_p);
  thr->add_option("--q", thr_q);
  thr->add_option("--beta", thr_beta)->check(CLI::IsMember({1, 2, 4}));
  thr->add_flag("--empirical", thr_empirical, "Locate the threshold by MC bisection");
  thr->add_option("--n", thr_n, "Dimension for --empirical");
  thr->add_option("--samples", thr_samples, "Sample count for --empirical");
  add_common(thr, thr_common);

  std::string int_family, int_p = "2", int_q = "inf", int_nrange, int_tgrid;
  int int_beta = 2, int_n = 0;
  double int_t = 0.0;
  long long int_samples = 10000;
  bool int_logdilate = false;
  CommonOpts int_common;
  auto* its = app.add_subcommand("intersect", "Monte Carlo intersection volumes");
  its->add_option("--family", int_family)
      ->required()
      ->check(CLI::IsMember({"lp", "schatten"}));
  its->add_option("--p", int_p);
  its->add_option("--q", int_q);
  its->add_option("--beta", int_beta)->check(CLI::IsMember({1, 2, 4}));
  auto* int_n_opt = its->add_option("--n", int_n);
  auto* int_nr_opt = its->add_option("--n-range", int_nrange, "Inclusive a:b:step");
  int_n_opt->excludes(int_nr_opt);
  auto* int_t_opt = its->add_option("--t", int_t, "Single dilation");
  auto* int_tg_opt = its->add_option("--t-grid", int_tgrid, "Dilation grid a:b:step");
  int_t_opt->excludes(int_tg_opt);
  its->add_flag("--log-dilate", int_logdilate,
                "Dilate by t (log n)^{1/p} (l_p vs l_inf)");
  its->add_option("--samples", int_samples);
  add_common(its, int_common);

  int tw_beta = 0;
  double tw_xmin = -10.0, tw_xmax = 8.0, tw_step = 0.05;
  double tw_at = 0.0;
  CommonOpts tw_common;
  tw_common.precision = 12;  // table default per the CSV contract
  auto* tw = app.add_subcommand("tw-table", "Tracy-Widom CDF tables");
  tw->add_option("--beta", tw_beta, "Restrict to one beta (default: all)")
      ->check(CLI::IsMember({1, 2, 4}));
  tw->add_option("--x-min", tw_xmin);
  tw->add_option("--x-max", tw_xmax);
  tw->add_option("--step", tw_step);
  auto* tw_at_opt = tw->add_option("--at", tw_at, "Evaluate at a single point");
  add_common(tw, tw_common);

  int ind_beta = 2, ind_n = 200;
  long long ind_samples = 5000;
  CommonOpts ind_common;
  auto* ind =
      app.add_subcommand("independence", "Extreme-eigenvalue joint vs product probe");
  ind->add_option("--beta", ind_beta)->check(CLI::IsMember({1, 2, 4}));
  ind->add_option("--n", ind_n);
  ind->add_option("--samples", ind_samples);
  add_common(ind, ind_common);

  double gum_p = 1.0;
  int gum_n = 10000;
  long long gum_samples = 10000;
  CommonOpts gum_common;
  auto* gum = app.add_subcommand("gumbel", "Sup-norm extreme-value check");
  gum->add_option("--p", gum_p)->check(CLI::Range(1.0, 64.0));
  gum->add_option("--n", gum_n);
  gum->add_option("--samples", gum_samples);
  add_common(gum, gum_common);

  int clt_beta = 2, clt_n = 400;
  long long clt_samples = 10000;
  CommonOpts clt_common;
  auto* clt = app.add_subcommand("clt", "Linear-statistic CLT summary");
  clt->add_option("--beta", clt_beta)->check(CLI::IsMember({1, 2, 4}));
  clt->add_option("--n", clt_n);
  clt->add_option("--samples", clt_samples);
  add_common(clt, clt_common);

  try {
    app.parse(argc, argv);

    if (*vol) {
      std::vector<int> ns;
      if (vol_range_opt->count())
        ns = parse_int_range(vol_range);
      else if (vol_n_opt->count())
        ns.push_back(vol_n);
      else
        throw std::invalid_argument("volume: give --n or --n-range");
      run_volume(vol_family, vol_p, vol_beta, ns, vol_common);
    } else if (*thr) {
      run_threshold(thr_family, thr_p, thr_q, thr_beta, thr_empirical, thr_n,
                    thr_samples, thr_common);
    } else if (*its) {
      std::vector<int> ns;
      if (int_nr_opt->count())
        ns = parse_int_range(int_nrange);
      else if (int_n_opt->count())
        ns.push_back(int_n);
      else
        throw std::invalid_argument("intersect: give --n or --n-range");
      std::vector<double> ts;
      if (int_tg_opt->count())
        ts = parse_double_range(int_tgrid);
      else if (int_t_opt->count())
        ts.push_back(int_t);
      else
        throw std::invalid_argument("intersect: give --t or --t-grid");
      run_intersect(int_family, int_p, int_q, int_beta, ns, ts, int_samples,
                    int_logdilate, int_common);
    } else if (*tw) {
      run_tw_table(tw_beta, tw_xmin, tw_xmax, tw_step,
                   tw_at_opt->count() ? std::optional<double>(tw_at) : std::nullopt,
                   tw_common);
    } else if (*ind) {
      run_independence(ind_beta, ind_n, ind_samples, ind_common);
    } else if (*gum) {
      run_gumbel(gum_p, gum_n, gum_samples, gum_common);
    } else if (*clt) {
      run_clt(clt_beta, clt_n, clt_samples, clt_common);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
