// Command-line front end: sweeps, figure reproduction and self-validation
// suites for the two-tier uplink outage model.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "femtosim/experiment.hpp"
#include "femtosim/specfun.hpp"

namespace {

using namespace femtosim;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed, trials, gamma4_samples;
  std::optional<unsigned> threads;
  std::optional<std::string> out, mode, phi, sweep, values, target;
  std::optional<double> theta, d_f;
  std::optional<int> figure;
  bool average_d = false;
  std::vector<std::string> sets;

  void attach(CLI::App* sc, bool with_figure) {
    sc->add_option("--config", config_path, "key=value config file");
    sc->add_option("--seed", seed, "RNG master seed");
    sc->add_option("--trials", trials, "conditioned trials per sweep point");
    sc->add_option("--threads", threads, "worker threads");
    sc->add_option("--out", out, "output CSV path (directory for figures)");
    sc->add_option("--mode", mode,
                   "interference model: full|simplified|collision");
    sc->add_option("--phi", phi, "not-served transform: exact|ub");
    sc->add_option("--sweep", sweep,
                   "swept variable: n_c|mu_f|mu_m|kappa|d_f|theta");
    sc->add_option("--values", values, "comma-separated sweep values");
    sc->add_option("--theta", theta, "SIR threshold");
    sc->add_option("--d-f", d_f, "tagged FAP distance from the MBS");
    sc->add_option("--target", target, "victim side: fap|mbs");
    sc->add_flag("--average-d", average_d,
                 "average the FAP distance out (radial law)");
    sc->add_option("--gamma4-samples", gamma4_samples,
                   "samples for the lower-bound expectation");
    sc->add_option("--set", sets, "extra key=value overrides");
    if (with_figure)
      sc->add_option("--figure", figure, "run the sweep behind figure 3..8")
          ->check(CLI::Range(3, 8));
  }

  ExperimentConfig build() const {
    ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    for (const std::string& kv : sets) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      apply_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    if (gamma4_samples) cfg.gamma4_samples = *gamma4_samples;
    if (out) cfg.out = *out;
    if (mode) apply_kv(cfg, "mode", *mode);
    if (phi) apply_kv(cfg, "phi", *phi);
    if (sweep) apply_kv(cfg, "sweep", *sweep);
    if (values) apply_kv(cfg, "values", *values);
    if (target) apply_kv(cfg, "target", *target);
    if (theta) cfg.params.theta = *theta;
    if (d_f) cfg.d_f = *d_f;
    if (average_d) cfg.average_d = true;
    if (cfg.values.empty()) {
      // Single point at the current value of the swept variable.
      double v = 0.0;
      if (cfg.sweep == "n_c") v = static_cast<double>(cfg.params.n_c);
      else if (cfg.sweep == "theta") v = cfg.params.theta;
      else if (cfg.sweep == "kappa") v = cfg.params.kappa;
      else if (cfg.sweep == "mu_m") v = cfg.params.mu_m;
      else if (cfg.sweep == "mu_f") v = cfg.params.mu_f;
      else v = cfg.d_f;
      cfg.values = {v};
    }
    return cfg;
  }
};

int emit_rows(const ExperimentConfig& cfg) {
  const std::vector<ResultRow> rows = run_sweep(cfg);
  if (cfg.out.empty()) {
    write_csv(rows, std::cout);
  } else {
    std::ofstream os(cfg.out);
    if (!os) {
      std::cerr << cfg.out << ": cannot open for write\n";
      return 1;
    }
    write_csv(rows, os);
    std::cerr << "wrote " << cfg.out << "\n";
  }
  return 0;
}

int emit_figure(int figure, const ExperimentConfig& cfg) {
  for (const std::string& path : run_figure(figure, cfg))
    std::cerr << "wrote " << path << "\n";
  return 0;
}

bool report(const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  return ok;
}

std::string num(double v) { return format_double(v); }

// Analytic direction plus an empirical 3-sigma check of the closed-form
// upper bound on E[exp(-s N_ns)] for the tagged FAP's unserved users.
bool validate_lemma1(const ExperimentConfig& cfg) {
  const NetworkParams& p = cfg.params;
  bool ok = true;
  double worst = 0.0;
  for (double d : {200.0, 500.0, 800.0})
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double gap =
          laplace_ns_exact(s, d, p) - laplace_ns_upper(s, d, p);
      worst = std::max(worst, gap);
    }
  ok &= report("lemma1 analytic direction", worst <= 1e-12,
               "max(exact - ub) = " + num(worst));

  const ClassCountSamples cc = sample_class_counts(
      p, cfg.d_f, cfg.trials, RngStream::root(cfg.seed).child("lemma1"));
  for (double s : {0.1, 0.5, 1.0, 2.0}) {
    const MeanEstimate emp = empirical_laplace(cc.ns_tagged, s);
    const double ub = laplace_ns_upper(s, cfg.d_f, p);
    ok &= report("lemma1 empirical direction",
                 emp.mean <= ub + 3.0 * emp.se,
                 "s=" + num(s) + " emp=" + num(emp.mean) + " ub=" + num(ub) +
                     " se=" + num(emp.se));
  }
  return ok;
}

// Two-sided bracket for E[exp(-s N)] of the macro-served user count.  The
// lower direction switches from a z-test to the distribution-free upper
// confidence bound once the transform's dominating count region (around
// nbar e^-s) is too rare to appear in the sample, where the normal
// approximation would reject true means.
bool validate_lemma2(const ExperimentConfig& cfg) {
  const NetworkParams& p = cfg.params;
  const ClassCountSamples cc = sample_class_counts(
      p, std::nullopt, cfg.trials, RngStream::root(cfg.seed).child("lemma2"));
  bool ok = true;
  for (double s : {0.1, 0.5, 1.0, 2.0}) {
    const MeanEstimate emp = empirical_laplace(cc.mbs_served, s);
    const LaplaceBracket br = laplace_mbs_bracket(s, p);
    const double nbar = p.nbar_mu();
    const double tilt = poisson_cdf(
        static_cast<std::uint64_t>(nbar * std::exp(-s)), nbar);
    const bool z_valid = tilt * static_cast<double>(emp.n) >= 10.0;
    const bool lo = z_valid
                        ? br.lb - 3.0 * emp.se <= emp.mean
                        : br.lb <= mean_upper_confidence(emp, 0.0013499);
    const bool pass = lo && emp.mean <= br.ub + 3.0 * emp.se;
    ok &= report("lemma2 bracket", pass,
                 "s=" + num(s) + " lb=" + num(br.lb) + " emp=" + num(emp.mean) +
                     " ub=" + num(br.ub) + " se=" + num(emp.se) +
                     (z_valid ? "" : " (confidence-bound test)"));
  }
  return ok;
}

// Histogram of the distance of uncovered users against the pdf bracket,
// and the small-kappa collapse to the plain radial law.
bool validate_appendix_b(const ExperimentConfig& cfg) {
  const NetworkParams& p = cfg.params;
  const RngStream root = RngStream::root(cfg.seed);
  const std::vector<double> xs =
      sample_uncovered_distances(p, cfg.trials, root.child("appB"));
  const int bins = 20;
  const Histogram h = histogram_density(xs, 0.0, p.R, bins);
  const QuadRule g = gauss_legendre(16);
  bool ok = true;
  int violations = 0;
  for (int b = 0; b < bins; ++b) {
    const double lo = h.edges[b], hi = h.edges[b + 1];
    double ilb = 0.0, iub = 0.0;
    for (std::size_t k = 0; k < g.node.size(); ++k) {
      const double d = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.node[k];
      const PdfBracket f = pdf_du_bounds(d, p);
      ilb += 0.5 * (hi - lo) * g.weight[k] * f.lb;
      iub += 0.5 * (hi - lo) * g.weight[k] * f.ub;
    }
    const double w = hi - lo;
    if (!(ilb / w - 3.0 * h.se[b] <= h.density[b] &&
          h.density[b] <= iub / w + 3.0 * h.se[b]))
      ++violations;
  }
  ok &= report("appendixB pdf bracket", violations == 0,
               std::to_string(violations) + "/20 bins outside the bracket");

  NetworkParams small = p;
  small.kappa = 0.02;
  small.kappa_o = 0.002;
  const std::vector<double> ys =
      sample_uncovered_distances(small, cfg.trials, root.child("appB-small"));
  const double ks = ks_vs_radial_cdf(ys, p.R);
  ok &= report("appendixB small-kappa KS", ks < 0.02, "ks=" + num(ks));
  return ok;
}

// Fixed deployments where every interference weight is known in closed
// form; fading-only simulation must match the product formula.
bool validate_oracle(const ExperimentConfig& cfg) {
  const NetworkParams p;  // defaults
  RngStream rng = RngStream::root(cfg.seed).child("oracle");
  struct Case {
    const char* name;
    Realization r;
    Assignment a;
    std::size_t victim;
    double expect;
  };
  std::vector<Case> cases;

  const double g = p.spreading_gain();
  {
    // Tagged FAP at 800 serving the victim plus one of its own femto users.
    Case c;
    c.name = "one co-cell femto user";
    c.r.faps = {Point{800.0, 0.0}};
    c.r.tagged_fap = 0;
    c.r.mus = {Point{830.0, 0.0}};
    c.r.fu_counts = {1};
    c.r.fus = {{Point{812.0, 0.0}}};
    c.r.fus_sampled = true;
    c.a.candidate = {0};
    c.a.serving = {0};
    c.a.served = {{0}};
    c.victim = 0;
    const double w = p.eta / g;
    c.expect = 1.0 - 1.0 / (1.0 + p.theta * w * p.n_s / p.eta);
    cases.push_back(std::move(c));
  }
  {
    // Victim plus one macro-served user at distance ratio 9.
    Case c;
    c.name = "one macro interferer";
    c.r.faps = {Point{800.0, 0.0}};
    c.r.tagged_fap = 0;
    c.r.mus = {Point{830.0, 0.0}, Point{900.0, 0.0}};
    c.r.fu_counts = {0};
    c.r.fus = {{}};
    c.r.fus_sampled = true;
    c.a.candidate = {0, Assignment::mbs};
    c.a.serving = {0, Assignment::mbs};
    c.a.served = {{0}};
    c.victim = 0;
    const double w = std::pow(9.0, p.alpha) / g;
    c.expect = 1.0 - 1.0 / (1.0 + p.theta * w * p.n_s / p.eta);
    cases.push_back(std::move(c));
  }
  {
    // Both interferer kinds at once.
    Case c;
    c.name = "mixed interferers";
    c.r.faps = {Point{800.0, 0.0}};
    c.r.tagged_fap = 0;
    c.r.mus = {Point{830.0, 0.0}, Point{900.0, 0.0}};
    c.r.fu_counts = {1};
    c.r.fus = {{Point{812.0, 0.0}}};
    c.r.fus_sampled = true;
    c.a.candidate = {0, Assignment::mbs};
    c.a.serving = {0, Assignment::mbs};
    c.a.served = {{0}};
    c.victim = 0;
    const double w1 = p.eta / g;
    const double w2 = std::pow(9.0, p.alpha) / g;
    c.expect = 1.0 - (1.0 / (1.0 + p.theta * w1 * p.n_s / p.eta)) *
                         (1.0 / (1.0 + p.theta * w2 * p.n_s / p.eta));
    cases.push_back(std::move(c));
  }

  bool ok = true;
  const std::uint64_t n = 200000;
  for (Case& c : cases) {
    std::uint64_t outages = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double fad = sample_fading(p, rng);
      const double intf = interference_at_tagged_fap(
          c.r, c.a, c.victim, p, InterferenceMode::full, rng);
      if (sir_outage(p.eta, fad, intf, p)) ++outages;
    }
    const double hat = static_cast<double>(outages) / static_cast<double>(n);
    const double se = std::sqrt(c.expect * (1.0 - c.expect) /
                                static_cast<double>(n));
    ok &= report("oracle product formula", std::fabs(hat - c.expect) <= 3.0 * se,
                 std::string(c.name) + ": sim=" + num(hat) +
                     " formula=" + num(c.expect) + " se=" + num(se));
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink outage simulator and analytic bounds for a two-tier "
               "network with backhaul-limited femtocells"};
  app.require_subcommand(1);

  CommonFlags sim_flags, bounds_flags, fig_flags, val_flags;
  int figure_number = 3;
  std::string suite;
  std::string dump_path;

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimates only");
  sim_flags.attach(sim, true);
  sim->add_option("--dump", dump_path,
                  "also write one sampled deployment to this CSV");

  CLI::App* bnd = app.add_subcommand("bounds", "analytic bounds only");
  bounds_flags.attach(bnd, true);

  CLI::App* fig = app.add_subcommand("figure", "reproduce a published figure");
  fig->add_option("number", figure_number, "figure number")
      ->required()
      ->check(CLI::Range(3, 8));
  fig_flags.attach(fig, false);

  CLI::App* val = app.add_subcommand("validate", "self-check suites");
  val->add_option("suite", suite, "lemma1|lemma2|appendixB|oracle")->required();
  val_flags.attach(val, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      ExperimentConfig cfg = sim_flags.build();
      if (!dump_path.empty()) {
        Realization r = sample_realization(
            cfg.params, cfg.d_f, RngStream::root(cfg.seed).child("dump"));
        std::ofstream os(dump_path);
        if (!os) throw std::runtime_error(dump_path + ": cannot open");
        write_realization_csv(r, os);
        std::cerr << "wrote " << dump_path << "\n";
      }
      if (sim_flags.figure) return emit_figure(*sim_flags.figure, cfg);
      cfg.with_bounds = false;
      return emit_rows(cfg);
    }
    if (bnd->parsed()) {
      ExperimentConfig cfg = bounds_flags.build();
      if (bounds_flags.figure) return emit_figure(*bounds_flags.figure, cfg);
      cfg.with_mc = false;
      return emit_rows(cfg);
    }
    if (fig->parsed()) return emit_figure(figure_number, fig_flags.build());
    if (val->parsed()) {
      const ExperimentConfig cfg = val_flags.build();
      bool ok;
      if (suite == "lemma1") ok = validate_lemma1(cfg);
      else if (suite == "lemma2") ok = validate_lemma2(cfg);
      else if (suite == "appendixB") ok = validate_appendix_b(cfg);
      else if (suite == "oracle") ok = validate_oracle(cfg);
      else throw std::invalid_argument("unknown suite '" + suite + "'");
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
