#include "femtosim/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "femtosim/specfun.hpp"

namespace femtosim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view v) {
  double out{};
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw std::invalid_argument("bad number '" + std::string(v) + "'");
  return out;
}

std::uint64_t parse_u64(std::string_view v) {
  std::uint64_t out{};
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw std::invalid_argument("bad integer '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument("bad boolean '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const std::size_t c = v.find(',');
    out.push_back(parse_double(trim(v.substr(0, c))));
    if (c == std::string_view::npos) break;
    v.remove_prefix(c + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

bool known_sweep(std::string_view s) {
  return s == "n_c" || s == "mu_f" || s == "mu_m" || s == "kappa" ||
         s == "d_f" || s == "theta";
}

// Applies one sweep value to a per-row copy of the config.
void apply_sweep_value(ExperimentConfig& local, const std::string& name,
                       double v) {
  NetworkParams& p = local.params;
  if (name == "n_c") {
    if (!(v >= 1.0) || v != std::floor(v) || v > 9e15)
      throw std::invalid_argument("n_c sweep values must be positive integers");
    p.n_c = static_cast<std::uint64_t>(v);
  } else if (name == "theta") {
    p.theta = v;
  } else if (name == "kappa") {
    p.kappa = v;
    if (local.kappa_o_tracks) p.kappa_o = v / 10.0;
  } else if (name == "mu_m") {
    p.mu_m = v;
  } else if (name == "mu_f") {
    p.mu_f = v;
  } else if (name == "d_f") {
    local.d_f = v;
  } else {
    throw std::invalid_argument("unknown sweep variable '" + name + "'");
  }
}

// Distances and weights the bound columns are averaged over: a single unit
// mass at d_f, or the radial law 2r/R^2 on a 64-point Gauss rule.
struct BoundNode {
  double d = 0.0;
  double w = 1.0;
  BoundInputs in;
  double gamma4 = 0.0;
};

std::vector<BoundNode> make_nodes(const ExperimentConfig& cfg) {
  std::vector<BoundNode> nodes;
  if (!cfg.average_d) {
    nodes.push_back(BoundNode{cfg.d_f, 1.0, {}, 0.0});
    return nodes;
  }
  const double R = cfg.params.R;
  const QuadRule g = gauss_legendre(64);
  nodes.reserve(g.node.size());
  for (std::size_t i = 0; i < g.node.size(); ++i) {
    const double d = 0.5 * R * (1.0 + g.node[i]);
    const double w = 0.5 * R * g.weight[i] * (2.0 * d / (R * R));
    nodes.push_back(BoundNode{d, w, {}, 0.0});
  }
  return nodes;
}

}  // namespace

void ExperimentConfig::validate() const {
  params.validate();
  if (!known_sweep(sweep))
    throw std::invalid_argument("unknown sweep variable '" + sweep + "'");
  if (values.empty()) throw std::invalid_argument("sweep value list is empty");
  if (trials < 1000) throw std::invalid_argument("trials must be >= 1000");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (grid_t < 1) throw std::invalid_argument("grid_t must be >= 1");
  if (gamma4_samples < 2)
    throw std::invalid_argument("gamma4_samples must be >= 2");
  if (target == VictimSide::fap && !average_d &&
      !(d_f > 0.0 && d_f < params.R) && sweep != "d_f")
    throw std::invalid_argument("d_f must lie strictly inside the cell");
}

void apply_kv(ExperimentConfig& cfg, std::string_view key,
              std::string_view value) {
  NetworkParams& p = cfg.params;
  if (key == "R") p.R = parse_double(value);
  else if (key == "lambda_f") p.lambda_f = parse_double(value);
  else if (key == "mu_f") p.mu_f = parse_double(value);
  else if (key == "mu_m") p.mu_m = parse_double(value);
  else if (key == "r_f") p.r_f = parse_double(value);
  else if (key == "delta") p.delta = parse_double(value);
  else if (key == "alpha") p.alpha = parse_double(value);
  else if (key == "kappa") {
    p.kappa = parse_double(value);
    if (cfg.kappa_o_tracks) p.kappa_o = p.kappa / 10.0;
  } else if (key == "kappa_o") {
    p.kappa_o = parse_double(value);
    cfg.kappa_o_tracks = false;
  } else if (key == "n_c") p.n_c = parse_u64(value);
  else if (key == "n_s") p.n_s = parse_u64(value);
  else if (key == "n_h") p.n_h = parse_u64(value);
  else if (key == "eta") p.eta = parse_double(value);
  else if (key == "theta") p.theta = parse_double(value);
  else if (key == "sigma2") p.sigma2 = parse_double(value);
  else if (key == "sweep") {
    cfg.sweep = std::string(value);
    if (!known_sweep(cfg.sweep))
      throw std::invalid_argument("unknown sweep variable '" + cfg.sweep + "'");
  } else if (key == "values") cfg.values = parse_list(value);
  else if (key == "trials") cfg.trials = parse_u64(value);
  else if (key == "seed") cfg.seed = parse_u64(value);
  else if (key == "threads")
    cfg.threads = static_cast<unsigned>(parse_u64(value));
  else if (key == "mode") {
    if (value == "full") cfg.mode = InterferenceMode::full;
    else if (value == "simplified") cfg.mode = InterferenceMode::simplified;
    else if (value == "collision") cfg.mode = InterferenceMode::collision;
    else throw std::invalid_argument("mode must be full, simplified or collision");
  } else if (key == "phi") {
    if (value == "exact") cfg.phi = PhiMode::exact;
    else if (value == "ub") cfg.phi = PhiMode::upper;
    else throw std::invalid_argument("phi must be exact or ub");
  } else if (key == "target") {
    if (value == "fap") cfg.target = VictimSide::fap;
    else if (value == "mbs") cfg.target = VictimSide::mbs;
    else throw std::invalid_argument("target must be fap or mbs");
  } else if (key == "d_f") cfg.d_f = parse_double(value);
  else if (key == "average_d") cfg.average_d = parse_bool(value);
  else if (key == "grid_t") cfg.grid_t = static_cast<int>(parse_u64(value));
  else if (key == "gamma4_samples") cfg.gamma4_samples = parse_u64(value);
  else if (key == "out") cfg.out = std::string(value);
  else if (key == "with_mc") cfg.with_mc = parse_bool(value);
  else if (key == "with_bounds") cfg.with_bounds = parse_bool(value);
  else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error(path + ": cannot open config file");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = line;
    const std::size_t hash = s.find('#');
    if (hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    try {
      apply_kv(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return cfg;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << "sweep_var,value,mc,mc_se,lb,ub,q1,q2,gamma4,chi,eps,n_conditioned\n";
  for (const ResultRow& r : rows) {
    os << r.sweep << ',' << format_double(r.value) << ',' << format_double(r.mc)
       << ',' << format_double(r.mc_se) << ',' << format_double(r.lb) << ','
       << format_double(r.ub) << ',' << format_double(r.q1) << ','
       << format_double(r.q2) << ',' << format_double(r.gamma4) << ','
       << format_double(r.chi) << ',' << format_double(r.eps) << ','
       << r.n_conditioned << '\n';
  }
}

void write_realization_csv(const Realization& r, std::ostream& os) {
  os << "kind,fap_index,x,y\n";
  for (std::size_t i = 0; i < r.faps.size(); ++i)
    os << "fap," << i << ',' << format_double(r.faps[i].x) << ','
       << format_double(r.faps[i].y) << '\n';
  for (const Point& u : r.mus)
    os << "mu,-1," << format_double(u.x) << ',' << format_double(u.y) << '\n';
  if (r.fus_sampled)
    for (std::size_t i = 0; i < r.fus.size(); ++i)
      for (const Point& q : r.fus[i])
        os << "fu," << i << ',' << format_double(q.x) << ','
           << format_double(q.y) << '\n';
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const RngStream root = RngStream::root(cfg.seed);
  // BoundInputs depend on the sweep variable only through kappa and d;
  // gamma4 additionally through theta and mu_m.  Everything else reuses
  // the same nodes across rows.
  const bool inputs_per_row = cfg.sweep == "kappa" || cfg.sweep == "d_f";
  const bool gamma4_per_row =
      inputs_per_row || cfg.sweep == "theta" || cfg.sweep == "mu_m";
  std::vector<BoundNode> nodes;
  bool inputs_ready = false;
  bool gamma4_ready = false;

  std::vector<ResultRow> rows;
  rows.reserve(cfg.values.size());
  for (std::size_t i = 0; i < cfg.values.size(); ++i) {
    ExperimentConfig local = cfg;
    apply_sweep_value(local, cfg.sweep, cfg.values[i]);
    local.params.validate();
    const NetworkParams& p = local.params;

    ResultRow row;
    row.sweep = cfg.sweep;
    row.value = cfg.values[i];

    if (cfg.with_bounds) {
      if (cfg.target == VictimSide::fap) {
        if (!inputs_ready || inputs_per_row) {
          nodes = make_nodes(local);
          for (BoundNode& n : nodes)
            n.in = BoundInputs::make(p, n.d, cfg.grid_t);
          inputs_ready = true;
          gamma4_ready = false;
        }
        if (!gamma4_ready || gamma4_per_row) {
          for (std::size_t k = 0; k < nodes.size(); ++k)
            nodes[k].gamma4 =
                estimate_gamma4(p, nodes[k].d, p.theta, nodes[k].in,
                                cfg.gamma4_samples, root.child("g4", k),
                                cfg.threads)
                    .mean;
          gamma4_ready = true;
        }
        double ub = 0, lb = 0, q1 = 0, q2 = 0, g4 = 0, chi = 0;
        for (const BoundNode& n : nodes) {
          ub += n.w * thm1_upper(p.theta, n.d, p, n.in, cfg.phi);
          const Thm2Result t2 =
              thm2_lower(p.theta, n.d, p, n.in, n.gamma4, cfg.phi);
          lb += n.w * t2.lb;
          chi += n.w * t2.chi;
          q2 += n.w * t2.q2;
          q1 += n.w * q1_mix(p.theta, p, n.in);
          g4 += n.w * n.gamma4;
        }
        row.ub = ub;
        row.lb = lb;
        row.q1 = q1;
        row.q2 = q2;
        row.gamma4 = g4;
        row.chi = chi;
      } else {
        const Thm3Result t3 = thm3_bounds(p.theta, p);
        row.lb = t3.lb;
        row.ub = t3.ub;
        row.eps = t3.eps;
      }
    }

    if (cfg.with_mc) {
      const RngStream mc = root.child("row", i).child("mc");
      try {
        OutageEstimate est;
        if (cfg.target == VictimSide::fap) {
          std::optional<double> d;
          if (!local.average_d) d = local.d_f;
          est = estimate_outage_mu_fap(p, d, cfg.trials, cfg.mode, mc,
                                       cfg.threads);
        } else {
          est = estimate_outage_mu_mbs(p, cfg.trials, cfg.mode, mc,
                                       cfg.threads);
        }
        row.mc = est.p_hat;
        row.mc_se = est.se;
        row.n_conditioned = est.trials_conditioned;
      } catch (const ConditioningError& e) {
        // Flagged, not dropped: nan estimate and a zero conditioned count.
        std::fprintf(stderr, "warning: %s=%s: %s\n", cfg.sweep.c_str(),
                     format_double(cfg.values[i]).c_str(), e.what());
        row.n_conditioned = 0;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

struct CurveSpec {
  std::string file;   // CSV name inside the output directory
  std::string title;  // legend entry in the plot script
  ExperimentConfig cfg;
};

std::vector<double> seq(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

std::vector<double> nc_values() { return seq(1, 15, 1); }

std::vector<double> df_values(double R) {
  std::vector<double> v = seq(0.1 * R, 0.9 * R, 0.1 * R);
  v.push_back(0.95 * R);
  return v;
}

void write_rows_file(const std::filesystem::path& path,
                     const std::vector<ResultRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error(path.string() + ": cannot open for write");
  write_csv(rows, os);
}

// Shared plot preamble; curves are appended by the per-figure emitters.
std::string plot_header(const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "set datafile separator \",\"\n";
  s += "set xlabel \"" + xlabel + "\"\n";
  s += "set ylabel \"" + ylabel + "\"\n";
  s += "set key top right\n";
  return s;
}

// plot fragment for one CSV: simulation with 3-sigma bars, then both bounds.
std::string plot_triplet(const std::string& file, const std::string& title,
                         const std::string& xexpr, bool first) {
  std::string s = first ? "plot " : ", \\\n     ";
  s += "\"" + file + "\" every ::1 using " + xexpr +
       ":3:(3*$4) with yerrorbars title \"" + title + " (sim)\"";
  s += ", \\\n     \"" + file + "\" every ::1 using " + xexpr +
       ":6 with lines title \"" + title + " (UB)\"";
  s += ", \\\n     \"" + file + "\" every ::1 using " + xexpr +
       ":5 with lines title \"" + title + " (LB)\"";
  return s;
}

}  // namespace

std::vector<std::string> run_figure(int figure, const ExperimentConfig& base) {
  const std::filesystem::path dir = base.out.empty() ? "." : base.out;
  std::filesystem::create_directories(dir);

  std::vector<CurveSpec> curves;
  std::string script;
  const std::string fig = "fig" + std::to_string(figure);

  ExperimentConfig proto = base;
  proto.target = VictimSide::fap;
  proto.average_d = false;
  proto.with_mc = true;
  proto.with_bounds = true;

  switch (figure) {
    case 3: {
      // Outage vs n_c at d_f = 800; last row is the no-backhaul reference.
      CurveSpec c{fig + ".csv", "n_c sweep", proto};
      c.cfg.sweep = "n_c";
      c.cfg.values = nc_values();
      c.cfg.values.push_back(1e6);
      curves.push_back(c);
      script = plot_header("backhaul capacity n_c", "outage probability");
      script += "set xrange [1:15]\n";
      script +=
          "stats \"" + fig + ".csv\" using ($2 > 1e5 ? $3 : 1/0) nooutput\n"
          "ref_mc = STATS_max\n"
          "stats \"" + fig + ".csv\" using ($2 > 1e5 ? $5 : 1/0) nooutput\n"
          "ref_lb = STATS_max\n"
          "stats \"" + fig + ".csv\" using ($2 > 1e5 ? $6 : 1/0) nooutput\n"
          "ref_ub = STATS_max\n";
      script += plot_triplet(fig + ".csv", "backhaul", "2", true);
      script +=
          ", \\\n     ref_mc with lines dashtype 2 title \"no limit (sim)\""
          ", \\\n     ref_ub with lines dashtype 2 title \"no limit (UB)\""
          ", \\\n     ref_lb with lines dashtype 2 title \"no limit (LB)\"\n";
      break;
    }
    case 4: {
      script = plot_header("backhaul capacity n_c", "outage probability");
      bool first = true;
      for (double muf : {2.5e-3, 5e-3, 1e-2}) {
        CurveSpec c{fig + "_muf" + format_double(muf) + ".csv",
                    "mu_f=" + format_double(muf), proto};
        c.cfg.params.mu_f = muf;
        c.cfg.sweep = "n_c";
        c.cfg.values = nc_values();
        script += plot_triplet(c.file, c.title, "2", first);
        first = false;
        curves.push_back(std::move(c));
      }
      script += "\n";
      break;
    }
    case 5: {
      // (a) FAP-served outage averaged over the FAP distance; (b) MBS-served.
      script = plot_header("backhaul capacity n_c", "outage probability");
      bool first = true;
      for (double mum : {2e-5, 4e-5}) {
        CurveSpec a{"fig5a_mum" + format_double(mum) + ".csv",
                    "FAP, mu_m=" + format_double(mum), proto};
        a.cfg.params.mu_m = mum;
        a.cfg.sweep = "n_c";
        a.cfg.values = nc_values();
        a.cfg.average_d = true;
        script += plot_triplet(a.file, a.title, "2", first);
        first = false;
        curves.push_back(std::move(a));

        CurveSpec b{"fig5b_mum" + format_double(mum) + ".csv",
                    "MBS, mu_m=" + format_double(mum), proto};
        b.cfg.params.mu_m = mum;
        b.cfg.sweep = "n_c";
        b.cfg.values = nc_values();
        b.cfg.target = VictimSide::mbs;
        script += plot_triplet(b.file, b.title, "2", false);
        curves.push_back(std::move(b));
      }
      script += "\n";
      break;
    }
    case 6: {
      // Outage vs kappa (kappa_o tracks kappa/10), with and without backhaul.
      script = plot_header("handover parameter kappa", "outage probability");
      bool first = true;
      for (double nc : {3.0, 1e6}) {
        const std::string tag = nc > 1e5 ? "nolimit" : "nc3";
        CurveSpec a{"fig6a_" + tag + ".csv", "FAP, " + tag, proto};
        a.cfg.params.n_c = static_cast<std::uint64_t>(nc);
        a.cfg.sweep = "kappa";
        a.cfg.values = seq(0.02, 0.20, 0.02);
        a.cfg.average_d = true;
        a.cfg.kappa_o_tracks = true;
        script += plot_triplet(a.file, a.title, "2", first);
        first = false;
        curves.push_back(std::move(a));

        CurveSpec b{"fig6b_" + tag + ".csv", "MBS, " + tag, proto};
        b.cfg.params.n_c = static_cast<std::uint64_t>(nc);
        b.cfg.sweep = "kappa";
        b.cfg.values = seq(0.02, 0.20, 0.02);
        b.cfg.target = VictimSide::mbs;
        b.cfg.kappa_o_tracks = true;
        script += plot_triplet(b.file, b.title, "2", false);
        curves.push_back(std::move(b));
      }
      script += "\n";
      break;
    }
    case 7: {
      script = plot_header("normalized FAP distance d_f / R",
                           "outage probability");
      const std::string xexpr =
          "($2/" + format_double(base.params.R) + ")";
      bool first = true;
      for (double nc : {3.0, 1e6}) {
        const std::string tag = nc > 1e5 ? "nolimit" : "nc3";
        CurveSpec c{fig + "_" + tag + ".csv", tag, proto};
        c.cfg.params.n_c = static_cast<std::uint64_t>(nc);
        c.cfg.sweep = "d_f";
        c.cfg.values = df_values(base.params.R);
        script += plot_triplet(c.file, c.title, xexpr, first);
        first = false;
        curves.push_back(std::move(c));
      }
      script += "\n";
      break;
    }
    case 8: {
      script = plot_header("FAP distance d_f", "outage probability");
      bool first = true;
      for (double mum : {2e-5, 4e-5, 8e-5}) {
        CurveSpec c{fig + "_mum" + format_double(mum) + ".csv",
                    "mu_m=" + format_double(mum), proto};
        c.cfg.params.mu_m = mum;
        c.cfg.params.n_c = 3;
        c.cfg.sweep = "d_f";
        c.cfg.values = df_values(base.params.R);
        script += plot_triplet(c.file, c.title, "2", first);
        first = false;
        curves.push_back(std::move(c));
      }
      script += "\n";
      break;
    }
    default:
      throw std::invalid_argument("figure must be 3..8");
  }

  std::vector<std::string> written;
  for (const CurveSpec& c : curves) {
    const std::filesystem::path path = dir / c.file;
    write_rows_file(path, run_sweep(c.cfg));
    written.push_back(path.string());
  }
  const std::filesystem::path gp = dir / (fig + ".gp");
  {
    std::ofstream os(gp);
    if (!os) throw std::runtime_error(gp.string() + ": cannot open for write");
    os << script;
  }
  written.push_back(gp.string());
  return written;
}

}  // namespace femtosim
