// Experiment orchestration: config files, parameter sweeps, CSV output and
// plot-script emission for the outage figures.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "femtosim/montecarlo.hpp"

namespace femtosim {

enum class VictimSide { fap, mbs };

struct ExperimentConfig {
  NetworkParams params;
  std::string sweep = "theta";  // n_c | mu_f | mu_m | kappa | d_f | theta
  std::vector<double> values;   // one row per value
  std::uint64_t trials = 100000;
  std::uint64_t seed = 12345;
  unsigned threads = 1;
  InterferenceMode mode = InterferenceMode::full;
  PhiMode phi = PhiMode::exact;
  VictimSide target = VictimSide::fap;
  double d_f = 800.0;
  bool average_d = false;       // integrate the tagged distance out (radial law)
  bool kappa_o_tracks = true;   // kappa_o follows kappa/10 during kappa sweeps
  int grid_t = 8;
  std::uint64_t gamma4_samples = 400000;
  std::string out;              // CSV path (sweeps) or directory (figures)
  bool with_mc = true;
  bool with_bounds = true;

  void validate() const;  // throws std::invalid_argument
};

// One "key=value" assignment; unknown keys or unparsable values throw.
void apply_kv(ExperimentConfig& cfg, std::string_view key,
              std::string_view value);

// Flat key=value file, '#' comments; errors carry file:line.
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::string sweep;
  double value = 0.0;
  double mc = std::numeric_limits<double>::quiet_NaN();
  double mc_se = std::numeric_limits<double>::quiet_NaN();
  double lb = std::numeric_limits<double>::quiet_NaN();
  double ub = std::numeric_limits<double>::quiet_NaN();
  double q1 = std::numeric_limits<double>::quiet_NaN();
  double q2 = std::numeric_limits<double>::quiet_NaN();
  double gamma4 = std::numeric_limits<double>::quiet_NaN();
  double chi = std::numeric_limits<double>::quiet_NaN();
  double eps = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t n_conditioned = 0;
};

// Evaluates every sweep value; a point whose conditioning event never
// happens is kept with mc = nan rather than dropped.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg);

// Shortest round-trip decimal form (the CSV number format).
std::string format_double(double v);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os);

// One point record per line: kind (fap|mu|fu), owning FAP index, x, y.
void write_realization_csv(const Realization& r, std::ostream& os);

// Reproduces the sweep behind one published figure (3..8); writes CSVs and
// a gnuplot script into cfg.out (a directory) and returns the paths.
std::vector<std::string> run_figure(int figure, const ExperimentConfig& cfg);

}  // namespace femtosim
