#ifndef PCIP_PIPELINE_HPP
#define PCIP_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "carleman.hpp"
#include "phantoms.hpp"
#include "reconstruction.hpp"

namespace pcip {

// One flat bag of run parameters. Defaults are the artifact's calibrated
// values: the reference test (ellipse, noiseless) was used to fix the
// Carleman/regularization parameters once, and they stay fixed for every
// phantom and noise level.
struct RunConfig {
  std::string test = "ellipse";
  double noise = 0.05;
  uint64_t seed = 1;
  std::string out_dir = "runs/out";

  double R = 1.0;
  double R1 = 3.0;
  double T = 0.5;
  int nx1 = 241;
  int nt_time = 4001;

  int n1 = 15;
  int nt = 10;
  int nz = 81;
  int reduce_time_stride = 1;

  double lambda = 3.0;
  double z0 = -10.0;
  double eps = 3e-2;
  double kappa0 = 1e-3;
  int max_iters = 30;
  double ball_radius = 1e3;

  double p_value = 2.0;
  double constant_c = 0.0;  // test == "constant"
  bool dump_intermediates = false;

  /// Parse "key = value" lines; '#' starts a comment. Unknown keys are errors.
  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Checks every precondition the modules rely on; messages name the
  /// violated constraint.
  void validate() const;

  PhantomSpec phantom() const;
  CarlemanParams carleman() const;
  ForwardGrid forward_grid() const;
};

struct PipelineResult {
  ReconstructionReport report;
  IterationTrace trace;
};

/// Full run: forward simulation, noise, reduction, Galerkin assembly,
/// Carleman-Picard solve, reconstruction, artifacts on disk
/// (c_true.csv, c_comp.csv, convergence.csv, report.json, plot scripts,
/// optional boundary dumps).
PipelineResult run_pipeline(const RunConfig& config);

/// Truncation-mismatch sweep over a cutoff grid; writes cutoff_sweep.csv
/// (columns N1, Nt, sup_mismatch) next to the other artifacts.
struct SweepRow {
  int n1, nt;
  double sup_mismatch;
};
std::vector<SweepRow> sweep_cutoff(const RunConfig& config, const std::vector<int>& n1_list,
                                   const std::vector<int>& nt_list);

/// gnuplot scripts for the standard figures; requires the CSVs to exist.
/// Throws Error(MissingArtifact) naming the absent file.
void emit_plots(const std::string& run_dir);

}  // namespace pcip

#endif
