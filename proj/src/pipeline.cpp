#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "error.hpp"

namespace fs = std::filesystem;

namespace pcip {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "config key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "config key '" + key + "': cannot parse '" + value + "' as an integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorCode::InvalidConfig, "config key '" + key + "': cannot parse '" + value + "' as a bool");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "test") test = value;
  else if (key == "noise") noise = parse_double(key, value);
  else if (key == "seed") seed = static_cast<uint64_t>(parse_int(key, value));
  else if (key == "out_dir") out_dir = value;
  else if (key == "R") R = parse_double(key, value);
  else if (key == "R1") R1 = parse_double(key, value);
  else if (key == "T") T = parse_double(key, value);
  else if (key == "nx1") nx1 = static_cast<int>(parse_int(key, value));
  else if (key == "nt_time") nt_time = static_cast<int>(parse_int(key, value));
  else if (key == "n1") n1 = static_cast<int>(parse_int(key, value));
  else if (key == "nt") nt = static_cast<int>(parse_int(key, value));
  else if (key == "nz") nz = static_cast<int>(parse_int(key, value));
  else if (key == "reduce_time_stride") reduce_time_stride = static_cast<int>(parse_int(key, value));
  else if (key == "lambda") lambda = parse_double(key, value);
  else if (key == "z0") z0 = parse_double(key, value);
  else if (key == "eps") eps = parse_double(key, value);
  else if (key == "kappa0") kappa0 = parse_double(key, value);
  else if (key == "max_iters") max_iters = static_cast<int>(parse_int(key, value));
  else if (key == "ball_radius") ball_radius = parse_double(key, value);
  else if (key == "p_value") p_value = parse_double(key, value);
  else if (key == "constant_c") constant_c = parse_double(key, value);
  else if (key == "dump_intermediates") dump_intermediates = parse_bool(key, value);
  else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
}

std::string RunConfig::get(const std::string& key) const {
  if (key == "test") return test;
  if (key == "noise") return format_double(noise);
  if (key == "seed") return std::to_string(seed);
  if (key == "out_dir") return out_dir;
  if (key == "R") return format_double(R);
  if (key == "R1") return format_double(R1);
  if (key == "T") return format_double(T);
  if (key == "nx1") return std::to_string(nx1);
  if (key == "nt_time") return std::to_string(nt_time);
  if (key == "n1") return std::to_string(n1);
  if (key == "nt") return std::to_string(nt);
  if (key == "nz") return std::to_string(nz);
  if (key == "reduce_time_stride") return std::to_string(reduce_time_stride);
  if (key == "lambda") return format_double(lambda);
  if (key == "z0") return format_double(z0);
  if (key == "eps") return format_double(eps);
  if (key == "kappa0") return format_double(kappa0);
  if (key == "max_iters") return std::to_string(max_iters);
  if (key == "ball_radius") return format_double(ball_radius);
  if (key == "p_value") return format_double(p_value);
  if (key == "constant_c") return format_double(constant_c);
  if (key == "dump_intermediates") return dump_intermediates ? "true" : "false";
  throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidConfig,
                  path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::validate() const {
  phantom_kind_from_name(test);  // throws on unknown phantom
  if (!(noise >= 0.0 && noise < 1.0))
    throw Error(ErrorCode::InvalidConfig, "noise level must satisfy 0 <= delta < 1");
  forward_grid().validate();     // stability ratio, grid sizes
  if (!(R > 0.0 && R < R1))
    throw Error(ErrorCode::InvalidConfig, "domain requires 0 < R < R1");
  const double steps = (R1 - R) / forward_grid().dx();
  if (std::abs(steps - std::lround(steps)) > 1e-9)
    throw Error(ErrorCode::GridMismatch,
                "+-R must lie on forward grid lines: (R1-R)/dx = " + std::to_string(steps));
  CutoffSpec{n1, nt}.validate();
  if (nz < 5) throw Error(ErrorCode::InvalidConfig, "z-grid needs nz >= 5");
  if (reduce_time_stride < 1 || (nt_time - 1) % reduce_time_stride != 0)
    throw Error(ErrorCode::InvalidConfig,
                "reduce_time_stride must be >= 1 and divide nt_time - 1");
  carleman().validate(R);
  if (!(p_value > 0.0))
    throw Error(ErrorCode::InvalidInitialCondition, "initial value p must be positive");
}

PhantomSpec RunConfig::phantom() const {
  PhantomSpec spec;
  spec.kind = phantom_kind_from_name(test);
  spec.c0 = constant_c;
  return spec;
}

CarlemanParams RunConfig::carleman() const {
  return {lambda, z0, eps, kappa0, max_iters, ball_radius};
}

ForwardGrid RunConfig::forward_grid() const { return {R1, nx1, T, nt_time}; }

namespace {

void write_field_csv(const std::string& path, const CoefficientField& field) {
  CsvWriter csv(path, {"x", "z", "value"});
  for (size_t ix = 0; ix < field.xgrid.size(); ++ix)
    for (size_t iz = 0; iz < field.zgrid.size(); ++iz)
      csv.row({field.xgrid[ix], field.zgrid[iz], field.at(static_cast<int>(ix), static_cast<int>(iz))});
}

void write_boundary_csv(const std::string& path, const BoundaryRecord& rec,
                        const std::vector<double>& xgrid, double T) {
  CsvWriter csv(path, {"x", "t", "f", "g"});
  const double dt = T / (rec.nt - 1);
  for (int ix = 0; ix < rec.nx; ++ix)
    for (int it = 0; it < rec.nt; ++it)
      csv.row({xgrid[ix], it * dt, rec.fat(ix, it), rec.gat(ix, it)});
}

void write_trace_csv(const std::string& path, const IterationTrace& trace) {
  CsvWriter csv(path, {"k", "l2_change", "rel_linf_change", "J_value", "h2_norm"});
  for (const auto& r : trace.records)
    csv.row({static_cast<double>(r.k), r.l2_change, r.rel_linf_change, r.j_value, r.h2_norm});
}

void write_report_json(const std::string& path, const RunConfig& config,
                       const ReconstructionReport& rep) {
  nlohmann::ordered_json j;
  j["test"] = config.test;
  j["noise"] = config.noise;
  j["seed"] = config.seed;
  j["iterations"] = rep.iterations;
  j["wall_time_seconds"] = rep.wall_time_seconds;
  j["max_in_inclusion"] = rep.max_in_inclusion;
  j["relative_max_error"] = rep.relative_max_error;
  j["l2_relative_error"] = rep.l2_relative_error;
  j["converged"] = rep.converged;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

std::vector<double> restricted_xgrid(const RunConfig& config) {
  const ForwardGrid grid = config.forward_grid();
  const int jm = static_cast<int>(std::lround((config.R1 - config.R) / grid.dx()));
  const int jp = grid.nx1 - 1 - jm;
  std::vector<double> x;
  for (int i = jm; i <= jp; ++i) x.push_back(grid.x(i));
  return x;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();
  fs::create_directories(config.out_dir);

  // forward data
  const ForwardGrid grid = config.forward_grid();
  std::vector<double> c_grid(static_cast<size_t>(grid.nx1) * grid.nx1);
  const PhantomSpec spec = config.phantom();
  for (int i = 0; i < grid.nx1; ++i)
    for (int j = 0; j < grid.nx1; ++j)
      c_grid[static_cast<size_t>(i) * grid.nx1 + j] = eval_phantom(spec, grid.x(i), grid.x(j));
  auto [top, bottom] = solve_forward_boundary(c_grid, config.p_value, grid, config.R, BoundaryRule{});

  // noise: one stream, top record then bottom, f before g inside each
  if (config.noise > 0.0) {
    NoiseStream stream(config.seed);
    stream.apply(top, config.noise);
    stream.apply(bottom, config.noise);
  }

  const std::vector<double> xgrid = restricted_xgrid(config);
  if (config.dump_intermediates) {
    write_boundary_csv(config.out_dir + "/boundary_data_top.csv", top, xgrid, config.T);
    write_boundary_csv(config.out_dir + "/boundary_data_bottom.csv", bottom, xgrid, config.T);
  }

  // reduction
  const CutoffSpec cutoff{config.n1, config.nt};
  auto bx = OrthonormalBasis1D::orthonormalize({-config.R, config.R, cutoff.n1});
  auto bt = OrthonormalBasis1D::orthonormalize({0.0, config.T, cutoff.nt});
  CauchyData cauchy = build_cauchy_data(top, bottom, bx, bt, xgrid, config.T,
                                        config.reduce_time_stride);

  // reduced operators + Carleman-Picard solve
  GalerkinOperators ops = assemble_operators(bx, bt, cutoff, config.p_value);
  const std::vector<double> zgrid = uniform_zgrid(config.R, config.nz);
  auto [profile, trace] = picard_solve(ops, cauchy, config.carleman(), zgrid);

  // reconstruction + metrics
  CoefficientField c_comp = reconstruct_c(profile, bx, bt, cutoff, config.p_value, xgrid);
  CoefficientField c_true = sample_phantom(spec, xgrid, zgrid);
  ReconstructionReport rep = metrics(c_comp, c_true, inclusion_masks(spec));
  rep.iterations = static_cast<int>(trace.records.size());
  rep.converged = trace.converged;
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  write_field_csv(config.out_dir + "/c_true.csv", c_true);
  write_field_csv(config.out_dir + "/c_comp.csv", c_comp);
  write_trace_csv(config.out_dir + "/convergence.csv", trace);
  write_report_json(config.out_dir + "/report.json", config, rep);
  emit_plots(config.out_dir);

  return {std::move(rep), std::move(trace)};
}

std::vector<SweepRow> sweep_cutoff(const RunConfig& config, const std::vector<int>& n1_list,
                                   const std::vector<int>& nt_list) {
  config.validate();
  for (int v : n1_list) CutoffSpec{v, 1}.validate();
  for (int v : nt_list) CutoffSpec{1, v}.validate();
  fs::create_directories(config.out_dir);

  const ForwardGrid grid = config.forward_grid();
  std::vector<double> c_grid(static_cast<size_t>(grid.nx1) * grid.nx1);
  const PhantomSpec spec = config.phantom();
  for (int i = 0; i < grid.nx1; ++i)
    for (int j = 0; j < grid.nx1; ++j)
      c_grid[static_cast<size_t>(i) * grid.nx1 + j] = eval_phantom(spec, grid.x(i), grid.x(j));
  auto [top, bottom] = solve_forward_boundary(c_grid, config.p_value, grid, config.R, BoundaryRule{});
  if (config.noise > 0.0) {
    NoiseStream stream(config.seed);
    stream.apply(top, config.noise);
    stream.apply(bottom, config.noise);
  }

  // the cutoff is examined on the bottom-side values, as in the calibration
  const std::vector<double> xgrid = restricted_xgrid(config);
  const auto tgrid = subsampled_times(config.T, bottom.nt, config.reduce_time_stride);
  Mat samples = record_samples(bottom, false, config.reduce_time_stride);

  std::vector<SweepRow> rows;
  for (int n1v : n1_list) {
    auto bx = OrthonormalBasis1D::orthonormalize({-config.R, config.R, n1v});
    for (int ntv : nt_list) {
      auto bt = OrthonormalBasis1D::orthonormalize({0.0, config.T, ntv});
      Projector proj(bx, bt, xgrid, tgrid);
      rows.push_back({n1v, ntv, proj.mismatch_sup(samples)});
    }
  }
  CsvWriter csv(config.out_dir + "/cutoff_sweep.csv", {"N1", "Nt", "sup_mismatch"});
  for (const auto& r : rows)
    csv.row({static_cast<double>(r.n1), static_cast<double>(r.nt), r.sup_mismatch});
  return rows;
}

void emit_plots(const std::string& run_dir) {
  const auto require = [&](const std::string& name) {
    if (!fs::exists(fs::path(run_dir) / name))
      throw Error(ErrorCode::MissingArtifact, name);
  };
  require("c_true.csv");
  require("c_comp.csv");
  require("convergence.csv");

  const auto heatmap = [&](const std::string& script, const std::string& csv,
                           const std::string& title) {
    std::ofstream out(fs::path(run_dir) / script, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write plot script " + script);
    out << "# gnuplot script; run from inside the run directory\n"
        << "set datafile separator ','\n"
        << "set title '" << title << "'\n"
        << "set xlabel 'x'\nset ylabel 'z'\n"
        << "set view map\n"
        << "splot '" << csv << "' every ::1 using 1:2:3 with points pt 5 ps 0.6 palette notitle\n";
  };
  heatmap("plot_c_true.gp", "c_true.csv", "true coefficient");
  heatmap("plot_c_comp.gp", "c_comp.csv", "reconstructed coefficient");
  std::ofstream out(fs::path(run_dir) / "plot_convergence.gp", std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write plot script plot_convergence.gp");
  out << "# gnuplot script; run from inside the run directory\n"
      << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set xlabel 'iteration k'\nset ylabel 'consecutive change'\n"
      << "plot 'convergence.csv' every ::1 using 1:2 with linespoints title 'L2 change', \\\n"
      << "     'convergence.csv' every ::1 using 1:3 with linespoints title 'relative Linf change'\n";
}

}  // namespace pcip
