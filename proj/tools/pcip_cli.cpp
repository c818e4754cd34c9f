// Command-line front end; talks to the core exclusively through the C API.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcip.h"

namespace {

struct ConfigDeleter {
  void operator()(pcip_config* c) const { pcip_config_free(c); }
};
using ConfigPtr = std::unique_ptr<pcip_config, ConfigDeleter>;

int fail(int status) {
  std::fprintf(stderr, "error: %s\n", pcip_last_error());
  // validation/config problems exit 1, non-convergence exits 2
  return status == PCIP_ERR_MAX_ITERS ? 2 : 1;
}

struct CommonFlags {
  std::string config_path, test, out;
  double noise = -1.0, lambda = 0.0, eps = 0.0, kappa0 = 0.0;
  long long seed = -1;
  int n1 = 0, nt = 0, nz = 0, max_iters = 0;
  bool dump_intermediates = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key = value config file");
    cmd->add_option("--test", test, "phantom: zero|ellipse|two-bars|letter-t");
    cmd->add_option("--noise", noise, "relative noise level delta in [0, 1)");
    cmd->add_option("--seed", seed, "RNG seed for the noise stream");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--lambda", lambda, "Carleman parameter lambda");
    cmd->add_option("--eps", eps, "regularization weight");
    cmd->add_option("--kappa0", kappa0, "Picard stopping threshold");
    cmd->add_option("--n1", n1, "x-mode cutoff N1");
    cmd->add_option("--nt", nt, "t-mode cutoff Nt");
    cmd->add_option("--nz", nz, "z-grid points");
    cmd->add_option("--max-iters", max_iters, "Picard iteration cap");
    cmd->add_flag("--dump-intermediates", dump_intermediates, "write boundary data CSVs");
  }

  // config file first, individual flags override
  int apply(pcip_config* cfg) const {
    int rc = PCIP_OK;
    auto set = [&](const char* key, const std::string& value) {
      if (rc == PCIP_OK) rc = pcip_config_set(cfg, key, value.c_str());
    };
    auto num = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    if (!config_path.empty() && rc == PCIP_OK) rc = pcip_config_load_file(cfg, config_path.c_str());
    if (!test.empty()) set("test", test);
    if (noise >= 0.0) set("noise", num(noise));
    if (seed >= 0) set("seed", std::to_string(seed));
    if (!out.empty()) set("out_dir", out);
    if (lambda > 0.0) set("lambda", num(lambda));
    if (eps > 0.0) set("eps", num(eps));
    if (kappa0 > 0.0) set("kappa0", num(kappa0));
    if (n1 > 0) set("n1", std::to_string(n1));
    if (nt > 0) set("nt", std::to_string(nt));
    if (nz > 0) set("nz", std::to_string(nz));
    if (max_iters > 0) set("max_iters", std::to_string(max_iters));
    if (dump_intermediates) set("dump_intermediates", "true");
    return rc;
  }
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(std::stoi(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pcip: reconstruct the zero-order coefficient of a 2D parabolic "
               "equation from two-sided Cauchy boundary data"};
  app.require_subcommand(1);

  CommonFlags solve_flags, sweep_flags;
  auto* solve = app.add_subcommand("solve", "run the full reconstruction pipeline");
  solve_flags.attach(solve);

  auto* sweep = app.add_subcommand("sweep", "truncation-mismatch sweep over cutoffs");
  sweep_flags.attach(sweep);
  std::string n1_list = "5,10,15", nt_list = "5,8,10";
  sweep->add_option("--n1-list", n1_list, "comma-separated N1 values");
  sweep->add_option("--nt-list", nt_list, "comma-separated Nt values");

  CLI11_PARSE(app, argc, argv);

  ConfigPtr cfg(pcip_config_new());
  if (!cfg) {
    std::fprintf(stderr, "error: out of memory\n");
    return 1;
  }

  if (solve->parsed()) {
    if (int rc = solve_flags.apply(cfg.get()); rc != PCIP_OK) return fail(rc);
    if (int rc = pcip_config_validate(cfg.get()); rc != PCIP_OK) return fail(rc);
    pcip_report* report = nullptr;
    const int rc = pcip_run_pipeline(cfg.get(), &report);
    if (report) {
      std::printf("iterations: %d (converged: %s)\n", pcip_report_iterations(report),
                  pcip_report_converged(report) ? "yes" : "no");
      std::printf("l2 relative error: %.6g\n", pcip_report_l2_relative_error(report));
      for (size_t i = 0; i < pcip_report_inclusion_count(report); ++i)
        std::printf("inclusion %zu: max %.6g (relative max error %.3g%%)\n", i,
                    pcip_report_max_in_inclusion(report, i),
                    100.0 * pcip_report_relative_max_error(report, i));
      std::printf("wall time: %.2f s\n", pcip_report_wall_time_seconds(report));
      pcip_report_free(report);
    }
    if (rc != PCIP_OK) return fail(rc);
    return 0;
  }

  if (sweep->parsed()) {
    if (int rc = sweep_flags.apply(cfg.get()); rc != PCIP_OK) return fail(rc);
    if (int rc = pcip_config_validate(cfg.get()); rc != PCIP_OK) return fail(rc);
    const auto n1s = parse_int_list(n1_list);
    const auto nts = parse_int_list(nt_list);
    const int rc = pcip_sweep_cutoff(cfg.get(), n1s.data(), n1s.size(), nts.data(), nts.size());
    if (rc != PCIP_OK) return fail(rc);
    char buf[512];
    if (pcip_config_get(cfg.get(), "out_dir", buf, sizeof buf) == PCIP_OK)
      std::printf("wrote %s/cutoff_sweep.csv\n", buf);
    return 0;
  }
  return 1;
}
