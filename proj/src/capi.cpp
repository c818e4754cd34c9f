#include "pcip.h"

#include <cstring>
#include <string>

#include "error.hpp"
#include "pipeline.hpp"

using pcip::Error;
using pcip::ErrorCode;

struct pcip_config {
  pcip::RunConfig cfg;
};

struct pcip_report {
  pcip::ReconstructionReport rep;
};

namespace {

thread_local std::string g_last_error;

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidInitialCondition:
    case ErrorCode::NonPositiveDefinite:
      return PCIP_ERR_INVALID_CONFIG;
    case ErrorCode::StabilityViolation:
      return PCIP_ERR_STABILITY;
    case ErrorCode::GridMismatch:
      return PCIP_ERR_GRID;
    case ErrorCode::SingularSystem:
    case ErrorCode::CalibrationFailed:
      return PCIP_ERR_SINGULAR;
    case ErrorCode::NonFiniteField:
      return PCIP_ERR_NONFINITE;
    case ErrorCode::MissingArtifact:
      return PCIP_ERR_MISSING_ARTIFACT;
    case ErrorCode::Io:
      return PCIP_ERR_IO;
  }
  return PCIP_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PCIP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PCIP_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* pcip_version(void) { return "0.1.0"; }

const char* pcip_last_error(void) { return g_last_error.c_str(); }

pcip_config* pcip_config_new(void) { return new (std::nothrow) pcip_config{}; }

void pcip_config_free(pcip_config* config) { delete config; }

int pcip_config_set(pcip_config* config, const char* key, const char* value) {
  if (!config || !key || !value) {
    g_last_error = "null argument";
    return PCIP_ERR_INVALID_CONFIG;
  }
  return guarded([&] {
    config->cfg.set(key, value);
    return PCIP_OK;
  });
}

int pcip_config_get(const pcip_config* config, const char* key, char* buffer, size_t buffer_size) {
  if (!config || !key || !buffer || buffer_size == 0) {
    g_last_error = "null argument";
    return PCIP_ERR_INVALID_CONFIG;
  }
  return guarded([&] {
    const std::string v = config->cfg.get(key);
    if (v.size() + 1 > buffer_size) {
      g_last_error = "buffer too small";
      return static_cast<int>(PCIP_ERR_INVALID_CONFIG);
    }
    std::memcpy(buffer, v.c_str(), v.size() + 1);
    return static_cast<int>(PCIP_OK);
  });
}

int pcip_config_load_file(pcip_config* config, const char* path) {
  if (!config || !path) {
    g_last_error = "null argument";
    return PCIP_ERR_INVALID_CONFIG;
  }
  return guarded([&] {
    config->cfg.load_file(path);
    return PCIP_OK;
  });
}

int pcip_config_validate(const pcip_config* config) {
  if (!config) {
    g_last_error = "null argument";
    return PCIP_ERR_INVALID_CONFIG;
  }
  return guarded([&] {
    config->cfg.validate();
    return PCIP_OK;
  });
}

int pcip_run_pipeline(const pcip_config* config, pcip_report** report) {
  if (report) *report = nullptr;
  if (!config) {
    g_last_error = "null argument";
    return PCIP_ERR_INVALID_CONFIG;
  }
  return guarded([&] {
    pcip::PipelineResult result = pcip::run_pipeline(config->cfg);
    if (report) *report = new pcip_report{std::move(result.report)};
    if (!result.trace.converged) {
      g_last_error = "Picard iteration reached max_iters without meeting kappa0";
      return static_cast<int>(PCIP_ERR_MAX_ITERS);
    }
    return static_cast<int>(PCIP_OK);
  });
}

int pcip_sweep_cutoff(const pcip_config* config, const int* n1_values, size_t n1_count,
                      const int* nt_values, size_t nt_count) {
  if (!config || !n1_values || !nt_values || n1_count == 0 || nt_count == 0) {
    g_last_error = "null or empty cutoff grid";
    return PCIP_ERR_INVALID_CONFIG;
  }
  return guarded([&] {
    pcip::sweep_cutoff(config->cfg, std::vector<int>(n1_values, n1_values + n1_count),
                       std::vector<int>(nt_values, nt_values + nt_count));
    return PCIP_OK;
  });
}

int pcip_emit_plots(const char* run_dir) {
  if (!run_dir) {
    g_last_error = "null argument";
    return PCIP_ERR_INVALID_CONFIG;
  }
  return guarded([&] {
    pcip::emit_plots(run_dir);
    return PCIP_OK;
  });
}

void pcip_report_free(pcip_report* report) { delete report; }

int pcip_report_iterations(const pcip_report* report) { return report ? report->rep.iterations : 0; }

int pcip_report_converged(const pcip_report* report) {
  return report && report->rep.converged ? 1 : 0;
}

double pcip_report_wall_time_seconds(const pcip_report* report) {
  return report ? report->rep.wall_time_seconds : 0.0;
}

double pcip_report_l2_relative_error(const pcip_report* report) {
  return report ? report->rep.l2_relative_error : 0.0;
}

size_t pcip_report_inclusion_count(const pcip_report* report) {
  return report ? report->rep.max_in_inclusion.size() : 0;
}

double pcip_report_max_in_inclusion(const pcip_report* report, size_t index) {
  if (!report || index >= report->rep.max_in_inclusion.size()) return 0.0;
  return report->rep.max_in_inclusion[index];
}

double pcip_report_relative_max_error(const pcip_report* report, size_t index) {
  if (!report || index >= report->rep.relative_max_error.size()) return 0.0;
  return report->rep.relative_max_error[index];
}

}  // extern "C"
