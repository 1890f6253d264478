#pragma once

#include <string>
#include <vector>

#include "nsc/basis.hpp"
#include "nsc/config.hpp"
#include "nsc/moments.hpp"
#include "nsc/pde.hpp"

namespace nsc {

struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string stage_name, const std::string& what)
      : std::runtime_error(stage_name + ": " + what),
        stage(std::move(stage_name)) {}
};

struct SpectrumBundle {
  Spectrum spectrum;       // branches computed up to k_max (>= config K, 64)
  AsymptoticFit fit;
  double seconds = 0.0;
  int k_max = 0;
};

struct EigenBundle {
  std::vector<EigenPair> pairs;  // every computed branch member plus low
  double max_ode_defect = 0.0;
  double max_boundary_defect = 0.0;
  double max_rayleigh_defect = 0.0;
  double min_rank_gap = 0.0;
};

struct ObservationRow {
  Branch branch;
  int k;
  double abs_obs_unit;    // |xi(1)| on the unit-normalized pair
  double abs_obs_comparison;   // |xi(1)| on the comparison-scaled pair
};

struct ControlBundle {
  MomentSystem ms;
  ControlSignal p;
  std::vector<cplx> quad_residuals;
  double max_alg_residual = 0.0;
  double max_quad_residual = 0.0;
};

struct SimulateBundle {
  double u0_norm = 0.0;
  double uncontrolled_final = 0.0;
  double controlled_final = 0.0;
  double control_ratio = 0.0;
  double modal_max_terminal = 0.0;
  double modal_gram_condition = 0.0;
  double lift_diff = 0.0;       // dirichlet-vs-auxiliary trajectory distance
  double scheme_self_error = 0.0;
};

struct IdentityBundle {
  double transposition_coarse = 0.0, transposition_fine = 0.0;
  double weighted_coarse = 0.0, weighted_fine = 0.0;
  double hidden_c[3] = {0.0, 0.0, 0.0};  // three refinements
  double transposition_ratio = 0.0, weighted_ratio = 0.0;
  double hidden_spread = 0.0;  // max/min - 1
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  double total_seconds = 0.0;
  std::string config_hash;
  std::vector<std::string> artifacts;
  bool all_pass() const;
  std::string to_json() const;
};

// Stage runners. When out_dir is non-empty the stage writes its artifacts
// there (CSV files carry the config hash on a leading comment line).
SpectrumBundle stage_spectrum(const ExperimentConfig& cfg,
                              const std::string& out_dir, int k_max = 64);
EigenBundle stage_eigenfunctions(const ExperimentConfig& cfg,
                                 const SpectrumBundle& sb,
                                 const std::string& out_dir);
std::vector<ObservationRow> observation_table(
    const std::vector<EigenPair>& pairs);

struct RieszBundle {
  ClosenessReport closeness;
  std::vector<GramReport> truncations;  // per-branch K = 16, 32, 64
};
RieszBundle stage_riesz(const ExperimentConfig& cfg, const EigenBundle& eb,
                        const std::string& out_dir);

/// Pairs constrained by the control: branch members up to the config K plus
/// every low-frequency entry.
std::vector<EigenPair> control_pairs(const ExperimentConfig& cfg,
                                     const EigenBundle& eb);

ControlBundle stage_control(const ExperimentConfig& cfg, const EigenBundle& eb,
                            const std::string& out_dir);
SimulateBundle stage_simulate(const ExperimentConfig& cfg,
                              const EigenBundle& eb, const ControlBundle& cb,
                              const std::string& out_dir);
IdentityBundle run_identities(const ExperimentConfig& cfg,
                              const ControlBundle& cb);

/// Full pipeline with acceptance evaluation; one CriterionResult per
/// acceptance criterion, artifacts written when out_dir is non-empty.
AcceptanceReport run_pipeline(const ExperimentConfig& cfg,
                              const std::string& out_dir);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace nsc
