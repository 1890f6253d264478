// Command-line front end: spectral analysis, Riesz diagnostics, control
// synthesis and controlled-PDE simulation for the 1D linearized compressible
// flow system with a density boundary control.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsc/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string slurp(const std::string& path, const char* needed_stage) {
  std::ifstream in(path);
  if (!in) {
    throw nsc::StageError("io", "missing artifact " + path + "; run " +
                                    needed_stage + " first");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nsc::SpectrumBundle load_spectrum(const std::string& out_dir) {
  nsc::SpectrumBundle sb;
  sb.spectrum = nsc::Spectrum::from_json(
      slurp(out_dir + "/spectrum.json", "spectrum"));
  sb.fit = nsc::asymptotic_fit(sb.spectrum);
  for (const auto& [k, e] : sb.spectrum.parabolic)
    sb.k_max = std::max(sb.k_max, k);
  return sb;
}

nsc::EigenBundle load_pairs(const std::string& out_dir) {
  nsc::EigenBundle eb;
  const auto arr = nlohmann::json::parse(
      slurp(out_dir + "/eigenpairs.json", "eigenfunctions"));
  for (const auto& elem : arr)
    eb.pairs.push_back(nsc::EigenPair::from_json(elem.dump()));
  return eb;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navicontrol: spectral control toolkit for the linearized "
               "compressible flow system"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir = "out", stage;
  bool override_time = false;
  app.add_option("--config", config_path, "JSON experiment configuration");
  app.add_option("--out", out_dir, "artifact directory");
  app.add_option("--stage", stage,
                 "stage name (alternative to the subcommand form)");
  app.add_flag("--override-time-check", override_time,
               "allow T <= 1 or s <= 1/2 (records a solvability warning)");

  for (const char* name : {"spectrum", "eigenfunctions", "riesz-check",
                           "control", "simulate", "verify"})
    app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  std::string cmd = stage;
  for (const auto* sub : app.get_subcommands())
    cmd = sub->get_name();
  if (cmd.empty()) {
    std::fprintf(stderr, "usage: navicontrol [options] "
                         "{spectrum|eigenfunctions|riesz-check|control|"
                         "simulate|verify}\n");
    return kExitUsage;
  }

  nsc::ExperimentConfig cfg;
  try {
    if (!config_path.empty())
      cfg = nsc::ExperimentConfig::from_file(config_path);
    if (override_time) cfg.override_time_check = true;
    cfg.out_dir = out_dir;
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (cmd == "spectrum") {
      const auto sb = nsc::stage_spectrum(cfg, out_dir);
      std::printf("spectrum: %zu parabolic, %zu hyperbolic, %zu low "
                  "(%.2f s)\n",
                  sb.spectrum.parabolic.size(), sb.spectrum.hyperbolic.size(),
                  sb.spectrum.low.size(), sb.seconds);
    } else if (cmd == "eigenfunctions") {
      const auto sb = load_spectrum(out_dir);
      const auto eb = nsc::stage_eigenfunctions(cfg, sb, out_dir);
      std::printf("eigenfunctions: %zu pairs, max ode defect %.2e, max "
                  "boundary defect %.2e\n",
                  eb.pairs.size(), eb.max_ode_defect, eb.max_boundary_defect);
    } else if (cmd == "riesz-check") {
      const auto eb = load_pairs(out_dir);
      const auto rb = nsc::stage_riesz(cfg, eb, out_dir);
      std::printf("riesz-check: closeness slopes %.2f (parabolic) %.2f "
                  "(hyperbolic); gram min-eig",
                  rb.closeness.slope_parabolic, rb.closeness.slope_hyperbolic);
      for (const auto& t : rb.truncations) std::printf(" %.4f", t.min_eig);
      std::printf("\n");
    } else if (cmd == "control") {
      const auto eb = load_pairs(out_dir);
      const auto cb = nsc::stage_control(cfg, eb, out_dir);
      std::printf("control: %zu moment rows, alg residual %.2e, quad "
                  "residual %.2e, ||p|| = %.4f\n",
                  cb.ms.rows.size(), cb.max_alg_residual, cb.max_quad_residual,
                  cb.p.l2_norm);
      if (cb.ms.time_check_warning)
        std::printf("control: warning: T <= 1, solvability not guaranteed "
                    "(gram condition %.3g)\n",
                    cb.p.gram_condition);
    } else if (cmd == "simulate") {
      const auto eb = load_pairs(out_dir);
      nsc::ControlBundle cb;
      cb.p = nsc::ControlSignal::from_json(
          slurp(out_dir + "/control.json", "control"));
      const auto sm = nsc::stage_simulate(cfg, eb, cb, out_dir);
      std::printf("simulate: uncontrolled final %.4e, controlled final "
                  "%.4e (ratio %.3e), modal terminal %.2e\n",
                  sm.uncontrolled_final, sm.controlled_final, sm.control_ratio,
                  sm.modal_max_terminal);
    } else if (cmd == "verify") {
      const auto rep = nsc::run_pipeline(cfg, out_dir);
      for (const auto& c : rep.criteria)
        std::printf("[%s] criterion %2d (%s): %s\n", c.pass ? "PASS" : "FAIL",
                    c.id, c.name.c_str(), c.details.c_str());
      std::printf("%s in %.1f s; artifacts in %s\n",
                  rep.all_pass() ? "all checks passed" : "some checks FAILED",
                  rep.total_seconds, out_dir.c_str());
      return rep.all_pass() ? kExitOk : kExitCheckFailure;
    }
  } catch (const nsc::StageError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
