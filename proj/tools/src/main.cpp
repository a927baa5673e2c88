#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "twin/errors.hpp"

namespace {

using twin::ErrorKind;

// One line on stderr: `twin: error kind=<kind> command=<cmd> message="<text>"`.
int fail(ErrorKind kind, const std::string& command, const std::string& message) {
  nlohmann::json text = message;  // JSON string escaping keeps the line single and parsable
  std::fputs(fmt::format("twin: error kind={} command={} message={}\n", twin::to_string(kind),
                         command.empty() ? "-" : command, text.dump())
                 .c_str(),
             stderr);
  return static_cast<int>(kind);
}

void add_setup(CLI::App* app, twin::cli::SetupOptions& s) {
  app->add_option("--model", s.model, "Model JSON (default: built-in bridge)")->check(CLI::ExistingFile);
  app->add_option("--scenario", s.scenario, "Scenario JSON (default: built-in train)")->check(CLI::ExistingFile);
  app->add_option("--sensors", s.sensors, "Sensor layout CSV (default: east girder, 40 sensors)")
      ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Statistical FE digital twin of an instrumented railway bridge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TWIN_VERSION);

  std::function<int()> action;
  std::string command;

  twin::cli::ModelOptions model_opts;
  auto* model = app.add_subcommand("model", "Validate and summarize a model file");
  model->require_subcommand(1);
  for (const bool full : {true, false}) {
    auto* sub = model->add_subcommand(full ? "build" : "info",
                                      full ? "Build, validate and factorize the stiffness" : "Print model counts");
    sub->add_option("--config", model_opts.config, "Model JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", model_opts.out, "Write the summary JSON here");
    sub->add_option("--manifest", model_opts.manifest, "Manifest path");
    sub->callback([&, full] {
      model_opts.full_check = full;
      command = full ? "model-build" : "model-info";
      action = [&] { return twin::cli::run_model(model_opts, args); };
    });
  }

  twin::cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Prior strain means and 95% bands per sensor and instant");
  add_setup(simulate, sim.setup);
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Recorded in the manifest; the prior is deterministic");
  simulate->add_option("--manifest", sim.manifest, "Manifest path (default: <out>/manifest.json)");
  simulate->callback([&] {
    command = "simulate";
    action = [&] { return twin::cli::run_simulate(sim, args); };
  });

  twin::cli::SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "Synthetic observation CSV from a known truth");
  add_setup(synth, syn.setup);
  synth->add_option("--truth-rho", syn.truth_rho, "True scaling factor")->capture_default_str();
  synth->add_option("--d-sigma", syn.d_sigma, "Mismatch amplitude, microstrain")->capture_default_str();
  synth->add_option("--d-ell", syn.d_ell, "Mismatch length scale, m")->capture_default_str();
  synth->add_option("--sigma-e", syn.sigma_e, "Noise std, microstrain")->capture_default_str();
  synth->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", syn.out, "Observation CSV")->required();
  synth->add_option("--truth-out", syn.truth_out, "Also write the noise-free true strain");
  synth->add_option("--manifest", syn.manifest, "Manifest path");
  synth->callback([&] {
    command = "synth";
    action = [&] { return twin::cli::run_synth(syn, args); };
  });

  twin::cli::CalibrateOptions cal;
  auto* calibrate = app.add_subcommand("calibrate", "FBG relative wavelength shifts to mechanical strain");
  calibrate->add_option("--wavelengths", cal.wavelengths, "CSV t,sensor,rel_shift_s,rel_shift_t")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--calibration", cal.calibration, "JSON with k_eps, k_t, k_tt, alpha_sub")
      ->check(CLI::ExistingFile);
  calibrate->add_option("--k-eps", cal.k_eps, "Gauge factor (default 0.78)");
  calibrate->add_option("--k-t", cal.k_t, "Thermo-optic coefficient, 1/degC");
  calibrate->add_option("--k-tt", cal.k_tt, "Temperature sensor constant, 1/degC");
  calibrate->add_option("--alpha-sub", cal.alpha_sub, "Substrate expansion, 1/degC (default 12e-6)");
  calibrate->add_option("--out", cal.out, "Observation CSV")->required();
  calibrate->add_option("--manifest", cal.manifest, "Manifest path");
  calibrate->callback([&] {
    command = "calibrate";
    action = [&] { return twin::cli::run_calibrate(cal, args); };
  });

  twin::cli::InferOptions inf;
  auto* infer = app.add_subcommand("infer", "MCMC over (rho, sigma_d, ell_d)");
  add_setup(infer, inf.setup);
  infer->add_option("--obs", inf.obs, "Observation CSV")->required()->check(CLI::ExistingFile);
  infer->add_option("--iters", inf.iterations, "MCMC iterations")->capture_default_str();
  infer->add_option("--seed", inf.seed, "MCMC seed")->capture_default_str();
  infer->add_option("--stride", inf.stride, "Use every n-th instant of the analysis window")->capture_default_str();
  infer->add_option("--sigma-e", inf.sigma_e, "Noise std, microstrain (default: quiescent-window estimate)");
  infer->add_option("--out", inf.out, "Chain CSV")->required();
  infer->add_option("--diagnostics", inf.diagnostics, "Diagnostics JSON (default: <out>.diagnostics.json)");
  infer->add_option("--w-star-out", inf.w_star_out, "Point estimate JSON (default: <out>.wstar.json)");
  infer->add_option("--manifest", inf.manifest, "Manifest path");
  infer->callback([&] {
    command = "infer";
    action = [&] { return twin::cli::run_infer(inf, args); };
  });

  auto add_conditional = [&](CLI::App* sub, twin::cli::PosteriorOptions& p) {
    add_setup(sub, p.setup);
    sub->add_option("--obs", p.obs, "Observation CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--w-star", p.w_star, "Point estimate JSON or 'rho,sigma_d,ell_d'")->required();
    sub->add_option("--time", p.time, "Instant, s (nearest recorded)")->required();
    sub->add_option("--sigma-e", p.sigma_e, "Noise std, microstrain");
    sub->add_option("--out", p.out, "Output CSV")->required();
    sub->add_option("--manifest", p.manifest, "Manifest path");
  };

  twin::cli::PosteriorOptions post;
  auto* posterior = app.add_subcommand("posterior", "Posterior FE and true strain at the sensors");
  add_conditional(posterior, post);
  posterior->callback([&] {
    command = "posterior";
    action = [&] { return twin::cli::run_posterior(post, args); };
  });

  twin::cli::PredictOptions pred;
  auto* predict = app.add_subcommand("predict", "Predictive readings at other locations");
  add_conditional(predict, pred.base);
  predict->add_option("--locations", pred.locations, "Sensor layout CSV of the prediction points")
      ->required()
      ->check(CLI::ExistingFile);
  predict->callback([&] {
    command = "predict";
    action = [&] { return twin::cli::run_predict(pred, args); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ErrorKind::validation, command, e.what());
  }

  try {
    return action();
  } catch (const twin::Error& e) {
    return fail(e.kind(), command, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ErrorKind::validation, command, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(ErrorKind::io, command, e.what());
  } catch (const std::exception& e) {
    return fail(ErrorKind::numerical, command, e.what());
  }
}
