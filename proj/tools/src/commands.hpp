#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twin::cli {

/// Options shared by every subcommand that needs the structure and loading.
struct SetupOptions {
  std::string model;     // JSON; empty = built-in bridge
  std::string scenario;  // JSON; empty = built-in train scenario
  std::string sensors;   // layout CSV; empty = built-in east-girder layout
};

struct ModelOptions {
  bool full_check = false;  // build: also factorize and report conditioning
  std::string config;
  std::string out;
  std::string manifest;
};

struct SimulateOptions {
  SetupOptions setup;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string manifest;
};

struct SynthOptions {
  SetupOptions setup;
  double truth_rho = 0.9;
  double d_sigma = 4.0;  // microstrain
  double d_ell = 0.5;
  double sigma_e = 1.0;  // microstrain
  std::uint64_t seed = 1;
  std::string out;
  std::string truth_out;
  std::string manifest;
};

struct CalibrateOptions {
  std::string wavelengths;
  std::string calibration;  // optional JSON with k_eps, k_t, k_tt, alpha_sub
  std::optional<double> k_eps, k_t, k_tt, alpha_sub;
  std::string out;
  std::string manifest;
};

struct InferOptions {
  SetupOptions setup;
  std::string obs;
  int iterations = 20000;
  std::uint64_t seed = 1;
  int stride = 1;
  std::optional<double> sigma_e;  // microstrain
  std::string out;
  std::string diagnostics;
  std::string w_star_out;
  std::string manifest;
};

struct PosteriorOptions {
  SetupOptions setup;
  std::string obs;
  std::string w_star;
  double time = 0.0;
  std::optional<double> sigma_e;  // microstrain
  std::string out;
  std::string manifest;
};

struct PredictOptions {
  PosteriorOptions base;
  std::string locations;
};

/// Each returns the process exit code (0) after writing its manifest; failures throw twin::Error.
int run_model(const ModelOptions& o, const std::vector<std::string>& argv);
int run_simulate(const SimulateOptions& o, const std::vector<std::string>& argv);
int run_synth(const SynthOptions& o, const std::vector<std::string>& argv);
int run_calibrate(const CalibrateOptions& o, const std::vector<std::string>& argv);
int run_infer(const InferOptions& o, const std::vector<std::string>& argv);
int run_posterior(const PosteriorOptions& o, const std::vector<std::string>& argv);
int run_predict(const PredictOptions& o, const std::vector<std::string>& argv);

}  // namespace twin::cli
