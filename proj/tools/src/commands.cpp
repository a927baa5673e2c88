#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "inputs.hpp"
#include "manifest.hpp"
#include "twin/errors.hpp"
#include "twin/fbg.hpp"
#include "twin/inference.hpp"
#include "twin/io.hpp"
#include "twin/log.hpp"
#include "twin/synth.hpp"
#include "twin/twin.hpp"

namespace twin::cli {

namespace fs = std::filesystem;

namespace {

fs::path manifest_path(const std::string& explicit_path, const fs::path& next_to) {
  if (!explicit_path.empty()) return explicit_path;
  fs::path p = next_to;
  p.replace_extension();
  p += ".manifest.json";
  return p;
}

fs::path sibling(const fs::path& file, const std::string& suffix) {
  fs::path p = file;
  p.replace_extension();
  p += suffix;
  return p;
}

void record_setup(RunManifest& m, const SetupOptions& s) {
  m.config("model", s.model.empty() ? "<built-in>" : s.model);
  m.config("scenario", s.scenario.empty() ? "<built-in>" : s.scenario);
  m.config("sensors", s.sensors.empty() ? "<built-in>" : s.sensors);
}

std::string fiber_name(Fiber f) { return f == Fiber::top ? "top" : "bottom"; }

double micro(double strain) { return strain / kMicrostrain; }

/// Recording with gamma attached, plus the twin and layout it was matched to.
struct Session {
  DigitalTwin twin;
  SensorLayout layout;
  ObservationSet recording;
};

Session open_session(const SetupOptions& s, const std::string& obs_path) {
  DigitalTwin twin(model_or_default(s.model), scenario_or_default(s.scenario));
  SensorLayout layout = sensors_or_default(s.sensors);
  ObservationSet rec = load_observation_csv(obs_path, layout);
  twin.annotate(rec);
  return {std::move(twin), std::move(layout), std::move(rec)};
}

/// sigma_e from the flag, the point-estimate file, or the quiescent window, in that order.
double resolve_sigma_e(const std::optional<double>& flag, const std::optional<double>& from_file, const Session& s) {
  if (flag) {
    if (!(*flag > 0.0)) throw ValidationError("sigma-e must be positive");
    return *flag * kMicrostrain;
  }
  if (from_file) return *from_file;
  const auto cols = columns_in_window(s.recording, s.twin.scenario().quiescent_window);
  if (cols.size() < 2) throw ValidationError("quiescent window holds fewer than two readings; pass --sigma-e");
  const ObservationSet quiet = select_columns(s.recording, cols);
  const double sigma = estimate_noise_std(quiet.readings) * kMicrostrain;
  if (!(sigma > 0.0)) throw ValidationError("quiescent window has zero spread; pass --sigma-e");
  return sigma;
}

/// Posterior of u at the recording column nearest `time`.
struct InstantPosterior {
  std::size_t column = 0;
  double gamma = 0.0;
  GaussianBelief prior;
  GaussianBelief post;
  StrainOperator strain;
};

InstantPosterior instant_posterior(const Session& s, const Hyperparameters& w, double sigma_e, double time) {
  const std::size_t k = nearest_column(s.recording.timestamps, time);
  const LoadSeries series = s.twin.loads(s.recording.timestamps);
  const PriorSeries priors = s.twin.priors(series, {k});
  StrainOperator p = s.twin.strain_operator(s.layout);
  const double gamma = s.recording.gamma[k];
  const Eigen::MatrixXd c_d = mismatch_covariance(s.layout, w, gamma);
  const Eigen::MatrixXd c_e = noise_covariance(static_cast<Eigen::Index>(s.layout.size()), sigma_e);
  GaussianBelief prior = priors.at(0);
  GaussianBelief post = posterior_u(s.recording.strain(static_cast<Eigen::Index>(k)), w, prior, p.matrix, c_d, c_e);
  return {k, gamma, std::move(prior), std::move(post), std::move(p)};
}

/// mean, lo95, hi95 in microstrain.
std::string band(double mean, double variance) {
  const double half = kBand95 * std::sqrt(std::max(variance, 0.0));
  return fmt::format("{},{},{}", format_double(micro(mean)), format_double(micro(mean - half)),
                     format_double(micro(mean + half)));
}

}  // namespace

int run_model(const ModelOptions& o, const std::vector<std::string>& argv) {
  RunManifest manifest(o.full_check ? "model build" : "model info", argv);
  manifest.config("model", o.config);
  const GrillageModel model = load_model(o.config);
  const DofMap dofs(model);

  nlohmann::json summary;
  summary["nodes"] = model.nodes.size();
  summary["elements"] = model.elements.size();
  summary["members"] = model.members.size();
  summary["supports"] = model.supports.size();
  summary["total_dofs"] = model.dof_count();
  summary["free_dofs"] = dofs.free_count();
  if (o.full_check) {
    const AssembledSystem system = assemble(model);
    const auto problems = validate_model(model);
    if (!problems.empty()) throw ValidationError("model check failed: " + problems.front());
    summary["stiffness_spd"] = true;
    summary["stiffness_rcond"] = system.stiffness.factor().rcond();
  }

  fs::path manifest_file = o.manifest.empty() ? fs::path("model.manifest.json") : fs::path(o.manifest);
  if (!o.out.empty()) {
    auto out = open_output(o.out);
    out << summary.dump(2) << '\n';
    finish_output(out, o.out);
    manifest.output(o.out);
    if (o.manifest.empty()) manifest_file = manifest_path("", o.out);
  }
  std::cout << summary.dump() << '\n';
  manifest.write(manifest_file);
  return 0;
}

int run_simulate(const SimulateOptions& o, const std::vector<std::string>& argv) {
  RunManifest manifest("simulate", argv);
  record_setup(manifest, o.setup);
  manifest.seed("seed", o.seed);
  const DigitalTwin twin(model_or_default(o.setup.model), scenario_or_default(o.setup.scenario));
  const SensorLayout layout = sensors_or_default(o.setup.sensors);
  const StrainOperator p = twin.strain_operator(layout);
  const LoadSeries series = twin.loads();

  ensure_directory(o.out_dir);
  const fs::path dir(o.out_dir);
  const Eigen::MatrixXd strain_mean = p.matrix * twin.priors(series).means;
  const Eigen::VectorXd strain_var = (p.matrix * twin.displacement_covariance() * p.matrix.transpose()).diagonal();

  const fs::path prior_csv = dir / "prior_strain.csv";
  {
    auto out = open_output(prior_csv);
    out << "# prior FE strain per sensor and instant; t in s, strain in microstrain\n"
        << "# lo95/hi95 = mean -/+ 1.96 std\n"
        << "t,sensor,mean,lo95,hi95\n";
    for (Eigen::Index k = 0; k < strain_mean.cols(); ++k) {
      for (std::size_t r = 0; r < layout.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        out << format_double(series.timestamps[static_cast<std::size_t>(k)]) << ',' << layout.sensors[r].id << ','
            << band(strain_mean(i, k), strain_var(i)) << '\n';
      }
    }
    finish_output(out, prior_csv);
  }
  manifest.output(prior_csv);

  const fs::path loads_csv = dir / "load_series.csv";
  {
    auto out = open_output(loads_csv);
    out << "# vertical nodal force norm in N; gamma = f_norm / max f_norm\n";
    write_load_series_csv(out, series);
    finish_output(out, loads_csv);
  }
  manifest.output(loads_csv);
  manifest.parameter("instants", series.size());
  manifest.parameter("sensors", layout.size());
  manifest.write(o.manifest.empty() ? dir / "manifest.json" : fs::path(o.manifest));
  return 0;
}

int run_synth(const SynthOptions& o, const std::vector<std::string>& argv) {
  RunManifest manifest("synth", argv);
  record_setup(manifest, o.setup);
  manifest.seed("seed", o.seed);
  if (!(o.sigma_e > 0.0)) throw ValidationError("sigma-e must be positive");
  const DigitalTwin twin(model_or_default(o.setup.model), scenario_or_default(o.setup.scenario));
  const SensorLayout layout = sensors_or_default(o.setup.sensors);

  DiscrepancySpec spec;
  spec.true_rho = o.truth_rho;
  spec.d_sigma = o.d_sigma * kMicrostrain;
  spec.d_ell = o.d_ell;
  spec.seed = o.seed;
  const TruthSeries truth = generate_truth(twin, layout, spec);
  const ObservationSet obs = generate_observations(truth, o.sigma_e * kMicrostrain, o.seed);
  manifest.parameter("truth", {{"rho", o.truth_rho}, {"sigma_d", o.d_sigma}, {"ell_d", o.d_ell}});
  manifest.parameter("sigma_e", o.sigma_e);

  {
    auto out = open_output(o.out);
    write_observation_csv(out, obs);
    finish_output(out, o.out);
  }
  manifest.output(o.out);

  if (!o.truth_out.empty()) {
    ObservationSet exact = obs;
    exact.readings = truth.strain / kMicrostrain;
    auto out = open_output(o.truth_out);
    write_observation_csv(out, exact);
    finish_output(out, o.truth_out);
    manifest.output(o.truth_out);
  }
  manifest.write(manifest_path(o.manifest, o.out));
  return 0;
}

int run_calibrate(const CalibrateOptions& o, const std::vector<std::string>& argv) {
  RunManifest manifest("calibrate", argv);
  manifest.config("wavelengths", o.wavelengths);
  FbgCalibration cal;
  if (!o.calibration.empty()) {
    manifest.config("calibration", o.calibration);
    std::ifstream in(o.calibration);
    if (!in) throw IoError("cannot open " + o.calibration);
    try {
      const auto doc = nlohmann::json::parse(in);
      cal.k_eps = doc.value("k_eps", cal.k_eps);
      cal.k_t = doc.value("k_t", cal.k_t);
      cal.k_tt = doc.value("k_tt", cal.k_tt);
      cal.alpha_sub = doc.value("alpha_sub", cal.alpha_sub);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(o.calibration + ": " + e.what());
    }
  }
  if (o.k_eps) cal.k_eps = *o.k_eps;
  if (o.k_t) cal.k_t = *o.k_t;
  if (o.k_tt) cal.k_tt = *o.k_tt;
  if (o.alpha_sub) cal.alpha_sub = *o.alpha_sub;
  manifest.parameter("calibration",
                     {{"k_eps", cal.k_eps}, {"k_t", cal.k_t}, {"k_tt", cal.k_tt}, {"alpha_sub", cal.alpha_sub}});

  std::ifstream in(o.wavelengths);
  if (!in) throw IoError("cannot open " + o.wavelengths);
  const auto rows = read_csv_rows(in);
  if (rows.empty() || rows.front() != std::vector<std::string>{"t", "sensor", "rel_shift_s", "rel_shift_t"}) {
    throw ValidationError("wavelength header must be 't,sensor,rel_shift_s,rel_shift_t'");
  }
  // Rows sharing a time value form one instant.
  std::map<double, std::map<int, double>> table;
  std::set<int> ids;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string where = fmt::format("{} row {}", o.wavelengths, i + 1);
    if (r.size() != 4) throw ValidationError(where + ": expected 4 fields");
    const double t = parse_double(r[0], where + " t");
    const int id = parse_int(r[1], where + " sensor");
    const double strain =
        fbg_mechanical_strain(parse_double(r[2], where + " rel_shift_s"), parse_double(r[3], where + " rel_shift_t"), cal);
    if (!table[t].emplace(id, strain).second) throw ValidationError(where + ": duplicate sensor at this instant");
    ids.insert(id);
  }
  if (table.empty()) throw ValidationError("wavelength file has no readings");

  ObservationSet obs;
  for (const int id : ids) obs.layout.sensors.push_back(Sensor{id, 0.0, 0.0, Fiber::bottom, -1});
  obs.readings.resize(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(table.size()));
  Eigen::Index k = 0;
  for (const auto& [t, by_id] : table) {
    if (by_id.size() != ids.size()) throw ValidationError(fmt::format("instant t={} lacks some sensors", t));
    Eigen::Index r = 0;
    for (const auto& [id, strain] : by_id) obs.readings(r++, k) = micro(strain);
    obs.timestamps.push_back(t);
    ++k;
  }
  auto out = open_output(o.out);
  write_observation_csv(out, obs);
  finish_output(out, o.out);
  manifest.output(o.out);
  manifest.write(manifest_path(o.manifest, o.out));
  return 0;
}

int run_infer(const InferOptions& o, const std::vector<std::string>& argv) {
  RunManifest manifest("infer", argv);
  record_setup(manifest, o.setup);
  manifest.config("obs", o.obs);
  manifest.seed("mcmc", o.seed);
  const Session s = open_session(o.setup, o.obs);
  const double sigma_e = resolve_sigma_e(o.sigma_e, std::nullopt, s);
  const InferenceProblem problem = s.twin.prepare(s.recording, s.twin.scenario().analysis_window, o.stride, sigma_e);
  logger()->info("infer: n_y = {}, n_o = {}, sigma_e = {:.4g} microstrain", problem.observations.sensors(),
                 problem.observations.instants(), micro(sigma_e));

  McmcConfig base;
  base.iterations = o.iterations;
  base.seed = o.seed;
  const McmcConfig config = suggest_start(problem.observations, problem.priors, problem.strain.matrix, base);
  const Chain chain = sample_hyperposterior(problem.observations, problem.priors, problem.strain.matrix, config);
  const ChainDiagnostics diag = chain_diagnostics(chain);
  const Hyperparameters w = point_estimate(chain);

  manifest.parameter("iterations", o.iterations);
  manifest.parameter("stride", o.stride);
  manifest.parameter("instants", problem.observations.instants());
  manifest.parameter("sigma_e", micro(sigma_e));

  {
    auto out = open_output(o.out);
    write_chain_csv(out, chain);
    finish_output(out, o.out);
  }
  manifest.output(o.out);

  const fs::path diag_file = o.diagnostics.empty() ? sibling(o.out, ".diagnostics.json") : fs::path(o.diagnostics);
  {
    auto out = open_output(diag_file);
    out << to_json(diag).dump(2) << '\n';
    finish_output(out, diag_file);
  }
  manifest.output(diag_file);

  const nlohmann::json w_json = {{"rho", w.rho},
                                 {"sigma_d", micro(w.sigma_d)},
                                 {"ell_d", w.ell_d},
                                 {"sigma_e", micro(sigma_e)},
                                 {"acceptance_ratio", chain.acceptance_ratio},
                                 {"samples", chain.size()},
                                 {"units", {{"sigma_d", "microstrain"}, {"sigma_e", "microstrain"}, {"ell_d", "m"}}}};
  const fs::path w_file = o.w_star_out.empty() ? sibling(o.out, ".wstar.json") : fs::path(o.w_star_out);
  {
    auto out = open_output(w_file);
    out << w_json.dump(2) << '\n';
    finish_output(out, w_file);
  }
  manifest.output(w_file);

  std::cout << fmt::format("w* rho={} sigma_d={} ell_d={} acceptance={}\n", format_double(w.rho),
                           format_double(micro(w.sigma_d)), format_double(w.ell_d),
                           format_double(chain.acceptance_ratio));
  manifest.write(manifest_path(o.manifest, o.out));
  return 0;
}

int run_posterior(const PosteriorOptions& o, const std::vector<std::string>& argv) {
  RunManifest manifest("posterior", argv);
  record_setup(manifest, o.setup);
  manifest.config("obs", o.obs);
  const Session s = open_session(o.setup, o.obs);
  const PointEstimate est = read_point_estimate(o.w_star);
  const double sigma_e = resolve_sigma_e(o.sigma_e, est.sigma_e, s);
  const InstantPosterior ip = instant_posterior(s, est.w, sigma_e, o.time);
  const Eigen::MatrixXd& p = ip.strain.matrix;
  const GaussianBelief z = posterior_z(ip.post, est.w, p, mismatch_covariance(s.layout, est.w, ip.gamma));

  const Eigen::VectorXd prior_mean = p * ip.prior.mean();
  const Eigen::VectorXd prior_var = (p * ip.prior.covariance() * p.transpose()).diagonal();
  const Eigen::VectorXd fe_mean = p * ip.post.mean();
  const Eigen::VectorXd fe_var = (p * ip.post.covariance() * p.transpose()).diagonal();
  const double t = s.recording.timestamps[ip.column];

  auto out = open_output(o.out);
  out << fmt::format("# t = {} s, gamma = {}; strain in microstrain, x/y in m\n", format_double(t),
                     format_double(ip.gamma))
      << "# prior_* = P u prior, fe_* = P u | y, z_* = true strain | y; lo95/hi95 = mean -/+ 1.96 std\n"
      << "sensor,x,y,fiber,prior_mean,prior_lo95,prior_hi95,fe_mean,fe_lo95,fe_hi95,z_mean,z_lo95,z_hi95\n";
  for (std::size_t r = 0; r < s.layout.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    const Sensor& sn = s.layout.sensors[r];
    out << sn.id << ',' << format_double(sn.x) << ',' << format_double(sn.y) << ',' << fiber_name(sn.fiber) << ','
        << band(prior_mean(i), prior_var(i)) << ',' << band(fe_mean(i), fe_var(i)) << ','
        << band(z.mean()(i), z.covariance()(i, i)) << '\n';
  }
  finish_output(out, o.out);
  manifest.output(o.out);
  manifest.parameter("time", t);
  manifest.parameter("w_star", {{"rho", est.w.rho}, {"sigma_d", micro(est.w.sigma_d)}, {"ell_d", est.w.ell_d}});
  manifest.parameter("sigma_e", micro(sigma_e));
  manifest.write(manifest_path(o.manifest, o.out));
  return 0;
}

int run_predict(const PredictOptions& o, const std::vector<std::string>& argv) {
  const PosteriorOptions& b = o.base;
  RunManifest manifest("predict", argv);
  record_setup(manifest, b.setup);
  manifest.config("obs", b.obs);
  manifest.config("locations", o.locations);
  const Session s = open_session(b.setup, b.obs);
  const PointEstimate est = read_point_estimate(b.w_star);
  const double sigma_e = resolve_sigma_e(b.sigma_e, est.sigma_e, s);
  const InstantPosterior ip = instant_posterior(s, est.w, sigma_e, b.time);

  const SensorLayout where = load_sensor_layout(o.locations);
  const StrainOperator p_hat = s.twin.strain_operator(where);
  const auto n_hat = static_cast<Eigen::Index>(where.size());
  const GaussianBelief y_hat = predictive_y(ip.post, est.w, p_hat.matrix, mismatch_covariance(where, est.w, ip.gamma),
                                            noise_covariance(n_hat, sigma_e));
  const double t = s.recording.timestamps[ip.column];

  auto out = open_output(b.out);
  out << fmt::format("# t = {} s, gamma = {}; predicted reading in microstrain, x/y in m\n", format_double(t),
                     format_double(ip.gamma))
      << "# lo95/hi95 = mean -/+ 1.96 std\n"
      << "sensor,x,y,fiber,mean,lo95,hi95\n";
  for (std::size_t r = 0; r < where.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    const Sensor& sn = where.sensors[r];
    out << sn.id << ',' << format_double(sn.x) << ',' << format_double(sn.y) << ',' << fiber_name(sn.fiber) << ','
        << band(y_hat.mean()(i), y_hat.covariance()(i, i)) << '\n';
  }
  finish_output(out, b.out);
  manifest.output(b.out);
  manifest.parameter("time", t);
  manifest.parameter("w_star", {{"rho", est.w.rho}, {"sigma_d", micro(est.w.sigma_d)}, {"ell_d", est.w.ell_d}});
  manifest.parameter("sigma_e", micro(sigma_e));
  manifest.write(manifest_path(b.manifest, b.out));
  return 0;
}

}  // namespace twin::cli
