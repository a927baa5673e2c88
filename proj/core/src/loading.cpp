#include "twin/loading.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "twin/errors.hpp"

namespace twin {

std::vector<double> four_car_emu_axles() {
  // Four identical 20.37 m cars, two bogies per car, 2.6 m wheelbase.
  constexpr double kCarLength = 81.47 / 4.0;
  constexpr double kBogieCentres = 14.8;
  constexpr double kWheelbase = 2.6;
  std::vector<double> offsets;
  for (int car = 0; car < 4; ++car) {
    const double mid = car * kCarLength + 0.5 * kCarLength;
    for (const double bogie : {mid - 0.5 * kBogieCentres, mid + 0.5 * kBogieCentres}) {
      offsets.push_back(bogie - 0.5 * kWheelbase);
      offsets.push_back(bogie + 0.5 * kWheelbase);
    }
  }
  return offsets;
}

TrainScenario default_train(double track_y) {
  TrainScenario s;
  s.axle_offsets = four_car_emu_axles();
  s.train_length = 81.47;
  s.wheel_load = 52e3;
  s.speed = 131.0 / 3.6;
  s.track_y = track_y;
  s.entry_time = 0.6;
  s.time_step = 1.0 / 250.0;
  s.time_window = {0.0, 3.6};
  return s;
}

void validate_scenario(const TrainScenario& s) {
  if (s.axle_offsets.empty()) throw ValidationError("scenario has no axles");
  for (std::size_t i = 1; i < s.axle_offsets.size(); ++i) {
    if (!(s.axle_offsets[i] > s.axle_offsets[i - 1])) throw ValidationError("axle offsets must be strictly increasing");
  }
  if (s.axle_offsets.front() < 0.0) throw ValidationError("axle offsets must be non-negative");
  if (s.train_length < s.axle_offsets.back()) throw ValidationError("train length shorter than last axle offset");
  if (!(s.speed > 0.0)) throw ValidationError("train speed must be positive");
  if (!(s.time_step > 0.0)) throw ValidationError("time step must be positive");
  if (!(s.wheel_load >= 0.0)) throw ValidationError("wheel load must be non-negative");
  if (!(s.gauge >= 0.0)) throw ValidationError("gauge must be non-negative");
  if (!(s.time_window.end >= s.time_window.begin)) throw ValidationError("time window end precedes its start");
}

double crossing_duration(const TrainScenario& s, double span) { return (span + s.train_length) / s.speed; }

std::vector<double> axle_positions(const TrainScenario& s, double span, double t) {
  const double head = s.speed * (t - s.entry_time);
  std::vector<double> out;
  for (const double offset : s.axle_offsets) {
    const double x = head - offset;
    if (x >= 0.0 && x <= span) out.push_back(x);
  }
  return out;
}

std::vector<double> time_grid(const TimeWindow& window, double step) {
  if (!(step > 0.0)) throw ValidationError("time step must be positive");
  const auto n = static_cast<long>(std::llround((window.end - window.begin) / step)) + 1;
  std::vector<double> t(static_cast<std::size_t>(std::max(0L, n)));
  for (long k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = window.begin + static_cast<double>(k) * step;
  return t;
}

std::vector<PointLoad> wheel_loads(const TrainScenario& s, const std::vector<double>& axles) {
  std::vector<PointLoad> out;
  out.reserve(axles.size() * 2);
  for (const double x : axles) {
    out.push_back({x, s.track_y - 0.5 * s.gauge, s.wheel_load});
    out.push_back({x, s.track_y + 0.5 * s.gauge, s.wheel_load});
  }
  return out;
}

namespace {

void add_point_load(const GrillageModel& model, const ElementPoint& at, double magnitude, Eigen::VectorXd& full) {
  const Element& e = model.elements[at.element];
  const Node& a = model.nodes[e.nodes[0]];
  const Node& b = model.nodes[e.nodes[1]];
  const double l = std::hypot(b.x - a.x, b.y - a.y);
  const Eigen::Vector4d n = hermite_values(at.xi, l);
  Vector6 local = Vector6::Zero();
  local(0) = -magnitude * n(0);
  local(1) = -magnitude * n(1);
  local(3) = -magnitude * n(2);
  local(4) = -magnitude * n(3);
  const Vector6 global = element_rotation((b.x - a.x) / l, (b.y - a.y) / l).transpose() * local;
  for (int i = 0; i < 6; ++i) full(e.nodes[i / 3] * kDofsPerNode + i % 3) += global(i);
}

struct Station {
  double x;
  int member;
};

// Transverse members crossing the line y = const, sorted by their x there.
std::vector<Station> transverse_stations(const GrillageModel& model, double y) {
  std::vector<Station> out;
  for (const Element& e : model.elements) {
    const MemberInfo* info = model.member(e.member);
    if (info == nullptr || info->kind != MemberKind::crossbeam) continue;
    const Node& a = model.nodes[e.nodes[0]];
    const Node& b = model.nodes[e.nodes[1]];
    const double lo = std::min(a.y, b.y);
    const double hi = std::max(a.y, b.y);
    if (b.y == a.y || y < lo - 1e-9 || y > hi + 1e-9) continue;
    const double t = (y - a.y) / (b.y - a.y);
    const double x = a.x + t * (b.x - a.x);
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Station& s) { return s.member == e.member; });
    if (!seen) out.push_back({x, e.member});
  }
  std::sort(out.begin(), out.end(), [](const Station& p, const Station& q) { return p.x < q.x; });
  return out;
}

}  // namespace

Eigen::VectorXd nodal_loads_full(const GrillageModel& model, const std::vector<PointLoad>& loads) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dof_count()));
  for (const PointLoad& p : loads) {
    if (const auto at = locate_on_element(model, p.x, p.y, -1)) {
      add_point_load(model, *at, p.magnitude, full);
      continue;
    }
    // Deck strip spanning between the neighbouring transverse members.
    const auto stations = transverse_stations(model, p.y);
    const auto right = std::find_if(stations.begin(), stations.end(), [&](const Station& s) { return s.x > p.x; });
    if (right == stations.begin() || right == stations.end()) {
      throw ValidationError("point load at (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                            ") is off any element");
    }
    const Station& r = *right;
    const Station& l = *(right - 1);
    const double share_right = (p.x - l.x) / (r.x - l.x);
    for (const auto& [station, share] : {std::pair{l, 1.0 - share_right}, std::pair{r, share_right}}) {
      const auto at = locate_on_element(model, station.x, p.y, station.member, 1e-6);
      if (!at) throw ValidationError("transverse member lookup failed for point load");
      add_point_load(model, *at, share * p.magnitude, full);
    }
  }
  return full;
}

Eigen::VectorXd nodal_loads(const GrillageModel& model, const DofMap& dofs, const std::vector<PointLoad>& loads) {
  const Eigen::VectorXd full = nodal_loads_full(model, loads);
  Eigen::VectorXd f(dofs.free_count());
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = full(dofs.global_index(static_cast<int>(i)));
  return f;
}

namespace {

double model_span(const GrillageModel& model) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Node& n : model.nodes) {
    lo = std::min(lo, n.x);
    hi = std::max(hi, n.x);
  }
  return hi - lo;
}

}  // namespace

LoadSeries load_series_at(const GrillageModel& model, const DofMap& dofs, const TrainScenario& s,
                          const std::vector<double>& times) {
  validate_scenario(s);
  const double span = model_span(model);
  LoadSeries series;
  series.timestamps = times;
  series.forces = Eigen::MatrixXd::Zero(dofs.free_count(), static_cast<Eigen::Index>(times.size()));
  series.force_norm.resize(times.size());

  // gamma uses the vertical-force entries only; moments carry other units.
  std::vector<Eigen::Index> vertical;
  for (Eigen::Index i = 0; i < dofs.free_count(); ++i) {
    if (dofs.global_index(static_cast<int>(i)) % kDofsPerNode == static_cast<int>(Dof::w)) vertical.push_back(i);
  }

  double max_norm = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto axles = axle_positions(s, span, times[k]);
    const auto col = static_cast<Eigen::Index>(k);
    if (!axles.empty()) series.forces.col(col) = nodal_loads(model, dofs, wheel_loads(s, axles));
    double sq = 0.0;
    for (const Eigen::Index i : vertical) sq += series.forces(i, col) * series.forces(i, col);
    series.force_norm[k] = std::sqrt(sq);
    max_norm = std::max(max_norm, series.force_norm[k]);
  }
  if (!(max_norm > 0.0)) throw ValidationError("empty effective observation window: no load on the span");
  series.gamma.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) series.gamma[k] = series.force_norm[k] / max_norm;
  return series;
}

LoadSeries load_series(const GrillageModel& model, const DofMap& dofs, const TrainScenario& s) {
  validate_scenario(s);
  return load_series_at(model, dofs, s, time_grid(s.time_window, s.time_step));
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
  if (order < 1) throw ValidationError("quadrature order must be >= 1");
  std::vector<double> x(order);
  std::vector<double> w(order);
  for (int i = 0; i < order; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);  // 2/((1-z^2)P'^2) scaled by 1/2
  }
  return {x, w};
}

Eigen::MatrixXd force_covariance(const GrillageModel& model, const DofMap& dofs, const RandomLoadSpec& spec) {
  if (!(spec.sigma_r > 0.0 && spec.length_scale_r > 0.0)) {
    throw ValidationError("random load sigma_r and length scale must be positive");
  }
  const auto [xi, wq] = gauss_legendre(spec.quadrature_order);
  const int q = spec.quadrature_order;

  // B(i, p) = weight_p * N_i(xi_p): consistent force at dof i per unit pressure at point p.
  std::vector<Eigen::Vector2d> points;
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;
  for (const Element& e : model.elements) {
    if (!(e.load_width > 0.0)) continue;
    const Node& a = model.nodes[e.nodes[0]];
    const Node& b = model.nodes[e.nodes[1]];
    const double l = std::hypot(b.x - a.x, b.y - a.y);
    const int ia = dofs.free_index(e.nodes[0], Dof::w);
    const int ib = dofs.free_index(e.nodes[1], Dof::w);
    for (int p = 0; p < q; ++p) {
      const auto col = static_cast<int>(points.size());
      points.emplace_back(a.x + xi[p] * (b.x - a.x), a.y + xi[p] * (b.y - a.y));
      const Eigen::Vector4d n = hermite_values(xi[p], l);
      const double scale = wq[p] * l * e.load_width;
      if (ia >= 0) entries.emplace_back(ia, col, scale * n(0));
      if (ib >= 0) entries.emplace_back(ib, col, scale * n(2));
    }
  }
  const auto np = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dofs.free_count(), np);
  for (const Entry& t : entries) basis(t.row, t.col) += t.value;

  Eigen::MatrixXd kernel(np, np);
  const double s2 = spec.sigma_r * spec.sigma_r;
  const double inv = 1.0 / (2.0 * spec.length_scale_r * spec.length_scale_r);
  for (Eigen::Index i = 0; i < np; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = s2 * std::exp(-(points[i] - points[j]).squaredNorm() * inv);
      kernel(i, j) = v;
      kernel(j, i) = v;
    }
  }
  Eigen::MatrixXd cf = basis * kernel * basis.transpose();
  symmetrize(cf);
  return cf;
}

namespace {

using nlohmann::json;

TimeWindow read_window(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw ValidationError("time window must be [begin, end]");
  return {v[0], v[1]};
}

}  // namespace

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.train = default_train();
  return c;
}

ScenarioConfig build_scenario(const nlohmann::json& doc) {
  try {
    if (!doc.contains("schema_version") || doc.at("schema_version").get<int>() != kScenarioSchemaVersion) {
      throw ValidationError("scenario lacks a supported 'schema_version'");
    }
    ScenarioConfig c = default_scenario();
    if (doc.contains("train")) {
      const json& t = doc.at("train");
      if (t.contains("axle_offsets")) c.train.axle_offsets = t.at("axle_offsets").get<std::vector<double>>();
      c.train.train_length = t.value("train_length", c.train.train_length);
      c.train.wheel_load = t.value("wheel_load", c.train.wheel_load);
      if (t.contains("speed_kmh")) c.train.speed = t.at("speed_kmh").get<double>() / 3.6;
      c.train.speed = t.value("speed", c.train.speed);
    }
    if (doc.contains("track")) {
      c.train.track_y = doc.at("track").value("y", c.train.track_y);
      c.train.gauge = doc.at("track").value("gauge", c.train.gauge);
    }
    c.train.entry_time = doc.value("entry_time", c.train.entry_time);
    if (doc.contains("sample_rate")) c.train.time_step = 1.0 / doc.at("sample_rate").get<double>();
    c.train.time_step = doc.value("time_step", c.train.time_step);
    if (doc.contains("time_window")) c.train.time_window = read_window(doc.at("time_window"));
    if (doc.contains("analysis_window")) c.analysis_window = read_window(doc.at("analysis_window"));
    if (doc.contains("quiescent_window")) c.quiescent_window = read_window(doc.at("quiescent_window"));
    if (doc.contains("random_load")) {
      const json& r = doc.at("random_load");
      c.random_load.sigma_r = r.value("sigma_r", c.random_load.sigma_r);
      c.random_load.length_scale_r = r.value("length_scale", c.random_load.length_scale_r);
      c.random_load.quadrature_order = r.value("quadrature_order", c.random_load.quadrature_order);
    }
    c.gamma_min = doc.value("gamma_min", c.gamma_min);
    validate_scenario(c.train);
    if (!(c.gamma_min >= 0.0 && c.gamma_min < 1.0)) throw ValidationError("gamma_min must lie in [0, 1)");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("parse error in " + path.string() + ": " + e.what());
  }
  return build_scenario(doc);
}

nlohmann::json to_json(const ScenarioConfig& s) {
  return json{
      {"schema_version", kScenarioSchemaVersion},
      {"train",
       {{"axle_offsets", s.train.axle_offsets},
        {"train_length", s.train.train_length},
        {"wheel_load", s.train.wheel_load},
        {"speed", s.train.speed}}},
      {"track", {{"y", s.train.track_y}, {"gauge", s.train.gauge}}},
      {"entry_time", s.train.entry_time},
      {"time_step", s.train.time_step},
      {"time_window", {s.train.time_window.begin, s.train.time_window.end}},
      {"analysis_window", {s.analysis_window.begin, s.analysis_window.end}},
      {"quiescent_window", {s.quiescent_window.begin, s.quiescent_window.end}},
      {"random_load",
       {{"sigma_r", s.random_load.sigma_r},
        {"length_scale", s.random_load.length_scale_r},
        {"quadrature_order", s.random_load.quadrature_order}}},
      {"gamma_min", s.gamma_min},
  };
}

}  // namespace twin
