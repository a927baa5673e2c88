#include "twin/sensors.hpp"

#include <set>
#include <string>

#include "twin/errors.hpp"

namespace twin {

Eigen::MatrixX2d SensorLayout::coordinates() const {
  Eigen::MatrixX2d xy(static_cast<Eigen::Index>(sensors.size()), 2);
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    xy(static_cast<Eigen::Index>(i), 0) = sensors[i].x;
    xy(static_cast<Eigen::Index>(i), 1) = sensors[i].y;
  }
  return xy;
}

SensorLayout sensor_line(int member, double line_y, double centre_x, int count, double spacing, bool top,
                         bool bottom, int first_id) {
  SensorLayout layout;
  int id = first_id;
  const double x0 = centre_x - 0.5 * spacing * (count - 1);
  for (const Fiber fiber : {Fiber::top, Fiber::bottom}) {
    if ((fiber == Fiber::top && !top) || (fiber == Fiber::bottom && !bottom)) continue;
    for (int i = 0; i < count; ++i) {
      layout.sensors.push_back({id++, x0 + spacing * i, line_y, fiber, member});
    }
  }
  return layout;
}

void validate_layout(const SensorLayout& layout) {
  if (layout.empty()) throw ValidationError("sensor layout is empty");
  std::set<int> ids;
  for (const Sensor& s : layout.sensors) {
    if (!ids.insert(s.id).second) throw ValidationError("duplicate sensor id " + std::to_string(s.id));
  }
}

}  // namespace twin
