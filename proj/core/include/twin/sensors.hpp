#pragma once

#include <vector>

#include <Eigen/Core>

namespace twin {

enum class Fiber { top, bottom };

struct Sensor {
  int id = 0;
  double x = 0.0;  // m, plan
  double y = 0.0;  // m, plan
  Fiber fiber = Fiber::bottom;
  int member = -1;  // member the sensor is bonded to; -1 = any element at (x, y)
};

struct SensorLayout {
  std::vector<Sensor> sensors;

  std::size_t size() const { return sensors.size(); }
  bool empty() const { return sensors.empty(); }
  /// n x 2 plan coordinates.
  Eigen::MatrixX2d coordinates() const;
};

/// `count` sensors per fiber at `spacing` along member `member` (line y = `line_y`),
/// centred on `centre_x`. Ids run from `first_id`, top fibers first when both are requested.
SensorLayout sensor_line(int member, double line_y, double centre_x, int count, double spacing,
                         bool top, bool bottom, int first_id = 1);

/// Throws ValidationError on duplicate ids or an empty layout.
void validate_layout(const SensorLayout& layout);

}  // namespace twin
