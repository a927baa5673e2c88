#include "twin/fbg.hpp"

#include "twin/errors.hpp"

namespace twin {

double fbg_mechanical_strain(double rel_shift_strain, double rel_shift_temperature, const FbgCalibration& c) {
  if (c.k_eps == 0.0 || c.k_tt == 0.0) throw ValidationError("FBG calibration constants k_eps and k_TT must be nonzero");
  const double temperature_change = rel_shift_temperature / c.k_tt;
  return (rel_shift_strain - c.k_t * temperature_change) / c.k_eps - c.alpha_sub * temperature_change;
}

}  // namespace twin
