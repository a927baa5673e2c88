#pragma once

namespace twin {

/// Temperature-compensation constants of a strain FBG paired with a
/// temperature-compensating FBG.
struct FbgCalibration {
  double k_eps = 0.78;       // gauge factor
  double k_t = 0.0;          // thermo-optic coefficient, 1/degC
  double k_tt = 0.0;         // temperature sensor constant, 1/degC
  double alpha_sub = 12e-6;  // substrate expansion (steel), 1/degC
};

/// Mechanical strain (internal units) from the relative wavelength shifts of
/// the strain and temperature gratings. Throws ValidationError for zero k_eps or k_tt.
double fbg_mechanical_strain(double rel_shift_strain, double rel_shift_temperature, const FbgCalibration& c);

}  // namespace twin
