#include <cmath>

#include "twin/errors.hpp"
#include "twin/model.hpp"

namespace twin {

namespace {

void check_plates(const IBeamPlates& p) {
  if (!(p.web_height > 0 && p.web_thickness > 0 && p.flange_width > 0 && p.flange_thickness > 0)) {
    throw ValidationError("non-physical section: I-beam plate dimensions must be positive");
  }
  if (p.web_thickness > p.flange_width) {
    throw ValidationError("non-physical section: web thicker than flange width");
  }
}

struct SteelGeometry {
  double depth;
  double area;
  double second_moment;  // about own centroid
  double torsion_constant;
};

SteelGeometry steel_geometry(const IBeamPlates& p) {
  const double h = p.web_height + 2.0 * p.flange_thickness;
  const double area = 2.0 * p.flange_width * p.flange_thickness + p.web_height * p.web_thickness;
  const double inertia = (p.flange_width * h * h * h -
                          (p.flange_width - p.web_thickness) * std::pow(p.web_height, 3)) /
                         12.0;
  // Open thin-walled section: sum of b t^3 / 3 over the three plates.
  const double torsion = (2.0 * p.flange_width * std::pow(p.flange_thickness, 3) +
                          p.web_height * std::pow(p.web_thickness, 3)) /
                         3.0;
  return {h, area, inertia, torsion};
}

}  // namespace

SectionSpec steel_i_section(const IBeamPlates& plates, const MaterialSpec& steel) {
  check_plates(plates);
  const SteelGeometry g = steel_geometry(plates);
  SectionSpec s;
  s.bending_stiffness = steel.youngs_modulus * g.second_moment;
  s.torsion_stiffness = steel.shear_modulus() * g.torsion_constant;
  s.z_top = 0.5 * g.depth;
  s.z_bottom = -0.5 * g.depth;
  return s;
}

SectionSpec composite_i_section(const IBeamPlates& plates, const MaterialSpec& steel, const DeckSlab& deck) {
  check_plates(plates);
  if (!(deck.thickness > 0 && deck.effective_width > 0)) {
    throw ValidationError("non-physical section: deck thickness and effective width must be positive");
  }
  const SteelGeometry g = steel_geometry(plates);
  // Transformed section in steel units, heights measured from the steel soffit.
  const double n = deck.material.youngs_modulus / steel.youngs_modulus;
  const double slab_area = n * deck.effective_width * deck.thickness;
  const double slab_centroid = g.depth + 0.5 * deck.thickness;
  const double steel_centroid = 0.5 * g.depth;
  const double neutral_axis =
      (g.area * steel_centroid + slab_area * slab_centroid) / (g.area + slab_area);
  const double inertia = g.second_moment + g.area * std::pow(neutral_axis - steel_centroid, 2) +
                         n * deck.effective_width * std::pow(deck.thickness, 3) / 12.0 +
                         slab_area * std::pow(slab_centroid - neutral_axis, 2);

  SectionSpec s;
  s.bending_stiffness = steel.youngs_modulus * inertia;
  // Slab torsion per unit width of a grillage strip is G t^3 / 6.
  s.torsion_stiffness = steel.shear_modulus() * g.torsion_constant +
                        deck.material.shear_modulus() * deck.effective_width *
                            std::pow(deck.thickness, 3) / 6.0;
  s.z_top = g.depth - neutral_axis;
  s.z_bottom = -neutral_axis;
  return s;
}

SectionSpec default_girder_section() {
  const MaterialSpec steel = make_material(210e9, 0.3);
  return steel_i_section({2.04, 0.025, 0.7, 0.12}, steel);
}

SectionSpec default_crossbeam_section(double effective_width) {
  const MaterialSpec steel = make_material(210e9, 0.3);
  const MaterialSpec concrete = make_material(equivalent_modulus(0.03, 210e9, 35e9), 0.2);
  return composite_i_section({0.4, 0.0165, 0.4, 0.027}, steel, {0.25, effective_width, concrete});
}

TwoGirderTemplate default_bridge_template() {
  TwoGirderTemplate t;
  t.girder = default_girder_section();
  t.crossbeam = default_crossbeam_section(t.span / (t.crossbeams - 1));
  return t;
}

}  // namespace twin
