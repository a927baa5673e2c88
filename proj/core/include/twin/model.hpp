#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace twin {

struct MaterialSpec {
  double youngs_modulus = 0.0;  // Pa
  double poisson_ratio = 0.0;

  double shear_modulus() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }
};

// Throws ValidationError when E <= 0 or nu outside [0, 0.5).
MaterialSpec make_material(double youngs_modulus, double poisson_ratio);

/// Rule-of-mixtures modulus of a reinforced composite: q*E_s + (1-q)*E_c.
double equivalent_modulus(double reinforcement_ratio, double steel_modulus, double matrix_modulus);

/// Beam-level constants of a grillage member.
///
/// Fiber distances are signed offsets from the neutral axis to the extreme
/// fibers (top > 0, bottom < 0). Axial fiber strain is -z * w''.
struct SectionSpec {
  double bending_stiffness = 0.0;  // EI, N m^2
  double torsion_stiffness = 0.0;  // GJ, N m^2
  double z_top = 0.0;              // m
  double z_bottom = 0.0;           // m
};

/// Doubly symmetric welded I-beam, plate dimensions in metres.
struct IBeamPlates {
  double web_height = 0.0;
  double web_thickness = 0.0;
  double flange_width = 0.0;
  double flange_thickness = 0.0;
};

/// Concrete slab acting compositely on top of a steel beam.
struct DeckSlab {
  double thickness = 0.0;
  double effective_width = 0.0;
  MaterialSpec material;
};

SectionSpec steel_i_section(const IBeamPlates& plates, const MaterialSpec& steel);
SectionSpec composite_i_section(const IBeamPlates& plates, const MaterialSpec& steel, const DeckSlab& deck);

enum class Dof : int { w = 0, slope_x = 1, slope_y = 2 };
inline constexpr int kDofsPerNode = 3;

struct Node {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct Element {
  int id = 0;
  std::array<int, 2> nodes{};  // indices into GrillageModel::nodes
  SectionSpec section;
  int member = -1;             // structural member the element belongs to (girder line, crossbeam)
  double load_width = 0.0;     // tributary width for distributed deck pressure, m; 0 = unloaded
};

struct Support {
  int node = 0;  // index into GrillageModel::nodes
  std::array<bool, kDofsPerNode> fixed{};
};

enum class MemberKind { girder, crossbeam, other };

struct MemberInfo {
  int id = 0;
  MemberKind kind = MemberKind::other;
  std::string name;
};

/// Plan grillage. Each node carries the vertical deflection w and the two
/// deflection slopes dw/dx, dw/dy; an element sees the slope along its axis as
/// bending rotation and the slope across it as twist.
struct GrillageModel {
  std::vector<Node> nodes;
  std::vector<Element> elements;
  std::vector<Support> supports;
  std::vector<MemberInfo> members;

  std::size_t dof_count() const { return nodes.size() * kDofsPerNode; }
  double element_length(const Element& e) const;
  const MemberInfo* member(int id) const;

  bool operator==(const GrillageModel&) const;
};

bool operator==(const SectionSpec&, const SectionSpec&);
bool operator==(const Node&, const Node&);
bool operator==(const Element&, const Element&);
bool operator==(const Support&, const Support&);
bool operator==(const MemberInfo&, const MemberInfo&);

/// Parameters of the two-girder ladder deck generator.
struct TwoGirderTemplate {
  double span = 26.84;
  double girder_spacing = 7.3;
  int crossbeams = 21;
  int girder_subdivisions = 1;     // elements per girder bay
  int crossbeam_subdivisions = 2;  // elements per crossbeam
  SectionSpec girder;
  SectionSpec crossbeam;
  std::optional<double> load_width;  // defaults to crossbeam spacing
};

struct SimpleBeamTemplate {
  double span = 1.0;
  int elements = 2;
  SectionSpec section;
  double load_width = 0.0;
  bool cantilever = false;  // clamp node 0 instead of pinned + roller
};

GrillageModel make_two_girder(const TwoGirderTemplate& t);
GrillageModel make_simple_beam(const SimpleBeamTemplate& t);

/// Member ids used by make_two_girder.
inline constexpr int kEastGirder = 0;
inline constexpr int kWestGirder = 1;
inline constexpr int kFirstCrossbeam = 100;

/// Section constants of the bundled bridge (plate table, steel, composite deck).
SectionSpec default_girder_section();
SectionSpec default_crossbeam_section(double effective_width);
TwoGirderTemplate default_bridge_template();

inline constexpr int kModelSchemaVersion = 1;

/// Parses a model configuration document; throws ValidationError.
GrillageModel build_model(const nlohmann::json& config);
GrillageModel load_model(const std::filesystem::path& path);

/// Lists violations; empty iff the model is usable. Never throws.
std::vector<std::string> validate_model(const GrillageModel& model);

}  // namespace twin
