#include "twin/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "twin/errors.hpp"
#include "twin/fem.hpp"

namespace twin {

MaterialSpec make_material(double youngs_modulus, double poisson_ratio) {
  if (!(youngs_modulus > 0.0)) throw ValidationError("Young's modulus must be positive");
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5)) throw ValidationError("Poisson ratio must lie in [0, 0.5)");
  return {youngs_modulus, poisson_ratio};
}

double equivalent_modulus(double q, double steel_modulus, double matrix_modulus) {
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("reinforcement ratio must lie in [0, 1]");
  if (!(steel_modulus > 0.0 && matrix_modulus > 0.0)) throw ValidationError("moduli must be positive");
  return q * steel_modulus + (1.0 - q) * matrix_modulus;
}

double GrillageModel::element_length(const Element& e) const {
  const Node& a = nodes[e.nodes[0]];
  const Node& b = nodes[e.nodes[1]];
  return std::hypot(b.x - a.x, b.y - a.y);
}

const MemberInfo* GrillageModel::member(int id) const {
  for (const MemberInfo& m : members) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

bool operator==(const SectionSpec& a, const SectionSpec& b) {
  return a.bending_stiffness == b.bending_stiffness && a.torsion_stiffness == b.torsion_stiffness &&
         a.z_top == b.z_top && a.z_bottom == b.z_bottom;
}
bool operator==(const Node& a, const Node& b) { return a.id == b.id && a.x == b.x && a.y == b.y; }
bool operator==(const Element& a, const Element& b) {
  return a.id == b.id && a.nodes == b.nodes && a.section == b.section && a.member == b.member &&
         a.load_width == b.load_width;
}
bool operator==(const Support& a, const Support& b) { return a.node == b.node && a.fixed == b.fixed; }
bool operator==(const MemberInfo& a, const MemberInfo& b) {
  return a.id == b.id && a.kind == b.kind && a.name == b.name;
}
bool GrillageModel::operator==(const GrillageModel& o) const {
  return nodes == o.nodes && elements == o.elements && supports == o.supports && members == o.members;
}

GrillageModel make_two_girder(const TwoGirderTemplate& t) {
  if (!(t.span > 0 && t.girder_spacing > 0)) throw ValidationError("template span and girder spacing must be positive");
  if (t.crossbeams < 2 || t.girder_subdivisions < 1 || t.crossbeam_subdivisions < 1) {
    throw ValidationError("template needs >= 2 crossbeams and >= 1 element per bay/crossbeam");
  }
  GrillageModel m;
  const double bay = t.span / (t.crossbeams - 1);
  const double width = t.load_width.value_or(bay);

  auto add_node = [&m](double x, double y) {
    const int idx = static_cast<int>(m.nodes.size());
    m.nodes.push_back({idx, x, y});
    return idx;
  };
  auto add_element = [&m](int a, int b, const SectionSpec& s, int member, double lw) {
    const int idx = static_cast<int>(m.elements.size());
    m.elements.push_back({idx, {a, b}, s, member, lw});
  };

  // Girder lines; remember the node index at each crossbeam station.
  std::array<std::vector<int>, 2> station_nodes;
  const std::array<double, 2> line_y{0.0, t.girder_spacing};
  const int per_line = (t.crossbeams - 1) * t.girder_subdivisions + 1;
  for (int g = 0; g < 2; ++g) {
    int prev = -1;
    for (int i = 0; i < per_line; ++i) {
      const int n = add_node(t.span * i / (per_line - 1), line_y[g]);
      if (i % t.girder_subdivisions == 0) station_nodes[g].push_back(n);
      if (prev >= 0) add_element(prev, n, t.girder, g == 0 ? kEastGirder : kWestGirder, 0.0);
      prev = n;
    }
  }
  m.members.push_back({kEastGirder, MemberKind::girder, "east girder"});
  m.members.push_back({kWestGirder, MemberKind::girder, "west girder"});

  for (int c = 0; c < t.crossbeams; ++c) {
    const int member = kFirstCrossbeam + c;
    const double lw = (c == 0 || c == t.crossbeams - 1) ? 0.5 * width : width;
    const double x = m.nodes[station_nodes[0][c]].x;
    int prev = station_nodes[0][c];
    for (int j = 1; j < t.crossbeam_subdivisions; ++j) {
      const int n = add_node(x, t.girder_spacing * j / t.crossbeam_subdivisions);
      add_element(prev, n, t.crossbeam, member, lw);
      prev = n;
    }
    add_element(prev, station_nodes[1][c], t.crossbeam, member, lw);
    m.members.push_back({member, MemberKind::crossbeam, "crossbeam " + std::to_string(c + 1)});
  }

  for (int g = 0; g < 2; ++g) {
    for (const int n : {station_nodes[g].front(), station_nodes[g].back()}) {
      m.supports.push_back({n, {true, false, false}});
    }
  }
  return m;
}

GrillageModel make_simple_beam(const SimpleBeamTemplate& t) {
  if (!(t.span > 0) || t.elements < 1) throw ValidationError("beam template needs positive span and >= 1 element");
  GrillageModel m;
  for (int i = 0; i <= t.elements; ++i) m.nodes.push_back({i, t.span * i / t.elements, 0.0});
  for (int i = 0; i < t.elements; ++i) m.elements.push_back({i, {i, i + 1}, t.section, 0, t.load_width});
  m.members.push_back({0, MemberKind::girder, "beam"});
  if (t.cantilever) {
    m.supports.push_back({0, {true, true, true}});
  } else {
    // Fork support restrains twist at the pinned end.
    m.supports.push_back({0, {true, false, true}});
    m.supports.push_back({t.elements, {true, false, false}});
  }
  return m;
}

namespace {

using nlohmann::json;

double positive(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
  const double v = j.at(key).get<double>();
  if (!(v > 0.0)) throw ValidationError(where + ": '" + key + "' must be positive");
  return v;
}

class ConfigReader {
 public:
  explicit ConfigReader(const json& doc) : doc_(doc) { read_materials(); }

  SectionSpec section(const std::string& name, std::optional<double> default_width) const {
    const json& sections = doc_.at("sections");
    if (!sections.contains(name)) throw ValidationError("undefined section '" + name + "'");
    const json& s = sections.at(name);
    const std::string where = "section '" + name + "'";
    if (s.contains("i_beam")) {
      const json& p = s.at("i_beam");
      const IBeamPlates plates{positive(p, "web_height", where), positive(p, "web_thickness", where),
                               positive(p, "flange_width", where), positive(p, "flange_thickness", where)};
      const MaterialSpec& steel = material(s.value("material", std::string("steel")));
      if (!s.contains("deck")) return steel_i_section(plates, steel);
      const json& d = s.at("deck");
      std::optional<double> width = default_width;
      if (d.contains("effective_width")) width = positive(d, "effective_width", where + " deck");
      if (!width) throw ValidationError(where + ": deck needs 'effective_width' outside a template");
      return composite_i_section(plates, steel,
                                 {positive(d, "thickness", where + " deck"), *width,
                                  material(d.value("material", std::string("rc")))});
    }
    SectionSpec out;
    out.bending_stiffness = s.at("bending_stiffness").get<double>();
    out.torsion_stiffness = s.value("torsion_stiffness", 0.0);
    out.z_top = s.value("z_top", 0.0);
    out.z_bottom = s.value("z_bottom", 0.0);
    return out;
  }

  const MaterialSpec& material(const std::string& name) const {
    const auto it = materials_.find(name);
    if (it == materials_.end()) throw ValidationError("undefined material '" + name + "'");
    return it->second;
  }

 private:
  void read_materials() {
    if (!doc_.contains("materials")) return;
    const json& mats = doc_.at("materials");
    // Plain materials first so mixtures can reference them.
    for (int pass = 0; pass < 2; ++pass) {
      for (auto it = mats.begin(); it != mats.end(); ++it) {
        const json& m = it.value();
        const bool mixture = m.contains("rule_of_mixtures");
        if (mixture != (pass == 1)) continue;
        double e = 0.0;
        if (mixture) {
          const json& r = m.at("rule_of_mixtures");
          e = equivalent_modulus(r.at("reinforcement_ratio").get<double>(),
                                 material(r.at("steel").get<std::string>()).youngs_modulus,
                                 r.at("matrix_modulus").get<double>());
        } else {
          e = m.at("youngs_modulus").get<double>();
        }
        materials_[it.key()] = make_material(e, m.at("poisson_ratio").get<double>());
      }
    }
  }

  const json& doc_;
  std::map<std::string, MaterialSpec> materials_;
};

MemberKind parse_kind(const std::string& s) {
  if (s == "girder") return MemberKind::girder;
  if (s == "crossbeam") return MemberKind::crossbeam;
  return MemberKind::other;
}

GrillageModel from_template(const json& t, const ConfigReader& cfg) {
  const std::string kind = t.at("kind").get<std::string>();
  if (kind == "two_girder") {
    TwoGirderTemplate p;
    p.span = t.value("span", p.span);
    p.girder_spacing = t.value("girder_spacing", p.girder_spacing);
    p.crossbeams = t.value("crossbeams", p.crossbeams);
    p.girder_subdivisions = t.value("girder_subdivisions", p.girder_subdivisions);
    p.crossbeam_subdivisions = t.value("crossbeam_subdivisions", p.crossbeam_subdivisions);
    if (t.contains("load_width")) p.load_width = t.at("load_width").get<double>();
    if (p.crossbeams < 2) throw ValidationError("template needs >= 2 crossbeams");
    const double bay = p.span / (p.crossbeams - 1);
    p.girder = cfg.section(t.at("girder_section").get<std::string>(), std::nullopt);
    p.crossbeam = cfg.section(t.at("crossbeam_section").get<std::string>(), bay);
    return make_two_girder(p);
  }
  if (kind == "simple_beam") {
    SimpleBeamTemplate p;
    p.span = t.at("span").get<double>();
    p.elements = t.value("elements", p.elements);
    p.load_width = t.value("load_width", 0.0);
    p.cantilever = t.value("cantilever", false);
    p.section = cfg.section(t.at("section").get<std::string>(), std::nullopt);
    return make_simple_beam(p);
  }
  throw ValidationError("unknown template kind '" + kind + "'");
}

GrillageModel from_tables(const json& doc, const ConfigReader& cfg) {
  GrillageModel m;
  std::map<int, int> node_index;
  for (const json& n : doc.at("nodes")) {
    const int id = n.at("id").get<int>();
    if (!node_index.emplace(id, static_cast<int>(m.nodes.size())).second) {
      throw ValidationError("duplicate node id " + std::to_string(id));
    }
    m.nodes.push_back({id, n.at("x").get<double>(), n.value("y", 0.0)});
  }
  auto lookup = [&node_index](int id, const std::string& where) {
    const auto it = node_index.find(id);
    if (it == node_index.end()) throw ValidationError(where + " references missing node " + std::to_string(id));
    return it->second;
  };

  std::set<int> element_ids;
  for (const json& e : doc.at("elements")) {
    Element el;
    el.id = e.at("id").get<int>();
    if (!element_ids.insert(el.id).second) throw ValidationError("duplicate element id " + std::to_string(el.id));
    const std::string where = "element " + std::to_string(el.id);
    const auto ns = e.at("nodes").get<std::vector<int>>();
    if (ns.size() != 2) throw ValidationError(where + " must have exactly two nodes");
    el.nodes = {lookup(ns[0], where), lookup(ns[1], where)};
    el.section = cfg.section(e.at("section").get<std::string>(), std::nullopt);
    el.member = e.value("member", 0);
    el.load_width = e.value("load_width", 0.0);
    m.elements.push_back(el);
  }

  if (doc.contains("members")) {
    for (const json& mb : doc.at("members")) {
      m.members.push_back({mb.at("id").get<int>(), parse_kind(mb.value("kind", std::string("other"))),
                           mb.value("name", std::string())});
    }
  } else {
    std::set<int> seen;
    for (const Element& e : m.elements) {
      if (seen.insert(e.member).second) m.members.push_back({e.member, MemberKind::girder, ""});
    }
  }

  for (const json& s : doc.value("supports", json::array())) {
    Support sup;
    sup.node = lookup(s.at("node").get<int>(), "support");
    for (const auto& name : s.at("fix").get<std::vector<std::string>>()) {
      if (name == "w") {
        sup.fixed[0] = true;
      } else if (name == "slope_x") {
        sup.fixed[1] = true;
      } else if (name == "slope_y") {
        sup.fixed[2] = true;
      } else {
        throw ValidationError("unknown support dof '" + name + "'");
      }
    }
    m.supports.push_back(sup);
  }
  return m;
}

}  // namespace

GrillageModel build_model(const nlohmann::json& config) {
  try {
    if (!config.is_object()) throw ValidationError("model configuration must be an object");
    if (!config.contains("schema_version")) throw ValidationError("model configuration lacks 'schema_version'");
    const int version = config.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw ValidationError("unsupported model schema_version " + std::to_string(version));
    }
    const ConfigReader cfg(config);
    GrillageModel m = config.contains("template") ? from_template(config.at("template"), cfg) : from_tables(config, cfg);
    const auto issues = validate_model(m);
    if (!issues.empty()) throw ValidationError("invalid model: " + issues.front());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model configuration: ") + e.what());
  }
}

GrillageModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model configuration " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("parse error in " + path.string() + ": " + e.what());
  }
  return build_model(doc);
}

std::vector<std::string> validate_model(const GrillageModel& model) {
  std::vector<std::string> issues;
  const int n = static_cast<int>(model.nodes.size());
  if (n == 0) issues.emplace_back("model has no nodes");
  if (model.elements.empty()) issues.emplace_back("model has no elements");

  bool topology_ok = true;
  for (const Element& e : model.elements) {
    const std::string tag = "element " + std::to_string(e.id);
    if (e.nodes[0] < 0 || e.nodes[0] >= n || e.nodes[1] < 0 || e.nodes[1] >= n) {
      issues.push_back(tag + ": invalid node index");
      topology_ok = false;
      continue;
    }
    if (!(model.element_length(e) > 0.0)) {
      issues.push_back(tag + ": zero-length element");
      topology_ok = false;
    }
    const SectionSpec& s = e.section;
    if (!(s.bending_stiffness > 0.0) || !(s.torsion_stiffness >= 0.0) || !std::isfinite(s.z_top) ||
        !std::isfinite(s.z_bottom) || !std::isfinite(s.bending_stiffness) || !std::isfinite(s.torsion_stiffness)) {
      issues.push_back(tag + ": non-physical section");
      topology_ok = false;
    }
    if (!(e.load_width >= 0.0)) issues.push_back(tag + ": negative load width");
  }
  for (const Support& s : model.supports) {
    if (s.node < 0 || s.node >= n) {
      issues.emplace_back("support: invalid node index");
      topology_ok = false;
    }
  }
  if (model.supports.empty()) {
    issues.emplace_back("rigid body modes unconstrained: model has no supports");
  } else if (topology_ok && n > 0 && !model.elements.empty()) {
    try {
      (void)assemble(model);
    } catch (const Error&) {
      issues.emplace_back("rigid body modes unconstrained: constrained stiffness is not positive definite");
    }
  }
  return issues;
}

}  // namespace twin
