#include "twin/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twin/errors.hpp"

namespace twin {

namespace {
constexpr double kSingularRcond = 1e-14;
}  // namespace

DofMap::DofMap(const GrillageModel& model) : global_to_free_(model.dof_count(), 0) {
  for (const Support& s : model.supports) {
    for (int d = 0; d < kDofsPerNode; ++d) {
      if (s.fixed[d]) global_to_free_[s.node * kDofsPerNode + d] = -1;
    }
  }
  for (int g = 0; g < static_cast<int>(global_to_free_.size()); ++g) {
    if (global_to_free_[g] < 0) {
      constrained_.push_back(g);
    } else {
      global_to_free_[g] = static_cast<int>(free_to_global_.size());
      free_to_global_.push_back(g);
    }
  }
}

std::array<int, 6> DofMap::element_dofs(const Element& e) const {
  std::array<int, 6> out{};
  for (int a = 0; a < 2; ++a) {
    for (int d = 0; d < kDofsPerNode; ++d) {
      out[a * kDofsPerNode + d] = global_to_free_[e.nodes[a] * kDofsPerNode + d];
    }
  }
  return out;
}

Matrix6 element_stiffness(const SectionSpec& section, double length) {
  if (!(length > 0.0)) throw ValidationError("element length must be positive");
  const double l = length;
  const double b = section.bending_stiffness / (l * l * l);
  const double t = section.torsion_stiffness / l;

  // Bending block on local indices (0, 1, 3, 4); torsion on (2, 5).
  const std::array<int, 4> bend{0, 1, 3, 4};
  const double kb[4][4] = {
      {12.0, 6.0 * l, -12.0, 6.0 * l},
      {6.0 * l, 4.0 * l * l, -6.0 * l, 2.0 * l * l},
      {-12.0, -6.0 * l, 12.0, -6.0 * l},
      {6.0 * l, 2.0 * l * l, -6.0 * l, 4.0 * l * l},
  };
  Matrix6 k = Matrix6::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) k(bend[i], bend[j]) = b * kb[i][j];
  }
  k(2, 2) = t;
  k(5, 5) = t;
  k(2, 5) = -t;
  k(5, 2) = -t;
  return k;
}

Matrix6 element_rotation(double c, double s) {
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0,
       0.0, c, s,
       0.0, -s, c;
  Matrix6 t = Matrix6::Zero();
  t.topLeftCorner<3, 3>() = r;
  t.bottomRightCorner<3, 3>() = r;
  return t;
}

Eigen::Vector4d hermite_values(double xi, double l) {
  const double x2 = xi * xi;
  const double x3 = x2 * xi;
  return {1.0 - 3.0 * x2 + 2.0 * x3, l * (xi - 2.0 * x2 + x3), 3.0 * x2 - 2.0 * x3, l * (x3 - x2)};
}

Eigen::Vector4d hermite_curvatures(double xi, double l) {
  return {(12.0 * xi - 6.0) / (l * l), (6.0 * xi - 4.0) / l, (6.0 - 12.0 * xi) / (l * l), (6.0 * xi - 2.0) / l};
}

namespace {

struct ElementFrame {
  double length;
  double c;
  double s;
};

ElementFrame frame(const GrillageModel& model, const Element& e) {
  const Node& a = model.nodes[e.nodes[0]];
  const Node& b = model.nodes[e.nodes[1]];
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double l = std::hypot(dx, dy);
  if (!(l > 0.0)) throw ValidationError("zero-length element " + std::to_string(e.id));
  return {l, dx / l, dy / l};
}

Matrix6 global_element_stiffness(const GrillageModel& model, const Element& e) {
  const ElementFrame f = frame(model, e);
  const Matrix6 t = element_rotation(f.c, f.s);
  return t.transpose() * element_stiffness(e.section, f.length) * t;
}

}  // namespace

Eigen::MatrixXd assemble_unconstrained(const GrillageModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dof_count());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const Element& e : model.elements) {
    const Matrix6 ke = global_element_stiffness(model, e);
    for (int a = 0; a < 6; ++a) {
      const int ga = e.nodes[a / 3] * kDofsPerNode + a % 3;
      for (int b = 0; b < 6; ++b) {
        const int gb = e.nodes[b / 3] * kDofsPerNode + b % 3;
        k(ga, gb) += ke(a, b);
      }
    }
  }
  return k;
}

StiffnessMatrix::StiffnessMatrix(Eigen::MatrixXd a) : a_(std::move(a)), llt_(a_) {
  // A rigid mode can survive the factorization as a round-off-sized pivot.
  if (a_.rows() == 0 || llt_.info() != Eigen::Success || llt_.rcond() < kSingularRcond) {
    throw NumericalError("unconstrained rigid body modes: stiffness matrix is not positive definite");
  }
}

AssembledSystem assemble(const GrillageModel& model) {
  DofMap dofs(model);
  const Eigen::Index n = dofs.free_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Element& e : model.elements) {
    const Matrix6 ke = global_element_stiffness(model, e);
    const auto idx = dofs.element_dofs(e);
    for (int i = 0; i < 6; ++i) {
      if (idx[i] < 0) continue;
      for (int j = 0; j < 6; ++j) {
        if (idx[j] >= 0) a(idx[i], idx[j]) += ke(i, j);
      }
    }
  }
  symmetrize(a);
  return {StiffnessMatrix(std::move(a)), std::move(dofs)};
}

Eigen::VectorXd solve(const StiffnessMatrix& a, const Eigen::VectorXd& f) {
  if (f.size() != a.size()) throw ValidationError("load vector dimension does not match stiffness matrix");
  return a.factor().solve(f);
}

Eigen::MatrixXd solve(const StiffnessMatrix& a, const Eigen::MatrixXd& f) {
  if (f.rows() != a.size()) throw ValidationError("load matrix dimension does not match stiffness matrix");
  return a.factor().solve(f);
}

Eigen::VectorXd expand_to_nodes(const DofMap& dofs, const Eigen::VectorXd& free) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.free_count() + dofs.constrained().size()));
  for (Eigen::Index i = 0; i < free.size(); ++i) full(dofs.global_index(static_cast<int>(i))) = free(i);
  return full;
}

std::optional<ElementPoint> locate_on_element(const GrillageModel& model, double x, double y, int member,
                                              double tolerance) {
  for (std::size_t ei = 0; ei < model.elements.size(); ++ei) {
    const Element& e = model.elements[ei];
    if (member >= 0 && e.member != member) continue;
    const Node& a = model.nodes[e.nodes[0]];
    const Node& b = model.nodes[e.nodes[1]];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double l2 = dx * dx + dy * dy;
    if (!(l2 > 0.0)) continue;
    const double t = ((x - a.x) * dx + (y - a.y) * dy) / l2;
    const double l = std::sqrt(l2);
    const double along = t * l;
    const double across = std::abs((x - a.x) * dy - (y - a.y) * dx) / l;
    if (across <= tolerance && along >= -tolerance && along <= l + tolerance) {
      return ElementPoint{static_cast<int>(ei), std::clamp(t, 0.0, 1.0)};
    }
  }
  return std::nullopt;
}

StrainOperator build_strain_operator(const GrillageModel& model, const DofMap& dofs, const SensorLayout& layout) {
  StrainOperator op;
  op.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(layout.size()), dofs.free_count());
  op.rows.reserve(layout.size());
  for (std::size_t r = 0; r < layout.size(); ++r) {
    const Sensor& s = layout.sensors[r];
    const auto at = locate_on_element(model, s.x, s.y, s.member);
    if (!at) {
      throw ValidationError("sensor " + std::to_string(s.id) + " is off the structure");
    }
    const Element& e = model.elements[at->element];
    const ElementFrame f = frame(model, e);
    const double z = s.fiber == Fiber::top ? e.section.z_top : e.section.z_bottom;
    const Eigen::Vector4d curv = hermite_curvatures(at->xi, f.length);

    // Row over local dofs, then rotated to global nodal dofs.
    Vector6 local = Vector6::Zero();
    local(0) = curv(0);
    local(1) = curv(1);
    local(3) = curv(2);
    local(4) = curv(3);
    const Vector6 global = -z * (element_rotation(f.c, f.s).transpose() * local);

    const auto idx = dofs.element_dofs(e);
    for (int i = 0; i < 6; ++i) {
      if (idx[i] >= 0) op.matrix(static_cast<Eigen::Index>(r), idx[i]) += global(i);
    }
    op.rows.push_back({s.id, at->element, at->xi, s.fiber});
  }
  return op;
}

Eigen::MatrixXd propagate_covariance(const StiffnessMatrix& a, const Eigen::MatrixXd& f_cov) {
  if (f_cov.rows() != a.size() || f_cov.cols() != a.size()) {
    throw ValidationError("force covariance dimension does not match stiffness matrix");
  }
  // A^-1 C A^-1 = L^-T (L^-1 C L^-T) L^-1.
  const auto& llt = a.factor();
  Eigen::MatrixXd m = llt.matrixL().solve(f_cov);
  m = llt.matrixL().solve(m.transpose()).eval();
  m = llt.matrixU().solve(m);
  m = llt.matrixU().solve(m.transpose()).eval();
  symmetrize(m);
  return m;
}

GaussianBelief propagate_prior(const StiffnessMatrix& a, const Eigen::VectorXd& f_mean, const Eigen::MatrixXd& f_cov) {
  if (f_mean.size() != a.size()) throw ValidationError("force mean dimension does not match stiffness matrix");
  if (!is_symmetric(f_cov)) throw ValidationError("force covariance is not symmetric");
  if (f_cov.cwiseAbs().maxCoeff() > 0.0 && !try_factorize_covariance(f_cov, "force covariance")) {
    throw NumericalError("force covariance is not positive semidefinite");
  }
  return GaussianBelief(solve(a, f_mean), propagate_covariance(a, f_cov));
}

}  // namespace twin
