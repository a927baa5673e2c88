#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "twin/gaussian.hpp"
#include "twin/model.hpp"
#include "twin/sensors.hpp"

namespace twin {

/// Free-dof numbering after row/column elimination of supported dofs.
class DofMap {
 public:
  explicit DofMap(const GrillageModel& model);

  Eigen::Index free_count() const { return static_cast<Eigen::Index>(free_to_global_.size()); }
  /// Free index of (node, dof), or -1 when the dof is constrained.
  int free_index(int node, Dof dof) const { return global_to_free_[node * kDofsPerNode + static_cast<int>(dof)]; }
  int free_index(int global) const { return global_to_free_[global]; }
  int global_index(int free) const { return free_to_global_[free]; }
  const std::vector<int>& constrained() const { return constrained_; }

  // Free indices of the six dofs of element e (-1 for constrained entries).
  std::array<int, 6> element_dofs(const Element& e) const;

 private:
  std::vector<int> global_to_free_;
  std::vector<int> free_to_global_;
  std::vector<int> constrained_;
};

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Local grillage element stiffness on (w1, theta1, phi1, w2, theta2, phi2):
/// Hermite bending on (w, theta) plus St-Venant torsion on phi.
Matrix6 element_stiffness(const SectionSpec& section, double length);

/// Maps global nodal dofs (w, dw/dx, dw/dy) to the element frame given its direction cosines.
Matrix6 element_rotation(double cos_angle, double sin_angle);

/// Cubic Hermite basis on xi in [0,1] for (w1, theta1, w2, theta2).
Eigen::Vector4d hermite_values(double xi, double length);
/// d^2/ds^2 of the Hermite basis.
Eigen::Vector4d hermite_curvatures(double xi, double length);

/// Global stiffness (n_dof x n_dof) before elimination of supports.
Eigen::MatrixXd assemble_unconstrained(const GrillageModel& model);

/// Reduced stiffness matrix with cached Cholesky factor.
class StiffnessMatrix {
 public:
  /// Throws NumericalError("unconstrained rigid body modes") if not positive definite.
  explicit StiffnessMatrix(Eigen::MatrixXd a);

  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::LLT<Eigen::MatrixXd>& factor() const { return llt_; }
  Eigen::Index size() const { return a_.rows(); }

 private:
  Eigen::MatrixXd a_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct AssembledSystem {
  StiffnessMatrix stiffness;
  DofMap dofs;
};

AssembledSystem assemble(const GrillageModel& model);

Eigen::VectorXd solve(const StiffnessMatrix& a, const Eigen::VectorXd& f);
Eigen::MatrixXd solve(const StiffnessMatrix& a, const Eigen::MatrixXd& f);

/// Free-dof displacement vector expanded to all nodal dofs (constrained entries zero).
Eigen::VectorXd expand_to_nodes(const DofMap& dofs, const Eigen::VectorXd& free);

struct StrainRow {
  int sensor_id = 0;
  int element = 0;
  double xi = 0.0;
  Fiber fiber = Fiber::bottom;
};

/// Linear map from free displacements to fiber strain at sensor stations.
struct StrainOperator {
  Eigen::MatrixXd matrix;  // n_y x n_u
  std::vector<StrainRow> rows;

  Eigen::Index sensors() const { return matrix.rows(); }
};

struct ElementPoint {
  int element = -1;
  double xi = 0.0;
};

/// Element of `member` (any member when -1) containing the plan point, within `tolerance` metres.
std::optional<ElementPoint> locate_on_element(const GrillageModel& model, double x, double y, int member,
                                              double tolerance = 1e-6);

/// Throws ValidationError when a sensor is off the structure.
StrainOperator build_strain_operator(const GrillageModel& model, const DofMap& dofs, const SensorLayout& layout);

/// N(A^-1 f, A^-1 C_f A^-T). Throws NumericalError for a non-PSD C_f.
GaussianBelief propagate_prior(const StiffnessMatrix& a, const Eigen::VectorXd& f_mean, const Eigen::MatrixXd& f_cov);

/// A^-1 C A^-T through the stiffness factor.
Eigen::MatrixXd propagate_covariance(const StiffnessMatrix& a, const Eigen::MatrixXd& f_cov);

}  // namespace twin
