#include "schurnorm/schur_family.hpp"

namespace schurnorm {

GridMax SchurFamily::grid_max(const Eigen::VectorXd& x) const {
  const SchurField f = problem_.field(SchurModel(x));
  GridMax gm;
  gm.value = f.kappa_x() * f.kappa_y();
  // With a zero product every pair ties; the lowest pair wins.
  gm.arg = gm.value > 0.0 ? IndexPair{f.argmax_x(), f.argmax_y()} : IndexPair{0, 0};
  return gm;
}

void SchurFamily::values_and_jacobian(const Eigen::VectorXd& x,
                                      std::span<const IndexPair> pairs,
                                      Eigen::VectorXd& values,
                                      Eigen::MatrixXd& jacobian) const {
  ObjectiveGrad og = problem_.objective_grad(SchurModel(x), pairs);
  values = std::move(og.values);
  jacobian = std::move(og.jacobian);
}

}  // namespace schurnorm
