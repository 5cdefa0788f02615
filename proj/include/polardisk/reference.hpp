#pragma once

#include <Eigen/Dense>

#include "polardisk/stencils.hpp"

namespace polardisk {

/// Brute-force dense assembly written straight from the node coordinates.
/// Used as an oracle for assemble_operator on small grids.
struct DenseOperator {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd boundary_weight;  // coupling of row (m, j) to the ring value j
};

DenseOperator dense_reference_operator(const PolarGrid& grid, Family family,
                                       const CoefficientSet& coeffs);

}  // namespace polardisk
