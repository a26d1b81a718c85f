#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace e2neg {

using NodeId = std::int32_t;

// Dense row-major storage: one node per row, which is the access pattern of
// every aggregation in this library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace e2neg
