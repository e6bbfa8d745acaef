#pragma once

#include <Eigen/Dense>

namespace homsense {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Momentum-difference vector in whitened coordinates (kappa = sqrt(Sigma) * delta_k).
using KappaVector = Vec3;

}  // namespace homsense
