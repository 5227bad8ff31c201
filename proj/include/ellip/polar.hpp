#pragma once

#include <Eigen/Dense>

namespace ellip {

/// Singularity threshold for the polar Jacobian.
inline constexpr double kSingularTol = 1e-12;

/// Quadrant-aware arc tangent of y/x with range (-pi, pi].
/// Throws Error(UndefinedAngle) for (0, 0).
double arctan_xy(double x, double y);

/// Unit vector from angles. theta has d-1 >= 1 entries: the first d-2 lie in
/// (-pi/2, pi/2] and the last in (-pi, pi].
Eigen::VectorXd angles_to_sphere(const Eigen::Ref<const Eigen::VectorXd>& theta);

/// Angles of a unit vector v (length d >= 2); inverse of angles_to_sphere.
///
/// When a trailing block of v vanishes the remaining angles are set to 0,
/// and theta_j = +-pi/2 follows from arctan_xy(0, v_j).
Eigen::VectorXd sphere_to_angles(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Jacobian d theta / d v^T of sphere_to_angles, a (d-1) x d matrix.
/// Requires every tail norm S_j = ||(v_j, ..., v_d)|| above kSingularTol.
Eigen::MatrixXd dg_dv(const Eigen::Ref<const Eigen::VectorXd>& v);

/// True iff theta lies in the angle box (component ranges as above).
bool in_angle_box(const Eigen::Ref<const Eigen::VectorXd>& theta);

}  // namespace ellip
