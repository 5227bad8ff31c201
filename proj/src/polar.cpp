#include "ellip/polar.hpp"

#include <cmath>
#include <numbers>

#include "ellip/error.hpp"

namespace ellip {

using std::numbers::pi;

double arctan_xy(double x, double y) {
  if (x > 0.0) return std::atan(y / x);
  if (x < 0.0) return y >= 0.0 ? std::atan(y / x) + pi : std::atan(y / x) - pi;
  if (y > 0.0) return pi / 2.0;
  if (y < 0.0) return -pi / 2.0;
  throw Error(ErrorCode::UndefinedAngle, "arctan_xy is undefined at (0, 0)");
}

bool in_angle_box(const Eigen::Ref<const Eigen::VectorXd>& theta) {
  const Eigen::Index m = theta.size();
  if (m < 1) return false;
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    if (!(theta[j] > -pi / 2.0 && theta[j] <= pi / 2.0)) return false;
  }
  return theta[m - 1] > -pi && theta[m - 1] <= pi;
}

Eigen::VectorXd angles_to_sphere(const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (!in_angle_box(theta)) {
    throw Error(ErrorCode::Domain, "angle vector outside the angle box");
  }
  const Eigen::Index m = theta.size();
  Eigen::VectorXd v(m + 1);
  double cos_prod = 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    v[j] = cos_prod * std::sin(theta[j]);
    cos_prod *= std::cos(theta[j]);
  }
  v[m] = cos_prod;
  return v;
}

namespace {

// tail[j] = ||(v_j, ..., v_{d-1})|| (0-based), accumulated from the end.
Eigen::VectorXd tail_norms(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index d = v.size();
  Eigen::VectorXd tail(d);
  double acc = 0.0;
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    acc = std::hypot(acc, v[j]);
    tail[j] = acc;
  }
  return tail;
}

}  // namespace

Eigen::VectorXd sphere_to_angles(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index d = v.size();
  if (d < 2) throw Error(ErrorCode::Domain, "sphere_to_angles needs d >= 2");
  if (!v.allFinite()) throw Error(ErrorCode::Domain, "direction vector is not finite");
  const Eigen::VectorXd tail = tail_norms(v);
  if (tail[0] == 0.0) throw Error(ErrorCode::DegenerateDirection, "zero direction vector");

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d - 1);
  for (Eigen::Index j = 0; j + 2 < d; ++j) {
    if (tail[j] == 0.0) return theta;  // everything from here on is zero
    if (tail[j + 1] == 0.0) {
      // Only v_j is left: the point sits at a pole of this coordinate.
      theta[j] = v[j] > 0.0 ? pi / 2.0 : -pi / 2.0;
      if (v[j] < 0.0) {
        // -pi/2 is outside (-pi/2, pi/2]; no angle in the box maps here
        // with later angles at 0, so report it as degenerate.
        throw Error(ErrorCode::DegenerateDirection,
                    "direction with negative last nonzero coordinate before v_{d-1}");
      }
      return theta;
    }
    theta[j] = arctan_xy(tail[j + 1], v[j]);
  }
  if (v[d - 1] == 0.0 && v[d - 2] == 0.0) {
    theta[d - 2] = 0.0;
  } else {
    theta[d - 2] = arctan_xy(v[d - 1], v[d - 2]);
  }
  return theta;
}

Eigen::MatrixXd dg_dv(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index d = v.size();
  if (d < 2) throw Error(ErrorCode::Domain, "dg_dv needs d >= 2");
  const Eigen::VectorXd tail = tail_norms(v);
  for (Eigen::Index j = 0; j + 1 < d; ++j) {
    if (!(tail[j] > kSingularTol)) {
      throw Error(ErrorCode::SingularJacobian, "polar Jacobian is singular (tail norm below 1e-12)");
    }
  }
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d - 1, d);
  for (Eigen::Index j = 0; j + 2 < d; ++j) {
    const double s = tail[j], s_next = tail[j + 1];
    jac(j, j) = s_next / (s * s);
    for (Eigen::Index k = j + 1; k < d; ++k) {
      jac(j, k) = -v[j] * v[k] / (s * s * s_next);
    }
  }
  const double s_last = tail[d - 2];
  jac(d - 2, d - 2) = v[d - 1] / (s_last * s_last);
  jac(d - 2, d - 1) = -v[d - 2] / (s_last * s_last);
  return jac;
}

}  // namespace ellip
