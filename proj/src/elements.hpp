#pragma once

#include <Eigen/Core>

// Element matrices shared by assembly and the resolvent trust horizon.
namespace chainwave::elements {

inline Eigen::Matrix2d string_mass(double he) { return (Eigen::Matrix2d() << 2.0, 1.0, 1.0, 2.0).finished() * (he / 6.0); }

inline Eigen::Matrix2d string_stiffness(double he) {
  return (Eigen::Matrix2d() << 1.0, -1.0, -1.0, 1.0).finished() / he;
}

// Local order (w1, theta1, w2, theta2).
inline Eigen::Matrix4d beam_mass(double H) {
  Eigen::Matrix4d m;
  m << 156.0, 22.0 * H, 54.0, -13.0 * H,
       22.0 * H, 4.0 * H * H, 13.0 * H, -3.0 * H * H,
       54.0, 13.0 * H, 156.0, -22.0 * H,
       -13.0 * H, -3.0 * H * H, -22.0 * H, 4.0 * H * H;
  return m * (H / 420.0);
}

inline Eigen::Matrix4d beam_stiffness(double H) {
  Eigen::Matrix4d k;
  k << 12.0, 6.0 * H, -12.0, 6.0 * H,
       6.0 * H, 4.0 * H * H, -6.0 * H, 2.0 * H * H,
       -12.0, -6.0 * H, 12.0, -6.0 * H,
       6.0 * H, 2.0 * H * H, -6.0 * H, 4.0 * H * H;
  return k / (H * H * H);
}

}  // namespace chainwave::elements
