#pragma once

#include <array>
#include <cmath>

namespace ivote {

// Row-major 3x3 rotation matrix.
using Mat3 = std::array<double, 9>;
using Vec3 = std::array<double, 3>;

inline Mat3 mat3_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

inline Vec3 rotate(const Mat3& r, const Vec3& v) {
  return {r[0] * v[0] + r[1] * v[1] + r[2] * v[2],
          r[3] * v[0] + r[4] * v[1] + r[5] * v[2],
          r[6] * v[0] + r[7] * v[1] + r[8] * v[2]};
}

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
      c[3 * i + j] = s;
    }
  return c;
}

inline Mat3 mat3_transpose(const Mat3& a) {
  return {a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]};
}

inline double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Exponential map: angle-axis vector (angle = |phi|, axis = phi/|phi|) to a
// rotation matrix via the Rodrigues formula. Stable for small angles.
inline Mat3 rotation_from_angle_axis(const Vec3& phi) {
  const double th = norm3(phi);
  double a, b;  // a = sin(th)/th, b = (1-cos(th))/th^2
  if (th < 1e-8) {
    a = 1.0 - th * th / 6.0;
    b = 0.5 - th * th / 24.0;
  } else {
    a = std::sin(th) / th;
    b = (1.0 - std::cos(th)) / (th * th);
  }
  const double x = phi[0], y = phi[1], z = phi[2];
  Mat3 r;
  r[0] = 1.0 - b * (y * y + z * z);
  r[1] = -a * z + b * x * y;
  r[2] = a * y + b * x * z;
  r[3] = a * z + b * x * y;
  r[4] = 1.0 - b * (x * x + z * z);
  r[5] = -a * x + b * y * z;
  r[6] = -a * y + b * x * z;
  r[7] = a * x + b * y * z;
  r[8] = 1.0 - b * (x * x + y * y);
  return r;
}

// Logarithm map: rotation matrix to angle-axis with |phi| <= pi.
inline Vec3 angle_axis_from_rotation(const Mat3& r) {
  const double tr = r[0] + r[4] + r[8];
  double c = (tr - 1.0) * 0.5;
  c = std::fmax(-1.0, std::fmin(1.0, c));
  const double th = std::acos(c);
  Vec3 w{r[7] - r[5], r[2] - r[6], r[3] - r[1]};  // 2 sin(th) * axis
  if (th < 1e-8) return {0.5 * w[0], 0.5 * w[1], 0.5 * w[2]};
  if (th > M_PI - 1e-6) {
    // Near pi the off-diagonal difference vanishes; recover the axis from the
    // diagonal of (r + I)/2 = axis axis^T near th = pi.
    Vec3 ax{std::sqrt(std::fmax(0.0, (r[0] + 1.0) * 0.5)),
            std::sqrt(std::fmax(0.0, (r[4] + 1.0) * 0.5)),
            std::sqrt(std::fmax(0.0, (r[8] + 1.0) * 0.5))};
    // Fix signs using the largest component.
    int m = 0;
    if (ax[1] > ax[m]) m = 1;
    if (ax[2] > ax[m]) m = 2;
    if (m == 0) {
      if (r[1] + r[3] < 0) ax[1] = -ax[1];
      if (r[2] + r[6] < 0) ax[2] = -ax[2];
    } else if (m == 1) {
      if (r[1] + r[3] < 0) ax[0] = -ax[0];
      if (r[5] + r[7] < 0) ax[2] = -ax[2];
    } else {
      if (r[2] + r[6] < 0) ax[0] = -ax[0];
      if (r[5] + r[7] < 0) ax[1] = -ax[1];
    }
    // Orient so that it agrees with w where w is meaningful.
    if (ax[0] * w[0] + ax[1] * w[1] + ax[2] * w[2] < 0)
      ax = {-ax[0], -ax[1], -ax[2]};
    return {th * ax[0], th * ax[1], th * ax[2]};
  }
  const double s = th / (2.0 * std::sin(th));
  return {s * w[0], s * w[1], s * w[2]};
}

// Angle of relative rotation between two rotations, in radians.
inline double geodesic_angle(const Mat3& a, const Mat3& b) {
  const Mat3 rel = mat3_mul(mat3_transpose(a), b);
  double c = (rel[0] + rel[4] + rel[8] - 1.0) * 0.5;
  c = std::fmax(-1.0, std::fmin(1.0, c));
  return std::acos(c);
}

// Sound bound on |exp(phi) v - exp(phi_c) v| for phi anywhere in a box with
// half-widths hw around phi_c: the exponential map is 1-Lipschitz from the
// angle-axis metric to the rotation (operator-norm) metric, so the deflection
// is at most |phi - phi_c| <= |hw|_2. Returns rho with the guarantee
// |R v - R_c v| <= rho |v| for every phi in the box.
inline double rotation_ball_radius(const Vec3& hw) {
  return norm3(hw);
}

}  // namespace ivote
