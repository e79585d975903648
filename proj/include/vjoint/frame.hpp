#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace vjoint {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle into (-pi, pi]. Idempotent on that interval.
inline double wrap_angle(double angle) {
  double r = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

enum class Axis { X, Y, Z };

/// Element of SO(3) stored as a 3x3 matrix.
///
/// Construction from user data goes through from_matrix(), which projects onto
/// the nearest rotation. Products of rotations are not re-orthonormalized.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }

  /// Elementary rotation about a coordinate axis.
  static Rotation about(Axis axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 m;
    switch (axis) {
      case Axis::X:
        m << 1, 0, 0, 0, c, -s, 0, s, c;
        break;
      case Axis::Y:
        m << c, 0, s, 0, 1, 0, -s, 0, c;
        break;
      case Axis::Z:
        m << c, -s, 0, s, c, 0, 0, 0, 1;
        break;
    }
    return Rotation(m);
  }

  /// Nearest rotation (polar decomposition) to an arbitrary 3x3 matrix.
  static Rotation from_matrix(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    const Mat3& v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
    return Rotation(u * v.transpose());
  }

  /// Trusted construction; caller guarantees m is a rotation.
  static Rotation from_matrix_unchecked(const Mat3& m) { return Rotation(m); }

  /// Roll-pitch-yaw, applied as Rz(yaw) * Ry(pitch) * Rx(roll).
  static Rotation from_rpy(double roll, double pitch, double yaw) {
    return about(Axis::Z, yaw) * about(Axis::Y, pitch) * about(Axis::X, roll);
  }

  /// Unit quaternion (w, x, y, z); normalized before use.
  static Rotation from_quaternion(double w, double x, double y, double z) {
    Eigen::Quaterniond q(w, x, y, z);
    q.normalize();
    return Rotation(q.toRotationMatrix());
  }

  /// Inverse of from_rpy. Pitch is in [-pi/2, pi/2].
  Eigen::Vector3d rpy() const {
    const double pitch = std::atan2(-m_(2, 0), std::hypot(m_(0, 0), m_(1, 0)));
    const double yaw = std::atan2(m_(1, 0), m_(0, 0));
    const double roll = std::atan2(m_(2, 1), m_(2, 2));
    return {roll, pitch, yaw};
  }

  const Mat3& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  Rotation inverse() const { return Rotation(m_.transpose()); }

  Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  /// max |R^T R - I| and |det R - 1|.
  double orthonormality_defect() const {
    const double gram = (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
    return std::max(gram, std::abs(m_.determinant() - 1.0));
  }

  bool is_valid(double tol = 1e-9) const { return orthonormality_defect() <= tol; }

  /// Rotation angle of R1^T R2 in radians.
  static double angle_between(const Rotation& a, const Rotation& b) {
    const Mat3 d = a.m_.transpose() * b.m_;
    // atan2 form stays accurate for tiny angles where acos(trace) does not.
    const Vec3 axis(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
    return std::atan2(0.5 * axis.norm(), 0.5 * (d.trace() - 1.0));
  }

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

inline Rotation rot_axis(Axis axis, double angle) { return Rotation::about(axis, angle); }

/// Rigid transform: x -> rotation * x + position. Positions in mm.
struct Frame {
  Rotation rotation;
  Vec3 position = Vec3::Zero();

  static Frame identity() { return {}; }
  static Frame translation(const Vec3& p) { return {Rotation::identity(), p}; }
  static Frame translation(double x, double y, double z) { return translation(Vec3(x, y, z)); }
  static Frame pure_rotation(const Rotation& r) { return {r, Vec3::Zero()}; }

  Frame operator*(const Frame& other) const {
    return {rotation * other.rotation, rotation * other.position + position};
  }

  Vec3 apply(const Vec3& point) const { return rotation * point + position; }

  Frame inverse() const {
    const Rotation rt = rotation.inverse();
    return {rt, -(rt * position)};
  }

  Mat4 homogeneous() const {
    Mat4 h = Mat4::Identity();
    h.topLeftCorner<3, 3>() = rotation.matrix();
    h.topRightCorner<3, 1>() = position;
    return h;
  }

  static Frame from_homogeneous(const Mat4& h) {
    return {Rotation::from_matrix_unchecked(h.topLeftCorner<3, 3>()), h.topRightCorner<3, 1>()};
  }
};

/// Position error in mm and orientation error in rad between two frames.
struct FrameDistance {
  double position = 0.0;
  double orientation = 0.0;
};

inline FrameDistance frame_distance(const Frame& a, const Frame& b) {
  return {(a.position - b.position).norm(), Rotation::angle_between(a.rotation, b.rotation)};
}

}  // namespace vjoint
