#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace pinchlab {

using Vec4 = Eigen::Vector4d;
using Vec3 = Eigen::Vector3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kPi = 3.14159265358979323846;

// Geodesic distance between two unit vectors, stable near 0 and pi.
double geodesic_distance(const Vec4& a, const Vec4& b);

// Component of v orthogonal to the unit vector p (projection into T_p S^3).
inline Vec4 tangent_part(const Vec4& p, const Vec4& v) {
  return v - p.dot(v) * p;
}

// exp_p(v) for v tangent at p; exp of the zero vector is p itself.
Vec4 sphere_exp(const Vec4& p, const Vec4& v);

// Inverse of sphere_exp: tangent vector at p with |result| = d(p, x).
// Undefined at the antipode; callers must keep d < pi.
Vec4 sphere_log(const Vec4& p, const Vec4& x);

// sin(r)/r, evaluated by a 4-term series below r = 1e-6.
double sinc_smooth(double r);

// Orthonormal basis of p^perp in R^4, deterministic, with basis(-p) == -basis(p)
// so mirrored constructions stay exactly congruent under x -> -x.
std::array<Vec4, 3> tangent_basis(const Vec4& p);

// Vector orthogonal to u, v, w with the epsilon-tensor sign convention
// cross4(e1, e2, e3) = e4.
Vec4 cross4(const Vec4& u, const Vec4& v, const Vec4& w);

// Legendre polynomial P_m(t) on [-1, 1] by the three-term recurrence.
double legendre(int m, double t);

struct TriangleGeometry {
  double area = 0;                    // spherical excess (l'Huilier)
  std::array<double, 3> cot{};        // cotangent of the corner opposite side i
};

// Intrinsic data of a geodesic triangle from its three side lengths.
// Side i is opposite corner i. Throws NumericError on degenerate input.
TriangleGeometry spherical_triangle(double a, double b, double c);

// Piecewise-linear gradient of the vertex samples (f0, f1, f2) over the flat
// triangle (p0, p1, p2); the result lies in the face plane.
Vec4 face_gradient(const Vec4& p0, const Vec4& p1, const Vec4& p2,
                   double f0, double f1, double f2);

// Projection of an ambient vector onto the plane spanned by (p1-p0, p2-p0).
Vec4 face_project(const Vec4& p0, const Vec4& p1, const Vec4& p2, const Vec4& v);

}  // namespace pinchlab
