#include "pinchlab/geometry.hpp"

#include "pinchlab/errors.hpp"

#include <algorithm>

namespace pinchlab {

double geodesic_distance(const Vec4& a, const Vec4& b) {
  const double c = a.dot(b);
  const double s = (b - c * a).norm();
  return std::atan2(s, c);
}

Vec4 sphere_exp(const Vec4& p, const Vec4& v) {
  const double t = v.norm();
  if (t < 1e-300) return p;
  return std::cos(t) * p + (std::sin(t) / t) * v;
}

Vec4 sphere_log(const Vec4& p, const Vec4& x) {
  const Vec4 u = tangent_part(p, x);
  const double s = u.norm();
  const double r = std::atan2(s, p.dot(x));
  if (s < 1e-300) return Vec4::Zero();
  return (r / s) * u;
}

double sinc_smooth(double r) {
  if (std::abs(r) < 1e-6) {
    const double r2 = r * r;
    return 1.0 - r2 / 6.0 + r2 * r2 / 120.0 - r2 * r2 * r2 / 5040.0;
  }
  return std::sin(r) / r;
}

std::array<Vec4, 3> tangent_basis(const Vec4& p) {
  int piv = 0;
  p.cwiseAbs().maxCoeff(&piv);
  const double sign = p[piv] >= 0.0 ? 1.0 : -1.0;
  const Vec4 q = sign * p;

  std::array<Vec4, 3> out;
  int k = 0;
  for (int i = 0; i < 4 && k < 3; ++i) {
    if (i == piv) continue;
    Vec4 v = Vec4::Unit(i) - q.dot(Vec4::Unit(i)) * q;
    for (int j = 0; j < k; ++j) v -= out[j].dot(v) * out[j];
    out[k++] = v.normalized();
  }
  if (sign < 0) {
    for (auto& b : out) b = -b;
  }
  return out;
}

Vec4 cross4(const Vec4& u, const Vec4& v, const Vec4& w) {
  // Cofactor expansion of det[e; u; v; w] along the first row.
  auto minor3 = [&](int c0, int c1, int c2) {
    return u[c0] * (v[c1] * w[c2] - v[c2] * w[c1]) -
           u[c1] * (v[c0] * w[c2] - v[c2] * w[c0]) +
           u[c2] * (v[c0] * w[c1] - v[c1] * w[c0]);
  };
  Vec4 n;
  n[0] = -minor3(1, 2, 3);
  n[1] = minor3(0, 2, 3);
  n[2] = -minor3(0, 1, 3);
  n[3] = minor3(0, 1, 2);
  return n;
}

double legendre(int m, double t) {
  if (m <= 0) return 1.0;
  double pm1 = 1.0, p = t;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0) * t * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = next;
  }
  return p;
}

TriangleGeometry spherical_triangle(double a, double b, double c) {
  const std::array<double, 3> len = {a, b, c};
  for (double l : len) {
    if (!(l > 1e-14) || !(l < kPi)) {
      throw NumericError("spherical_triangle: side length out of range");
    }
  }
  const double s = (a + b + c) / 2.0;
  const double ta = std::max(std::tan((s - a) / 2.0), 0.0);
  const double tb = std::max(std::tan((s - b) / 2.0), 0.0);
  const double tc = std::max(std::tan((s - c) / 2.0), 0.0);
  const double prod = std::tan(s / 2.0) * ta * tb * tc;

  TriangleGeometry out;
  out.area = 4.0 * std::atan(std::sqrt(std::max(prod, 0.0)));

  for (int i = 0; i < 3; ++i) {
    const double opp = len[i];
    const double s1 = len[(i + 1) % 3];
    const double s2 = len[(i + 2) % 3];
    double cosang = (std::cos(opp) - std::cos(s1) * std::cos(s2)) /
                    (std::sin(s1) * std::sin(s2));
    cosang = std::clamp(cosang, -1.0, 1.0);
    const double sinang = std::sqrt(std::max(1.0 - cosang * cosang, 1e-30));
    out.cot[i] = cosang / sinang;
  }
  return out;
}

Vec4 face_gradient(const Vec4& p0, const Vec4& p1, const Vec4& p2,
                   double f0, double f1, double f2) {
  const Vec4 e1 = p1 - p0;
  const Vec4 e2 = p2 - p0;
  const double a11 = e1.dot(e1), a12 = e1.dot(e2), a22 = e2.dot(e2);
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) < 1e-30) throw NumericError("face_gradient: degenerate face");
  const double b1 = f1 - f0, b2 = f2 - f0;
  const double c1 = (a22 * b1 - a12 * b2) / det;
  const double c2 = (a11 * b2 - a12 * b1) / det;
  return c1 * e1 + c2 * e2;
}

Vec4 face_project(const Vec4& p0, const Vec4& p1, const Vec4& p2, const Vec4& v) {
  const Vec4 e1 = p1 - p0;
  const Vec4 e2 = p2 - p0;
  const double a11 = e1.dot(e1), a12 = e1.dot(e2), a22 = e2.dot(e2);
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) < 1e-30) throw NumericError("face_project: degenerate face");
  const double b1 = e1.dot(v), b2 = e2.dot(v);
  const double c1 = (a22 * b1 - a12 * b2) / det;
  const double c2 = (a11 * b2 - a12 * b1) / det;
  return c1 * e1 + c2 * e2;
}

}  // namespace pinchlab
