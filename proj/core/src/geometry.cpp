#include "uweno/geometry.hpp"

#include <cmath>
#include <numbers>

#include "uweno/errors.hpp"

namespace uweno {

namespace {

struct TriIntegrals {
  double area, x, y, x2, y2, xy;  // signed integrals, not averages
};

// Closed-form monomial integrals over a (signed) triangle.
TriIntegrals tri_integrals(Vec2 p0, Vec2 p1, Vec2 p2) {
  const double a = 0.5 * cross(p1 - p0, p2 - p0);
  TriIntegrals t;
  t.area = a;
  t.x = a * (p0.x + p1.x + p2.x) / 3.0;
  t.y = a * (p0.y + p1.y + p2.y) / 3.0;
  t.x2 = a / 6.0 *
         (p0.x * p0.x + p1.x * p1.x + p2.x * p2.x + p0.x * p1.x + p0.x * p2.x + p1.x * p2.x);
  t.y2 = a / 6.0 *
         (p0.y * p0.y + p1.y * p1.y + p2.y * p2.y + p0.y * p1.y + p0.y * p2.y + p1.y * p2.y);
  t.xy = a / 12.0 *
         (p0.x * (2.0 * p0.y + p1.y + p2.y) + p1.x * (p0.y + 2.0 * p1.y + p2.y) +
          p2.x * (p0.y + p1.y + 2.0 * p2.y));
  return t;
}

}  // namespace

double polygon_area(std::span<const Vec2> poly) {
  double a = 0;
  for (size_t k = 1; k + 1 < poly.size(); ++k)
    a += 0.5 * cross(poly[k] - poly[0], poly[k + 1] - poly[0]);
  return a;
}

Vec2 polygon_centroid(std::span<const Vec2> poly) {
  double a = 0;
  Vec2 c{0, 0};
  for (size_t k = 1; k + 1 < poly.size(); ++k) {
    const TriIntegrals t = tri_integrals(poly[0], poly[k], poly[k + 1]);
    a += t.area;
    c.x += t.x;
    c.y += t.y;
  }
  if (std::abs(a) < 1e-300) throw geometry_error("polygon with vanishing area");
  return {c.x / a, c.y / a};
}

CellMoments cell_moments(std::span<const Vec2> poly) {
  TriIntegrals sum{0, 0, 0, 0, 0, 0};
  for (size_t k = 1; k + 1 < poly.size(); ++k) {
    const TriIntegrals t = tri_integrals(poly[0], poly[k], poly[k + 1]);
    sum.area += t.area;
    sum.x += t.x;
    sum.y += t.y;
    sum.x2 += t.x2;
    sum.y2 += t.y2;
    sum.xy += t.xy;
  }
  if (std::abs(sum.area) < 1e-300) throw geometry_error("cell with vanishing area");
  const double inv = 1.0 / sum.area;
  return {sum.x * inv, sum.y * inv, sum.x2 * inv, sum.y2 * inv, sum.xy * inv};
}

CellMoments translate_moments(const CellMoments& m, Vec2 s) {
  CellMoments t;
  t.x = m.x + s.x;
  t.y = m.y + s.y;
  t.x2 = m.x2 + 2.0 * s.x * m.x + s.x * s.x;
  t.y2 = m.y2 + 2.0 * s.y * m.y + s.y * s.y;
  t.xy = m.xy + s.x * m.y + s.y * m.x + s.x * s.y;
  return t;
}

std::array<double, 5> basis_eval(const CellMoments& owner, double x, double y) {
  return {x - owner.x, y - owner.y, x * x - owner.x2, y * y - owner.y2, x * y - owner.xy};
}

std::array<double, 5> basis_cell_average(const CellMoments& owner, const CellMoments& target) {
  return {target.x - owner.x, target.y - owner.y, target.x2 - owner.x2, target.y2 - owner.y2,
          target.xy - owner.xy};
}

EdgeQuadrature edge_gauss(Vec2 a, Vec2 b) {
  const double len = norm(b - a);
  if (len < 1e-300) throw geometry_error("zero-length face");
  constexpr double s3 = std::numbers::sqrt3;
  const double cp = (3.0 + s3) / 6.0;
  const double cm = (3.0 - s3) / 6.0;
  EdgeQuadrature q;
  q.points[0] = cp * a + cm * b;
  q.points[1] = cp * b + cm * a;
  q.length = len;
  return q;
}

double cell_average_deg4(std::span<const Vec2> poly,
                         const std::function<double(double, double)>& f) {
  // Six-point degree-4 rule in barycentric coordinates.
  constexpr double w1 = 0.223381589678011;
  constexpr double a1 = 0.445948490915965;
  constexpr double w2 = 0.109951743655322;
  constexpr double a2 = 0.091576213509771;
  constexpr double bary[6][3] = {
      {a1, a1, 1 - 2 * a1}, {a1, 1 - 2 * a1, a1}, {1 - 2 * a1, a1, a1},
      {a2, a2, 1 - 2 * a2}, {a2, 1 - 2 * a2, a2}, {1 - 2 * a2, a2, a2},
  };
  constexpr double wts[6] = {w1, w1, w1, w2, w2, w2};

  double total_area = 0, total = 0;
  for (size_t k = 1; k + 1 < poly.size(); ++k) {
    const Vec2 p0 = poly[0], p1 = poly[k], p2 = poly[k + 1];
    const double a = 0.5 * cross(p1 - p0, p2 - p0);
    total_area += a;
    double s = 0;
    for (int q = 0; q < 6; ++q) {
      const double x = bary[q][0] * p0.x + bary[q][1] * p1.x + bary[q][2] * p2.x;
      const double y = bary[q][0] * p0.y + bary[q][1] * p1.y + bary[q][2] * p2.y;
      s += wts[q] * f(x, y);
    }
    total += a * s;
  }
  if (std::abs(total_area) < 1e-300) throw geometry_error("cell with vanishing area");
  return total / total_area;
}

}  // namespace uweno
