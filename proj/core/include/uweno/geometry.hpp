#pragma once

#include <array>
#include <functional>
#include <span>

#include "uweno/geom2d.hpp"

namespace uweno {

/// Cell-averaged monomials up to degree 2. These are the integrals subtracted
/// in the zero-mean reconstruction basis, so the basis functions of a cell
/// average to zero over that cell by construction.
struct CellMoments {
  double x = 0, y = 0, x2 = 0, y2 = 0, xy = 0;
};

/// Exact monomial averages over a simple polygon (3 or 4 CCW vertices),
/// via signed fan triangulation from the first vertex and closed-form
/// triangle integrals. Raises geometry_error for vanishing area.
CellMoments cell_moments(std::span<const Vec2> poly);

/// Signed polygon area (positive for CCW).
double polygon_area(std::span<const Vec2> poly);
Vec2 polygon_centroid(std::span<const Vec2> poly);

/// Moments of the same polygon translated by s.
CellMoments translate_moments(const CellMoments& m, Vec2 s);

/// Zero-mean basis (p1..p5) of the owner cell evaluated at a point:
/// (x - mx, y - my, x^2 - mx2, y^2 - my2, xy - mxy).
std::array<double, 5> basis_eval(const CellMoments& owner, double x, double y);

/// Exact average of the owner's basis over a target cell; reduces to plain
/// differences of monomial averages. Identically zero for target == owner.
std::array<double, 5> basis_cell_average(const CellMoments& owner, const CellMoments& target);

/// Two-point Gauss rule on a segment, weights 1/2 each. The points are
/// (3+sqrt3)/6 * A + (3-sqrt3)/6 * B and the mirror; exact through cubics.
struct EdgeQuadrature {
  std::array<Vec2, 2> points;
  double weight = 0.5;
  double length = 0;
};
EdgeQuadrature edge_gauss(Vec2 a, Vec2 b);

/// Average of f over a simple polygon by a degree-4 (six point) rule on the
/// signed fan triangulation. Used for initial-condition cell averages and
/// exact-solution error norms.
double cell_average_deg4(std::span<const Vec2> poly, const std::function<double(double, double)>& f);

}  // namespace uweno
