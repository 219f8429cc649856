#pragma once

#include <array>

#include "uweno/geom2d.hpp"

namespace uweno {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

inline constexpr double kGamma = 1.4;

/// Conserved state (rho, rho*u, rho*v, rho*E).
struct Conserved {
  double rho = 0, mx = 0, my = 0, e = 0;

  Vec4 vec() const { return {rho, mx, my, e}; }
  static Conserved from(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

struct Primitive {
  double rho = 0, u = 0, v = 0, p = 0;
};

Primitive cons_to_prim(const Conserved& w, double gamma = kGamma);
Conserved prim_to_cons(const Primitive& q, double gamma = kGamma);

/// True when density and pressure are strictly positive.
bool is_physical(const Vec4& w, double gamma = kGamma);

double sound_speed(const Primitive& q, double gamma = kGamma);

/// Analytic fluxes of the x/y directions.
Vec4 flux_x(const Conserved& w, double gamma = kGamma);
Vec4 flux_y(const Conserved& w, double gamma = kGamma);

/// Rotation into the frame whose x-axis is the unit normal n: momenta map to
/// (normal, tangential); density and energy are untouched.
Vec4 rotate_to_local(const Vec4& w, Vec2 n);
Vec4 rotate_back(const Vec4& w, Vec2 n);

/// HLLC flux in the local (face-normal) frame. Wavespeed estimates combine
/// one-sided speeds with Roe averages. Records the smallest intermediate
/// density/pressure seen when minima are supplied.
Vec4 hllc_flux(const Vec4& wl, const Vec4& wr, double gamma = kGamma,
               double* min_star_rho = nullptr, double* min_star_p = nullptr);

/// Roe-averaged eigensystem of the face-normal Jacobian, expressed in the
/// local frame (apply rotate_to_local first, rotate_back after).
struct EigenDecomp {
  Mat4 right;      // columns are right eigenvectors
  Mat4 left;       // right^-1
  Vec4 lambda;     // u-c, u, u, u+c of the Roe state
  bool roe_fallback = false;  // arithmetic average was used instead
};

EigenDecomp roe_eigen_local(const Vec4& wl_local, const Vec4& wr_local, double gamma = kGamma);

inline Vec4 mat_apply(const Mat4& m, const Vec4& v) {
  Vec4 r{};
  for (int i = 0; i < 4; ++i)
    r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] * v[3];
  return r;
}

/// Characteristic projection U = R^-1 W and its inverse.
inline Vec4 char_project(const EigenDecomp& d, const Vec4& w) { return mat_apply(d.left, w); }
inline Vec4 char_unproject(const EigenDecomp& d, const Vec4& u) { return mat_apply(d.right, u); }

}  // namespace uweno
