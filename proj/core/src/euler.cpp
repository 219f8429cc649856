#include "uweno/euler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uweno/errors.hpp"

namespace uweno {

Primitive cons_to_prim(const Conserved& w, double gamma) {
  if (!(w.rho > 0.0))
    throw unphysical_state_error("non-positive density " + std::to_string(w.rho));
  const double u = w.mx / w.rho;
  const double v = w.my / w.rho;
  const double p = (gamma - 1.0) * (w.e - 0.5 * w.rho * (u * u + v * v));
  if (!(p > 0.0)) throw unphysical_state_error("non-positive pressure " + std::to_string(p));
  return {w.rho, u, v, p};
}

Conserved prim_to_cons(const Primitive& q, double gamma) {
  if (!(q.rho > 0.0) || !(q.p > 0.0))
    throw unphysical_state_error("non-positive density or pressure");
  return {q.rho, q.rho * q.u, q.rho * q.v,
          0.5 * q.rho * (q.u * q.u + q.v * q.v) + q.p / (gamma - 1.0)};
}

bool is_physical(const Vec4& w, double gamma) {
  if (!(w[0] > 0.0) || !std::isfinite(w[0])) return false;
  const double p = (gamma - 1.0) * (w[3] - 0.5 * (w[1] * w[1] + w[2] * w[2]) / w[0]);
  return p > 0.0 && std::isfinite(p);
}

double sound_speed(const Primitive& q, double gamma) { return std::sqrt(gamma * q.p / q.rho); }

Vec4 flux_x(const Conserved& w, double gamma) {
  const Primitive q = cons_to_prim(w, gamma);
  return {w.mx, w.mx * q.u + q.p, w.my * q.u, (w.e + q.p) * q.u};
}

Vec4 flux_y(const Conserved& w, double gamma) {
  const Primitive q = cons_to_prim(w, gamma);
  return {w.my, w.mx * q.v, w.my * q.v + q.p, (w.e + q.p) * q.v};
}

Vec4 rotate_to_local(const Vec4& w, Vec2 n) {
  return {w[0], n.x * w[1] + n.y * w[2], -n.y * w[1] + n.x * w[2], w[3]};
}

Vec4 rotate_back(const Vec4& w, Vec2 n) {
  return {w[0], n.x * w[1] - n.y * w[2], n.y * w[1] + n.x * w[2], w[3]};
}

namespace {

struct Side {
  double rho, u, v, p, e, c;  // e = total energy per volume
};

Side side_of(const Vec4& w, double gamma) {
  if (!(w[0] > 0.0)) throw unphysical_state_error("HLLC input with non-positive density");
  Side s;
  s.rho = w[0];
  s.u = w[1] / w[0];
  s.v = w[2] / w[0];
  s.e = w[3];
  s.p = (gamma - 1.0) * (w[3] - 0.5 * s.rho * (s.u * s.u + s.v * s.v));
  if (!(s.p > 0.0)) throw unphysical_state_error("HLLC input with non-positive pressure");
  s.c = std::sqrt(gamma * s.p / s.rho);
  return s;
}

Vec4 physical_flux(const Side& s) {
  return {s.rho * s.u, s.rho * s.u * s.u + s.p, s.rho * s.u * s.v, (s.e + s.p) * s.u};
}

}  // namespace

Vec4 hllc_flux(const Vec4& wl, const Vec4& wr, double gamma, double* min_star_rho,
               double* min_star_p) {
  const Side l = side_of(wl, gamma);
  const Side r = side_of(wr, gamma);

  // Roe-average speed and sound speed for the wavespeed estimates.
  const double sl_ = std::sqrt(l.rho), sr_ = std::sqrt(r.rho);
  const double inv = 1.0 / (sl_ + sr_);
  const double u_hat = (sl_ * l.u + sr_ * r.u) * inv;
  const double v_hat = (sl_ * l.v + sr_ * r.v) * inv;
  const double hl = (l.e + l.p) / l.rho;
  const double hr = (r.e + r.p) / r.rho;
  const double h_hat = (sl_ * hl + sr_ * hr) * inv;
  const double c2 = (gamma - 1.0) * (h_hat - 0.5 * (u_hat * u_hat + v_hat * v_hat));
  const double c_hat = std::sqrt(std::max(c2, 1e-300));

  double s_l = std::min(l.u - l.c, u_hat - c_hat);
  double s_r = std::max(r.u + r.c, u_hat + c_hat);

  const double dl = l.rho * (s_l - l.u);
  const double dr = r.rho * (s_r - r.u);
  double s_m = (r.p - l.p + l.u * dl - r.u * dr) / (dl - dr);
  s_m = std::clamp(s_m, std::min(s_l, s_r), std::max(s_l, s_r));

  if (s_l >= 0.0) return physical_flux(l);
  if (s_r <= 0.0) return physical_flux(r);

  const auto star_flux = [&](const Side& s, double sk) {
    const double fac = s.rho * (sk - s.u) / (sk - s_m);
    const double p_star = s.p + s.rho * (sk - s.u) * (s_m - s.u);
    if (min_star_rho) *min_star_rho = std::min(*min_star_rho, fac);
    if (min_star_p) *min_star_p = std::min(*min_star_p, p_star);
    Vec4 ustar = {fac, fac * s_m, fac * s.v,
                  fac * (s.e / s.rho + (s_m - s.u) * (s_m + s.p / (s.rho * (sk - s.u))))};
    Vec4 f = physical_flux(s);
    Vec4 uk = {s.rho, s.rho * s.u, s.rho * s.v, s.e};
    for (int i = 0; i < 4; ++i) f[i] += sk * (ustar[i] - uk[i]);
    return f;
  };

  return s_m >= 0.0 ? star_flux(l, s_l) : star_flux(r, s_r);
}

EigenDecomp roe_eigen_local(const Vec4& wl, const Vec4& wr, double gamma) {
  const Side l = side_of(wl, gamma);
  const Side r = side_of(wr, gamma);

  double u, v, h;
  bool fallback = false;
  {
    const double sl_ = std::sqrt(l.rho), sr_ = std::sqrt(r.rho);
    const double inv = 1.0 / (sl_ + sr_);
    u = (sl_ * l.u + sr_ * r.u) * inv;
    v = (sl_ * l.v + sr_ * r.v) * inv;
    h = (sl_ * (l.e + l.p) / l.rho + sr_ * (r.e + r.p) / r.rho) * inv;
  }
  double c2 = (gamma - 1.0) * (h - 0.5 * (u * u + v * v));
  if (!(c2 > 0.0)) {
    u = 0.5 * (l.u + r.u);
    v = 0.5 * (l.v + r.v);
    h = 0.5 * ((l.e + l.p) / l.rho + (r.e + r.p) / r.rho);
    c2 = (gamma - 1.0) * (h - 0.5 * (u * u + v * v));
    fallback = true;
    if (!(c2 > 0.0)) throw unphysical_state_error("Roe average has imaginary sound speed");
  }
  const double c = std::sqrt(c2);
  const double q2 = 0.5 * (u * u + v * v);
  const double b2 = (gamma - 1.0) / c2;
  const double b1 = b2 * q2;

  EigenDecomp d;
  d.lambda = {u - c, u, u, u + c};
  d.right = {{{1, 1, 0, 1},
              {u - c, u, 0, u + c},
              {v, v, 1, v},
              {h - u * c, q2, v, h + u * c}}};
  d.left = {{{0.5 * (b1 + u / c), 0.5 * (-b2 * u - 1.0 / c), 0.5 * (-b2 * v), 0.5 * b2},
             {1.0 - b1, b2 * u, b2 * v, -b2},
             {-v, 0, 1, 0},
             {0.5 * (b1 - u / c), 0.5 * (-b2 * u + 1.0 / c), 0.5 * (-b2 * v), 0.5 * b2}}};
  d.roe_fallback = fallback;
  return d;
}

}  // namespace uweno
