#include "uweno/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "uweno/errors.hpp"
#include "uweno/geometry.hpp"
#include "uweno/parallel.hpp"

namespace uweno {

void tvd_rk3_step(
    std::vector<Vec4>& w, double t, double dt,
    const std::function<std::vector<Vec4>(const std::vector<Vec4>&, double)>& stage_rhs) {
  const size_t n = w.size();
  const std::vector<Vec4> l0 = stage_rhs(w, t);
  std::vector<Vec4> w1(n);
  for (size_t i = 0; i < n; ++i)
    for (int c = 0; c < 4; ++c) w1[i][c] = w[i][c] + dt * l0[i][c];

  const std::vector<Vec4> l1 = stage_rhs(w1, t + dt);
  std::vector<Vec4> w2(n);
  for (size_t i = 0; i < n; ++i)
    for (int c = 0; c < 4; ++c)
      w2[i][c] = 0.75 * w[i][c] + 0.25 * w1[i][c] + 0.25 * dt * l1[i][c];

  const std::vector<Vec4> l2 = stage_rhs(w2, t + 0.5 * dt);
  for (size_t i = 0; i < n; ++i)
    for (int c = 0; c < 4; ++c)
      w[i][c] = w[i][c] / 3.0 + 2.0 / 3.0 * w2[i][c] + 2.0 / 3.0 * dt * l2[i][c];
}

EulerSolver::EulerSolver(const Mesh& mesh, const ReconstructionTables& tables, SolverOptions opt)
    : mesh_(mesh), tables_(tables), opt_(opt), w_(mesh.n_cells()) {
  bc_by_tag_.resize(mesh.tags.size());
}

void EulerSolver::set_bc(const std::string& tag, const BoundaryCondition& bc) {
  const int id = mesh_.tag_id(tag);
  if (id < 0) throw std::invalid_argument("unknown boundary tag '" + tag + "'");
  bc_by_tag_[id] = bc;
}

void EulerSolver::initialize(const std::function<Primitive(double, double)>& ic) {
  const double gamma = opt_.gamma;
  parallel_for(mesh_.n_cells(), opt_.threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const Cell& c = mesh_.cells[i];
      std::array<Vec2, 4> poly{};
      for (int k = 0; k < c.n_nodes(); ++k)
        poly[k] = {mesh_.nodes[c.nodes[k]].x, mesh_.nodes[c.nodes[k]].y};
      const std::span<const Vec2> p(poly.data(), c.n_nodes());
      for (int comp = 0; comp < 4; ++comp) {
        w_[i][comp] = cell_average_deg4(p, [&](double x, double y) {
          return prim_to_cons(ic(x, y), gamma).vec()[comp];
        });
      }
    }
  });
  t_ = 0;
  metrics_ = RunMetrics{};
}

namespace {

struct FaceWork {
  Vec4 flux_integral{};  // |l| * sum_k w_k * F_k, oriented out of the left cell
};

struct ThreadStats {
  long point_evals = 0;
  long fallbacks = 0;
  long roe_fallbacks = 0;
  double min_rho = 1e300, min_p = 1e300;
  double min_star_rho = 1e300, min_star_p = 1e300;
};

// Reconstructed local-frame states of one cell at both Gauss points of a
// face. values layout: slot-major, 4 fields each.
struct SideRecon {
  Vec4 state[2];
};

}  // namespace

std::vector<Vec4> EulerSolver::residual(const std::vector<Vec4>& w, double stage_time) {
  const double gamma = opt_.gamma;
  const bool characteristic = opt_.characteristic;
  const int n_faces = mesh_.n_faces();
  const int n_cells = mesh_.n_cells();

  std::vector<FaceWork> face(n_faces);
  const int nt = resolve_threads(opt_.threads);
  std::vector<ThreadStats> stats(nt);

  auto face_pass = [&](int lo, int hi, ThreadStats& st) {
    std::vector<double> values((kMaxStencil + 1) * 4);
    for (int fi = lo; fi < hi; ++fi) {
      const Face& f = mesh_.faces[fi];
      const Vec2 n = f.normal;
      const Vec4 wl_avg = w[f.left];
      const Vec4 wr_avg = f.is_boundary() ? wl_avg : w[f.right];

      // One Roe eigensystem per face, from the adjacent cell averages.
      EigenDecomp eig;
      if (characteristic) {
        eig = roe_eigen_local(rotate_to_local(wl_avg, n), rotate_to_local(wr_avg, n), gamma);
        if (eig.roe_fallback) ++st.roe_fallbacks;
      }

      auto reconstruct_side = [&](int cell, int local_face) {
        const Stencil& stn = tables_.cells[cell].stencil;
        for (int s = 0; s <= stn.m; ++s) {
          const Vec4& ws = s == 0 ? w[cell] : w[stn.id[s - 1]];
          Vec4 q = characteristic ? char_project(eig, rotate_to_local(ws, n)) : ws;
          for (int c = 0; c < 4; ++c) values[s * 4 + c] = q[c];
        }
        double out[8];
        reconstruct_face<4>(tables_, cell, local_face, values.data(), out);
        SideRecon r;
        for (int k = 0; k < 2; ++k) {
          Vec4 q = {out[k * 4 + 0], out[k * 4 + 1], out[k * 4 + 2], out[k * 4 + 3]};
          r.state[k] = characteristic ? char_unproject(eig, q) : rotate_to_local(q, n);
        }
        st.point_evals += 2;
        // positivity fallback: replace this cell's values by its average
        if (!is_physical(r.state[0], gamma) || !is_physical(r.state[1], gamma)) {
          const Vec4 avg = rotate_to_local(w[cell], n);
          r.state[0] = avg;
          r.state[1] = avg;
          st.fallbacks += 2;
        }
        for (int k = 0; k < 2; ++k) {
          st.min_rho = std::min(st.min_rho, r.state[k][0]);
          const double p =
              (gamma - 1.0) * (r.state[k][3] - 0.5 * (r.state[k][1] * r.state[k][1] +
                                                      r.state[k][2] * r.state[k][2]) /
                                                   r.state[k][0]);
          st.min_p = std::min(st.min_p, p);
        }
        return r;
      };

      const SideRecon left = reconstruct_side(f.left, f.left_local);
      SideRecon right;
      if (!f.is_boundary()) {
        right = reconstruct_side(f.right, f.right_local);
      } else {
        const BoundaryCondition& bc =
            f.tag >= 0 ? bc_by_tag_[f.tag]
                       : throw topology_error("boundary face without a tag in the residual");
        const Vec2 pa{mesh_.nodes[f.nodes[0]].x, mesh_.nodes[f.nodes[0]].y};
        const Vec2 pb{mesh_.nodes[f.nodes[1]].x, mesh_.nodes[f.nodes[1]].y};
        const EdgeQuadrature q = edge_gauss(pa, pb);
        for (int k = 0; k < 2; ++k) {
          const Vec4& in = left.state[k];
          switch (bc.kind) {
            case BcKind::outflow:
              right.state[k] = in;
              break;
            case BcKind::reflective:
              right.state[k] = {in[0], -in[1], in[2], in[3]};
              break;
            case BcKind::prescribed:
              right.state[k] = rotate_to_local(prim_to_cons(bc.state, gamma).vec(), n);
              break;
            case BcKind::dmr_top: {
              const bool post = q.points[k].x < bc.shock.front_x(q.points[k].y, stage_time);
              right.state[k] =
                  rotate_to_local(prim_to_cons(post ? bc.shock.post : bc.shock.pre, gamma).vec(),
                                  n);
              break;
            }
            case BcKind::dmr_bottom: {
              if (f.midpoint.x < bc.wall_start_x)
                right.state[k] =
                    rotate_to_local(prim_to_cons(bc.shock.post, gamma).vec(), n);
              else
                right.state[k] = {in[0], -in[1], in[2], in[3]};
              break;
            }
          }
        }
      }

      Vec4 acc{};
      for (int k = 0; k < 2; ++k) {
        const Vec4 fl = hllc_flux(left.state[k], right.state[k], gamma, &st.min_star_rho,
                                  &st.min_star_p);
        for (int c = 0; c < 4; ++c) acc[c] += 0.5 * fl[c];
      }
      const Vec4 global = rotate_back(acc, n);
      for (int c = 0; c < 4; ++c) face[fi].flux_integral[c] = f.length * global[c];
    }
  };

  if (nt <= 1 || n_faces < 2) {
    face_pass(0, n_faces, stats[0]);
  } else {
    parallel_for(n_faces, nt, [&](int lo, int hi) {
      const long t = (static_cast<long>(lo) * nt) / std::max(n_faces, 1);
      face_pass(lo, hi, stats[std::min<long>(t, nt - 1)]);
    });
  }

  for (const ThreadStats& st : stats) {
    metrics_.point_evals += st.point_evals;
    metrics_.fallback_activations += st.fallbacks;
    metrics_.roe_fallbacks += st.roe_fallbacks;
    metrics_.min_density = std::min(metrics_.min_density, st.min_rho);
    metrics_.min_pressure = std::min(metrics_.min_pressure, st.min_p);
    metrics_.min_star_density = std::min(metrics_.min_star_density, st.min_star_rho);
    metrics_.min_star_pressure = std::min(metrics_.min_star_pressure, st.min_star_p);
  }
  ++metrics_.residual_evals;

  // Deterministic per-cell gather over each cell's ordered face list.
  std::vector<Vec4> rhs(n_cells);
  parallel_for(n_cells, opt_.threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      Vec4 acc{};
      for (int fid : mesh_.faces_of(i)) {
        const Face& f = mesh_.faces[fid];
        const double s = f.left == i ? 1.0 : -1.0;
        for (int c = 0; c < 4; ++c) acc[c] += s * face[fid].flux_integral[c];
      }
      const double inv = -1.0 / mesh_.cells[i].area;
      for (int c = 0; c < 4; ++c) rhs[i][c] = inv * acc[c];
    }
  });
  return rhs;
}

void EulerSolver::check_physical(const std::vector<Vec4>& w, int stage) const {
  for (int i = 0; i < mesh_.n_cells(); ++i) {
    if (!is_physical(w[i], opt_.gamma))
      throw unphysical_state_error("cell " + std::to_string(i) + " became unphysical at t=" +
                                   std::to_string(t_) + " in RK stage " + std::to_string(stage));
  }
}

void EulerSolver::rk3_step(double dt) {
  int stage = 0;
  double last_bflux[3][4];
  auto rhs = [&](const std::vector<Vec4>& w, double st) {
    std::vector<Vec4> l = residual(w, st);
    // net boundary-flux rate of this stage for the conservation audit:
    // sum_i |O_i| L_i telescopes over interior faces, leaving the boundary term
    Vec4 b{};
    for (int i = 0; i < mesh_.n_cells(); ++i)
      for (int c = 0; c < 4; ++c) b[c] += mesh_.cells[i].area * l[i][c];
    for (int c = 0; c < 4; ++c) last_bflux[stage][c] = b[c];
    ++stage;
    return l;
  };
  tvd_rk3_step(w_, t_, dt, rhs);
  check_physical(w_, stage);
  // effective TVD-RK3 stage weights of the combined update
  for (int c = 0; c < 4; ++c)
    metrics_.boundary_flux_integral[c] +=
        dt * (last_bflux[0][c] / 6.0 + last_bflux[1][c] / 6.0 + 2.0 / 3.0 * last_bflux[2][c]);
  t_ += dt;
  ++metrics_.steps;
}

double EulerSolver::compute_dt(const TimeControls& tc) const {
  double dt;
  if (tc.mode == TimeControls::Mode::fixed_dt) {
    if (mesh_.nominal_h <= 0)
      throw std::invalid_argument("fixed-dt mode requires a generated mesh with a nominal h");
    dt = tc.coefficient * mesh_.nominal_h;
  } else {
    double min_ratio = 1e300;
    for (int i = 0; i < mesh_.n_cells(); ++i) {
      const Primitive q = cons_to_prim(Conserved::from(w_[i]), opt_.gamma);
      const double c = sound_speed(q, opt_.gamma);
      double s = 0;
      for (int fid : mesh_.faces_of(i)) {
        const Face& f = mesh_.faces[fid];
        s = std::max(s, std::abs(q.u * f.normal.x + q.v * f.normal.y) + c);
      }
      double perim = 0;
      for (int fid : mesh_.faces_of(i)) perim += mesh_.faces[fid].length;
      min_ratio = std::min(min_ratio, mesh_.cells[i].area / perim / s);
    }
    dt = tc.coefficient * min_ratio;
  }
  return std::min(dt, tc.t_end - t_);
}

const RunMetrics& EulerSolver::run(const TimeControls& tc,
                                   const std::function<void(const EulerSolver&)>& on_step) {
  const auto t0 = std::chrono::steady_clock::now();
  const double eps = 1e-12 * std::max(1.0, std::abs(tc.t_end));
  while (t_ < tc.t_end - eps) {
    const double dt = compute_dt(tc);
    if (!(dt > 0)) break;
    rk3_step(dt);
    if (on_step) on_step(*this);
  }
  metrics_.wall_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return metrics_;
}

}  // namespace uweno
