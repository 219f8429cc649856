#include "uweno/weno.hpp"

#include <cmath>
#include <string>

#include "uweno/errors.hpp"
#include "uweno/parallel.hpp"

namespace uweno {

namespace {

CellMoments moments_of(const Mesh& mesh, int cell) {
  const Cell& c = mesh.cells[cell];
  std::array<Vec2, 4> poly{};
  for (int k = 0; k < c.n_nodes(); ++k)
    poly[k] = {mesh.nodes[c.nodes[k]].x, mesh.nodes[c.nodes[k]].y};
  return cell_moments(std::span<const Vec2>(poly.data(), c.n_nodes()));
}

StencilGeometry make_geometry(const Mesh& mesh, int cell, StencilPolicy policy,
                              std::span<const CellMoments> cache) {
  StencilGeometry geo;
  geo.st = select_stencil(mesh, cell, policy);
  geo.area = mesh.cells[cell].area;
  geo.owner = cache.empty() ? moments_of(mesh, cell) : cache[cell];
  for (int j = 1; j <= geo.st.m; ++j) {
    const int id = geo.st.slot_id(j);
    const CellMoments m = cache.empty() ? moments_of(mesh, id) : cache[id];
    geo.member[j - 1] = translate_moments(m, geo.st.slot_shift(j));
  }
  return geo;
}

constexpr std::array<std::array<int8_t, 3>, 12> kQuadCandidates = {{
    {0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},   // face-neighbor pairs
    {0, 1, 5}, {0, 1, 6}, {0, 3, 7}, {0, 3, 8},   // children of i1, i3
    {0, 4, 9}, {0, 2, 10}, {0, 2, 11}, {0, 4, 12}  // children of i4, i2
}};

constexpr std::array<std::array<int8_t, 3>, 9> kTriCandidates = {{
    {0, 1, 2}, {0, 2, 3}, {0, 3, 1},
    {0, 1, 4}, {0, 2, 5}, {0, 3, 6},
    {0, 3, 7}, {0, 1, 8}, {0, 2, 9},
}};

}  // namespace

StencilGeometry stencil_geometry(const Mesh& mesh, int cell, StencilPolicy policy) {
  return make_geometry(mesh, cell, policy, {});
}

DenseMatrix constraint_matrix(const StencilGeometry& geo) {
  const int m = geo.st.m;
  DenseMatrix a(m, 5);
  for (int j = 1; j <= m; ++j) {
    if (!geo.st.slot_exists(j)) continue;  // E_j = 0 zeroes the row
    const std::array<double, 5> row = basis_cell_average(geo.owner, geo.member[j - 1]);
    for (int k = 0; k < 5; ++k) a(j - 1, k) = row[k];
  }
  return a;
}

DenseMatrix fit_quadratic(const StencilGeometry& geo, std::span<const double> d, double zeta) {
  return ridge_solve_operator(constraint_matrix(geo), d, zeta);
}

std::vector<double> compute_eta(const StencilGeometry& geo, const DenseMatrix& fit_op,
                                Vec2 point) {
  const int m = geo.st.m;
  const std::array<double, 5> phi = basis_eval(geo.owner, point.x, point.y);
  std::vector<double> eta(m + 1, 0.0);
  double sum = 0.0;
  for (int j = 1; j <= m; ++j) {
    double e = 0.0;
    for (int k = 0; k < 5; ++k) e += phi[k] * fit_op(k, j - 1);
    eta[j] = e;
    sum += e;
  }
  eta[0] = 1.0 - sum;
  return eta;
}

std::span<const std::array<int8_t, 3>> candidate_slots(int m) {
  if (m == 12) return kQuadCandidates;
  if (m == 9) return kTriCandidates;
  throw std::invalid_argument("candidate_slots: m must be 9 or 12");
}

std::array<CandidateFit, kMaxStencil> build_candidates(const StencilGeometry& geo, double zeta) {
  const auto slots = candidate_slots(geo.st.m);
  std::array<CandidateFit, kMaxStencil> out{};
  for (size_t j = 0; j < slots.size(); ++j) {
    CandidateFit& c = out[j];
    c.slots = slots[j];
    for (int k = 0; k < 3; ++k) {
      const int s = c.slots[k];
      c.rows[k] = s == 0 ? int8_t{0} : int8_t(geo.st.slot_canon(s));
    }
    // 2-row constraint system on the two non-owner members; the owner row of
    // the conservation constraints is satisfied identically by the zero-mean
    // basis.
    DenseMatrix a(2, 2);
    for (int k = 1; k < 3; ++k) {
      const int s = c.slots[k];
      const std::array<double, 5> row = basis_cell_average(geo.owner, geo.member[s - 1]);
      a(k - 1, 0) = row[0];
      a(k - 1, 1) = row[1];
    }
    const DenseMatrix op = ridge_solve_operator(a, {}, zeta);
    c.op = {op(0, 0), op(0, 1), op(1, 0), op(1, 1)};
    c.gx = {-(c.op[0] + c.op[1]), c.op[0], c.op[1]};
    c.gy = {-(c.op[2] + c.op[3]), c.op[2], c.op[3]};
  }
  return out;
}

std::array<double, 3> candidate_point_row(const CandidateFit& c, const CellMoments& owner,
                                          Vec2 point) {
  const double p1 = point.x - owner.x;
  const double p2 = point.y - owner.y;
  const double b1 = p1 * c.op[0] + p2 * c.op[2];
  const double b2 = p1 * c.op[1] + p2 * c.op[3];
  return {1.0 - b1 - b2, b1, b2};
}

DenseMatrix assemble_linear_weight_matrix(const StencilGeometry& geo,
                                          std::span<const CandidateFit> cands, Vec2 point) {
  const int m = geo.st.m;
  DenseMatrix b(m + 1, m);
  for (int j = 0; j < m; ++j) {
    const std::array<double, 3> row = candidate_point_row(cands[j], geo.owner, point);
    for (int k = 0; k < 3; ++k) b(cands[j].rows[k], j) += row[k];
  }
  return b;
}

std::vector<double> solve_linear_weights(const DenseMatrix& b, std::span<const double> eta,
                                         double zeta, double* sum_err) {
  std::vector<double> gamma = ridge_solve(b, eta, zeta);
  double sum = 0.0;
  for (double g : gamma) sum += g;
  if (std::abs(sum) < 1e-8)
    throw degenerate_weights_error("linear weights sum collapsed to " + std::to_string(sum));
  if (sum_err) *sum_err = std::abs(sum - 1.0);
  for (double& g : gamma) g /= sum;
  return gamma;
}

std::vector<double> optimize_d_weights(const Stencil& st, std::span<const double> gamma) {
  std::vector<double> d(st.m, 1.0);
  if (st.m == 12) {
    for (int j = 4; j < 12; ++j) d[j] = 1.0 / std::max(1.0, std::abs(gamma[j]));
  } else {
    constexpr int pair[9] = {-1, -1, -1, 7, 8, 6, 5, 3, 4};  // (4,8) (5,9) (6,7), 0-based
    for (int j = 3; j < 9; ++j)
      d[j] = 1.0 / std::max({1.0, std::abs(gamma[j]), std::abs(gamma[pair[j]])});
  }
  return d;
}

SplitWeights split_weights(std::span<const double> gamma, double theta) {
  SplitWeights s;
  const int m = static_cast<int>(gamma.size());
  std::array<double, kMaxStencil> tp{}, tm{};
  for (int j = 0; j < m; ++j) {
    tp[j] = 0.5 * (gamma[j] + theta * std::abs(gamma[j]));
    tm[j] = tp[j] - gamma[j];
    s.sigma_plus += tp[j];
    s.sigma_minus += tm[j];
  }
  for (int j = 0; j < m; ++j) {
    s.plus[j] = tp[j] / s.sigma_plus;
    s.minus[j] = tm[j] / s.sigma_minus;
  }
  return s;
}

double beta_tilde(double beta, double gamma_pm) {
  const double gb = gamma_pm * beta;
  return beta * (1.0 + gb + gb * gb);
}

std::vector<double> nonlinear_weights(std::span<const double> gamma_pm,
                                      std::span<const double> beta_t, double epsilon) {
  std::vector<double> delta(gamma_pm.size());
  double sum = 0.0;
  for (size_t j = 0; j < gamma_pm.size(); ++j) {
    const double a = gamma_pm[j] / ((beta_t[j] + epsilon) * (beta_t[j] + epsilon));
    delta[j] = a;
    sum += a;
  }
  for (double& a : delta) a /= sum;
  return delta;
}

ReconstructionTables precompute_tables(const Mesh& mesh, const WenoParams& params,
                                       int n_threads) {
  ReconstructionTables rt;
  rt.params = params;
  const int n = mesh.n_cells();
  rt.cells.resize(n);

  int total_gp = 0;
  for (int i = 0; i < n; ++i) {
    rt.cells[i].gp_offset = total_gp;
    total_gp += 2 * mesh.cells[i].n_nodes();
  }
  rt.gp.resize(total_gp);

  std::vector<CellMoments> cache(n);
  parallel_for(n, n_threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) cache[i] = moments_of(mesh, i);
  });

  parallel_for(n, n_threads, [&](int lo, int hi) {
    for (int cell = lo; cell < hi; ++cell) {
      const StencilGeometry geo = make_geometry(mesh, cell, StencilPolicy::degrade, cache);
      CellTables& ct = rt.cells[cell];
      ct.stencil = geo.st;
      ct.area = geo.area;
      ct.n_cand = static_cast<int8_t>(geo.st.m);
      ct.cand = build_candidates(geo, params.zeta);

      const DenseMatrix a = constraint_matrix(geo);
      const DenseMatrix fit0 = ridge_solve_operator(a, {}, params.zeta);

      const auto faces = mesh.faces_of(cell);
      for (size_t lf = 0; lf < faces.size(); ++lf) {
        const Face& f = mesh.faces[faces[lf]];
        const Vec2 pa{mesh.nodes[f.nodes[0]].x, mesh.nodes[f.nodes[0]].y};
        const Vec2 pb{mesh.nodes[f.nodes[1]].x, mesh.nodes[f.nodes[1]].y};
        const EdgeQuadrature q = edge_gauss(pa, pb);
        for (int k = 0; k < 2; ++k) {
          Vec2 xg = q.points[k];
          if (f.right == cell && f.periodic) xg = xg - f.shift;  // into the owner frame
          GaussPointTable& g = rt.gp[ct.gp_offset + 2 * lf + k];
          try {
            const std::vector<double> eta = compute_eta(geo, fit0, xg);
            const DenseMatrix b = assemble_linear_weight_matrix(
                geo, std::span<const CandidateFit>(ct.cand.data(), geo.st.m), xg);
            double err_raw = 0, err_opt = 0;
            const std::vector<double> gamma_raw =
                solve_linear_weights(b, eta, params.zeta, &err_raw);

            const std::vector<double> d = optimize_d_weights(geo.st, gamma_raw);
            const DenseMatrix fit1 = ridge_solve_operator(a, d, params.zeta);
            const std::vector<double> eta1 = compute_eta(geo, fit1, xg);
            const std::vector<double> gamma_opt =
                solve_linear_weights(b, eta1, params.zeta, &err_opt);

            const SplitWeights sw = split_weights(gamma_opt, params.theta);
            for (int j = 0; j < geo.st.m; ++j) {
              g.b[j] = candidate_point_row(ct.cand[j], geo.owner, xg);
              g.gamma[j] = gamma_opt[j];
              g.gamma_plus[j] = sw.plus[j];
              g.gamma_minus[j] = sw.minus[j];
              g.max_gamma_raw = std::max(g.max_gamma_raw, float(std::abs(gamma_raw[j])));
              g.max_gamma_opt = std::max(g.max_gamma_opt, float(std::abs(gamma_opt[j])));
              if (gamma_opt[j] < 0.0) ++g.n_negative;
            }
            g.sigma_plus = sw.sigma_plus;
            g.sigma_minus = sw.sigma_minus;
            g.gamma_sum_err = float(std::max(err_raw, err_opt));
          } catch (const degenerate_weights_error& e) {
            throw degenerate_weights_error("cell " + std::to_string(cell) + " face " +
                                           std::to_string(lf) + " gauss point " +
                                           std::to_string(k) + ": " + e.what());
          }
        }
      }
    }
  });

  return rt;
}

std::array<double, 2> reconstruct_scalar(const ReconstructionTables& rt, int cell, int local_face,
                                         std::span<const double> slot_values) {
  std::array<double, 2> out{};
  reconstruct_face<1>(rt, cell, local_face, slot_values.data(), out.data());
  return out;
}

std::array<double, 2> reconstruct_scalar_linear(const ReconstructionTables& rt, int cell,
                                                int local_face,
                                                std::span<const double> slot_values) {
  std::array<double, 2> out{};
  reconstruct_face_linear<1>(rt, cell, local_face, slot_values.data(), out.data());
  return out;
}

std::vector<double> gather_slot_values(const Stencil& st, std::span<const double> field) {
  std::vector<double> v(st.m + 1);
  v[0] = field[st.owner];
  for (int j = 1; j <= st.m; ++j) v[j] = field[st.slot_id(j)];
  return v;
}

}  // namespace uweno
