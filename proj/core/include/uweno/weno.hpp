#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "uweno/geometry.hpp"
#include "uweno/mesh.hpp"
#include "uweno/smalldense.hpp"

namespace uweno {

struct WenoParams {
  double zeta = 1e-14;    // ridge regularization of every least-squares solve
  double epsilon = 1e-6;  // floor in the nonlinear weights
  double theta = 3.0;     // splitting parameter for negative weights
};

/// Geometry of one cell's stencil: the owner's monomial averages and those of
/// every stencil member, translated into the owner's frame across periodic
/// seams.
struct StencilGeometry {
  Stencil st;
  double area = 0;
  CellMoments owner;
  std::array<CellMoments, kMaxStencil> member{};
};

StencilGeometry stencil_geometry(const Mesh& mesh, int cell,
                                 StencilPolicy policy = StencilPolicy::degrade);

/// Constraint rows of the quadratic fit: row j is E_j times the average of the
/// owner's basis over member j (m x 5).
DenseMatrix constraint_matrix(const StencilGeometry& geo);

/// The 5 x m operator mapping cell-average differences (W_ij - W_i0) to the
/// quadratic coefficients a_1..a_5, for the given row weights d (empty = 1).
DenseMatrix fit_quadratic(const StencilGeometry& geo, std::span<const double> d, double zeta);

/// Coefficients of P^2 at a point as a combination of the m+1 stencil
/// averages (index 0 = owner); zero on masked slots.
std::vector<double> compute_eta(const StencilGeometry& geo, const DenseMatrix& fit_op,
                                Vec2 point);

/// One candidate linear polynomial: a 2x2 fit operator on the two non-owner
/// members, plus the induced gradient rows used by the smoothness indicator.
struct CandidateFit {
  std::array<double, 4> op{};           // row-major 2x2: a = op * (W_m1-W_0, W_m2-W_0)
  std::array<double, 3> gx{}, gy{};     // d/dx, d/dy as rows over (W_0, W_m1, W_m2)
  std::array<int8_t, 3> slots{};        // data slots (0 = owner)
  std::array<int8_t, 3> rows{};         // canonical rows for the linear-weight system
};

/// Sub-stencil member slots per candidate (paper ordering), m = 12 or 9.
std::span<const std::array<int8_t, 3>> candidate_slots(int m);

std::array<CandidateFit, kMaxStencil> build_candidates(const StencilGeometry& geo, double zeta);

/// Point-value row of one candidate at a point: (b0, b1, b2) over
/// (W_0, W_m1, W_m2) with b0 = 1 - b1 - b2.
std::array<double, 3> candidate_point_row(const CandidateFit& c, const CellMoments& owner,
                                          Vec2 point);

/// The (m+1) x m system matrix matching candidate combinations against eta,
/// with coefficients routed to canonical rows where slots were replaced.
DenseMatrix assemble_linear_weight_matrix(const StencilGeometry& geo,
                                          std::span<const CandidateFit> cands, Vec2 point);

/// Ridge-solve B*gamma = eta and normalize the sum to one. |sum| below 1e-8
/// raises degenerate_weights_error; the pre-normalization defect |sum-1| is
/// reported through sum_err when given.
std::vector<double> solve_linear_weights(const DenseMatrix& b, std::span<const double> eta,
                                         double zeta, double* sum_err = nullptr);

/// Row weights of the optimization pass: 1 on face-neighbor rows, damped by
/// the magnitude of the raw linear weights on the outer rows (pairwise for
/// triangles).
std::vector<double> optimize_d_weights(const Stencil& st, std::span<const double> gamma);

struct SplitWeights {
  std::array<double, kMaxStencil> plus{}, minus{};
  double sigma_plus = 0, sigma_minus = 0;
};

/// theta-splitting of signed weights into two nonnegative scaled groups with
/// sigma_plus - sigma_minus = 1.
SplitWeights split_weights(std::span<const double> gamma, double theta);

double beta_tilde(double beta, double gamma_pm);

/// delta_j = (gamma_j / (beta_tilde_j + eps)^2) / sum; gamma and beta_t are
/// one split group.
std::vector<double> nonlinear_weights(std::span<const double> gamma_pm,
                                      std::span<const double> beta_t, double epsilon);

// ---------------------------------------------------------------------------
// Precomputed tables: everything geometry-dependent, per cell per face Gauss
// point, so a residual evaluation reduces to small dense dot products.
// ---------------------------------------------------------------------------

struct GaussPointTable {
  std::array<std::array<double, 3>, kMaxStencil> b{};  // candidate point-value rows
  std::array<double, kMaxStencil> gamma{};             // optimized linear weights
  std::array<double, kMaxStencil> gamma_plus{}, gamma_minus{};
  double sigma_plus = 0, sigma_minus = 0;
  float max_gamma_raw = 0, max_gamma_opt = 0, gamma_sum_err = 0;
  uint16_t n_negative = 0;
};

struct CellTables {
  Stencil stencil;
  double area = 0;
  int32_t gp_offset = 0;
  int8_t n_cand = 0;
  std::array<CandidateFit, kMaxStencil> cand{};
};

struct ReconstructionTables {
  WenoParams params;
  std::vector<CellTables> cells;
  std::vector<GaussPointTable> gp;

  const GaussPointTable& at(int cell, int local_face, int k) const {
    return gp[cells[cell].gp_offset + 2 * local_face + k];
  }
};

/// Build tables for every cell and every face Gauss point. Deterministic and
/// parallel over cells. n_threads = 0 uses all hardware threads.
ReconstructionTables precompute_tables(const Mesh& mesh, const WenoParams& params = {},
                                       int n_threads = 0);

// ---------------------------------------------------------------------------
// Reconstruction at solve time. `values` holds the m+1 slot values per field,
// field-contiguous: values[slot * NF + f]. Both Gauss points of the face are
// produced at once; out[k*NF + f].
// ---------------------------------------------------------------------------

template <int NF>
void reconstruct_face(const ReconstructionTables& rt, int cell, int local_face,
                      const double* values, double* out) {
  const CellTables& ct = rt.cells[cell];
  const int nc = ct.n_cand;
  const double eps = rt.params.epsilon;

  double beta[kMaxStencil][NF];
  for (int j = 0; j < nc; ++j) {
    const CandidateFit& c = ct.cand[j];
    const double* v0 = values + c.slots[0] * NF;
    const double* v1 = values + c.slots[1] * NF;
    const double* v2 = values + c.slots[2] * NF;
    for (int f = 0; f < NF; ++f) {
      const double px = c.gx[0] * v0[f] + c.gx[1] * v1[f] + c.gx[2] * v2[f];
      const double py = c.gy[0] * v0[f] + c.gy[1] * v1[f] + c.gy[2] * v2[f];
      beta[j][f] = ct.area * (px * px + py * py);
    }
  }

  for (int k = 0; k < 2; ++k) {
    const GaussPointTable& g = rt.gp[ct.gp_offset + 2 * local_face + k];
    double pv[kMaxStencil][NF];
    for (int j = 0; j < nc; ++j) {
      const CandidateFit& c = ct.cand[j];
      const double* v0 = values + c.slots[0] * NF;
      const double* v1 = values + c.slots[1] * NF;
      const double* v2 = values + c.slots[2] * NF;
      for (int f = 0; f < NF; ++f)
        pv[j][f] = g.b[j][0] * v0[f] + g.b[j][1] * v1[f] + g.b[j][2] * v2[f];
    }

    double num_p[NF], den_p[NF], num_m[NF], den_m[NF];
    for (int f = 0; f < NF; ++f) num_p[f] = den_p[f] = num_m[f] = den_m[f] = 0.0;
    for (int j = 0; j < nc; ++j) {
      const double gp = g.gamma_plus[j];
      const double gm = g.gamma_minus[j];
      for (int f = 0; f < NF; ++f) {
        const double bt_p = beta[j][f] * (1.0 + gp * beta[j][f] * (1.0 + gp * beta[j][f]));
        const double ap = gp / ((bt_p + eps) * (bt_p + eps));
        den_p[f] += ap;
        num_p[f] += ap * pv[j][f];
        const double bt_m = beta[j][f] * (1.0 + gm * beta[j][f] * (1.0 + gm * beta[j][f]));
        const double am = gm / ((bt_m + eps) * (bt_m + eps));
        den_m[f] += am;
        num_m[f] += am * pv[j][f];
      }
    }
    for (int f = 0; f < NF; ++f)
      out[k * NF + f] = g.sigma_plus * (num_p[f] / den_p[f]) -
                        g.sigma_minus * (num_m[f] / den_m[f]);
  }
}

template <int NF>
void reconstruct_face_linear(const ReconstructionTables& rt, int cell, int local_face,
                             const double* values, double* out) {
  const CellTables& ct = rt.cells[cell];
  const int nc = ct.n_cand;
  for (int k = 0; k < 2; ++k) {
    const GaussPointTable& g = rt.gp[ct.gp_offset + 2 * local_face + k];
    double acc[NF];
    for (int f = 0; f < NF; ++f) acc[f] = 0.0;
    for (int j = 0; j < nc; ++j) {
      const CandidateFit& c = ct.cand[j];
      const double* v0 = values + c.slots[0] * NF;
      const double* v1 = values + c.slots[1] * NF;
      const double* v2 = values + c.slots[2] * NF;
      for (int f = 0; f < NF; ++f)
        acc[f] += g.gamma[j] *
                  (g.b[j][0] * v0[f] + g.b[j][1] * v1[f] + g.b[j][2] * v2[f]);
    }
    for (int f = 0; f < NF; ++f) out[k * NF + f] = acc[f];
  }
}

/// Scalar conveniences for tests; slot_values has m+1 entries, owner first.
std::array<double, 2> reconstruct_scalar(const ReconstructionTables& rt, int cell, int local_face,
                                         std::span<const double> slot_values);
std::array<double, 2> reconstruct_scalar_linear(const ReconstructionTables& rt, int cell,
                                                int local_face,
                                                std::span<const double> slot_values);

/// Gather the m+1 slot values of a cell's stencil from a per-cell field.
std::vector<double> gather_slot_values(const Stencil& st, std::span<const double> field);

}  // namespace uweno
