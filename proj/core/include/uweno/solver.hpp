#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "uweno/euler.hpp"
#include "uweno/mesh.hpp"
#include "uweno/weno.hpp"

namespace uweno {

// ---------------------------------------------------------------------------
// Boundary conditions. Ghost states live only as face-flux partners; the
// stencil preconditioning already degrades reconstruction near boundaries.
// ---------------------------------------------------------------------------

enum class BcKind {
  outflow,     // non-reflective: ghost copies the interior state
  reflective,  // wall: normal velocity mirrored
  prescribed,  // fixed exterior state
  dmr_top,     // pre/post shock state selected by the moving-shock position
  dmr_bottom,  // post-shock inflow before the wall start, reflective after
};

struct MovingShockSpec {
  Primitive post, pre;
  double x0 = 0, y0 = 0;   // a point on the initial front
  double tan_angle = 0;    // dx/dy of the front line
  double speed_x = 0;      // horizontal front speed
  double front_x(double y, double t) const { return x0 + (y - y0) * tan_angle + speed_x * t; }
};

struct BoundaryCondition {
  BcKind kind = BcKind::outflow;
  Primitive state;       // prescribed
  MovingShockSpec shock; // dmr_*
  double wall_start_x = 0;  // dmr_bottom

  static BoundaryCondition outflow() { return {}; }
  static BoundaryCondition reflective() { return {BcKind::reflective, {}, {}, 0}; }
  static BoundaryCondition prescribed(const Primitive& q) {
    return {BcKind::prescribed, q, {}, 0};
  }
};

struct TimeControls {
  enum class Mode { fixed_dt, cfl };
  Mode mode = Mode::cfl;
  double coefficient = 0.3;  // dt = c*h in fixed mode, CFL number otherwise
  double t_end = 1.0;
};

struct RunMetrics {
  long steps = 0;
  long residual_evals = 0;
  long point_evals = 0;           // reconstructed Gauss-point states
  long fallback_activations = 0;  // Gauss points replaced by the cell average
  long roe_fallbacks = 0;
  double min_density = 1e300, min_pressure = 1e300;
  double min_star_density = 1e300, min_star_pressure = 1e300;
  double wall_seconds = 0;
  // time integral of the net boundary flux of each conserved component
  std::array<double, 4> boundary_flux_integral{};
};

struct SolverOptions {
  double gamma = kGamma;
  bool characteristic = true;  // reconstruct characteristic variables
  int threads = 0;             // 0: all hardware threads
};

/// Classical three-stage TVD Runge-Kutta step on any cell-state vector.
/// stage_rhs(w, stage_time) must return dW/dt.
void tvd_rk3_step(
    std::vector<Vec4>& w, double t, double dt,
    const std::function<std::vector<Vec4>(const std::vector<Vec4>&, double)>& stage_rhs);

class EulerSolver {
 public:
  EulerSolver(const Mesh& mesh, const ReconstructionTables& tables, SolverOptions opt = {});

  void set_bc(const std::string& tag, const BoundaryCondition& bc);

  /// Cell averages of the initial condition by degree-4 quadrature.
  void initialize(const std::function<Primitive(double, double)>& ic);

  std::vector<Vec4>& state() { return w_; }
  const std::vector<Vec4>& state() const { return w_; }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }
  const Mesh& mesh() const { return mesh_; }
  RunMetrics& metrics() { return metrics_; }

  /// Semi-discrete right-hand side L(w) at the given stage time.
  std::vector<Vec4> residual(const std::vector<Vec4>& w, double stage_time);

  double compute_dt(const TimeControls& tc) const;
  void rk3_step(double dt);

  /// March to tc.t_end; returns the metrics snapshot.
  const RunMetrics& run(const TimeControls& tc,
                        const std::function<void(const EulerSolver&)>& on_step = {});

 private:
  const Mesh& mesh_;
  const ReconstructionTables& tables_;
  SolverOptions opt_;
  std::vector<Vec4> w_;
  double t_ = 0;
  std::vector<BoundaryCondition> bc_by_tag_;
  RunMetrics metrics_;

  void check_physical(const std::vector<Vec4>& w, int stage) const;
};

}  // namespace uweno
