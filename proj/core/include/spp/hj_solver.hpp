#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spp/dynamics.hpp"
#include "spp/field.hpp"
#include "spp/grid.hpp"

namespace spp {

using Alpha = std::array<double, kMaxDim>;

/// Hamiltonian evaluated at a grid node. Implementations may precompute
/// per-node tables in bind() and refresh time-dependent data in prepare().
class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;

  virtual void bind(const Grid& grid) = 0;
  /// Called before each time step with the step's start time.
  virtual void prepare(double /*t*/) {}
  virtual double evaluate(std::size_t flat, const MultiIndex& idx, const Point& x, const Point& p) const = 0;
  /// Lax-Friedrichs coefficient per dimension.
  virtual Alpha dissipation() const = 0;
  virtual std::string name() const = 0;
};

/// Dubins car in any mode except FrsClosedLoop and ErrorBound.
class DubinsHamiltonian final : public Hamiltonian {
 public:
  DubinsHamiltonian(HamiltonianMode mode, DubinsParams params);

  void bind(const Grid& grid) override;
  double evaluate(std::size_t flat, const MultiIndex& idx, const Point& x, const Point& p) const override;
  Alpha dissipation() const override;
  std::string name() const override { return to_string(mode_); }

 private:
  HamiltonianMode mode_;
  DubinsParams params_;
  Grid grid_;
  std::vector<double> cos_, sin_;
};

/// Forward flow under the feedback law of a backward value function: at time t
/// the control at each node is the ReachUnderDstb optimum for the gradient of
/// the latest value sample at or before t. Disturbance maximizes.
///
/// The flow maximizes over the range of feedback controls in each node's
/// 3x3x3 neighbourhood. A bang-bang feedback squeezes the set onto its
/// switching surfaces, and a set thinner than a cell is lost to dissipation;
/// the neighbourhood range keeps it at least a cell thick there and still
/// covers the control of any state interpolated inside the cells.
class ClosedLoopHamiltonian final : public Hamiltonian {
 public:
  /// `value` must outlive the Hamiltonian.
  ClosedLoopHamiltonian(DubinsParams params, const TimeField& value);

  void bind(const Grid& grid) override;
  void prepare(double t) override;
  double evaluate(std::size_t flat, const MultiIndex& idx, const Point& x, const Point& p) const override;
  Alpha dissipation() const override;
  std::string name() const override { return "FrsClosedLoop"; }

  /// Feedback control cached for the current value sample.
  Control feedback(std::size_t flat) const { return {v_[flat], w_[flat]}; }

 private:
  DubinsParams params_;
  const TimeField* value_;
  Grid grid_;
  std::vector<double> cos_, sin_;
  std::vector<double> v_, w_;
  std::vector<double> v_lo_, v_hi_, w_lo_, w_hi_;
  std::size_t cached_ = TimeField::npos;
};

/// Tracking-error game: tracker maximizes, planner and disturbance minimize.
class ErrorHamiltonian final : public Hamiltonian {
 public:
  explicit ErrorHamiltonian(TrackingErrorParams params);

  void bind(const Grid& grid) override;
  double evaluate(std::size_t flat, const MultiIndex& idx, const Point& x, const Point& p) const override;
  Alpha dissipation() const override;
  std::string name() const override { return "ErrorBound"; }

  const TrackingErrorParams& params() const { return params_; }

 private:
  TrackingErrorParams params_;
  Grid grid_;
  std::vector<double> cos_, sin_;
};

/// Arbitrary H(x, p) with fixed dissipation; mostly for low-dimensional checks.
class FunctionHamiltonian final : public Hamiltonian {
 public:
  using Fn = std::function<double(const Point& x, const Point& p)>;
  FunctionHamiltonian(Fn fn, Alpha alpha) : fn_(std::move(fn)), alpha_(alpha) {}

  void bind(const Grid&) override {}
  double evaluate(std::size_t, const MultiIndex&, const Point& x, const Point& p) const override { return fn_(x, p); }
  Alpha dissipation() const override { return alpha_; }
  std::string name() const override { return "function"; }

 private:
  Fn fn_;
  Alpha alpha_;
};

enum class Direction { Backward, Forward };

/// Backward: final-value reach-avoid variational inequality, integrated from
/// t_end down to t_start with V <- min(V, l) then V <- max(V, -g) after every
/// stage. Forward: initial-value PDE from t_start to t_end; states inside an
/// obstacle are dropped (V <- max(V, -g)) and the target is the initial set.
///
/// Obstacles are sampled piecewise-constant in time (latest sample at or before
/// the destination time of a step) and may live on the full grid or on its
/// position sub-grid. An empty TimeField means no obstacle.
///
/// Samples are saved at t_start, t_end and every multiple of save_dt in
/// between, so solves with different spans share one time lattice.
struct SolveRequest {
  Field target;
  TimeField obstacles;
  Hamiltonian* hamiltonian = nullptr;
  double t_start = 0.0;
  double t_end = 0.0;
  double save_dt = 0.02;
  Direction direction = Direction::Backward;
  double cfl = 0.5;
  /// 1: first-order one-sided differences; 2: second-order ENO; 5: WENO5.
  int spatial_order = 2;

  /// Backward only: stop once this state is in the set, after
  /// stop_extra_samples further samples.
  std::optional<Point> stop_when_reached;
  std::size_t stop_extra_samples = 2;

  /// Called with every saved sample, in integration order.
  std::function<void(double t, const Field& value)> on_sample;
  /// When false only the callback sees the samples.
  bool keep_samples = true;
};

struct ValueFunction {
  TimeField samples;
  std::string mode;
  bool stopped_early = false;
  /// Infinite-horizon solves only.
  bool converged = false;
  double final_change = 0.0;
  std::size_t iterations = 0;
};

/// H(p_mean) - sum_k alpha_k (p+_k - p-_k) / 2 at one node, with one-sided
/// differences of the given order.
double lf_numerical_hamiltonian(const Field& f, std::size_t flat, Hamiltonian& h, const Alpha& alpha,
                                int order = 2);

/// Largest stable step for the dissipation coefficients on the grid.
double cfl_time_step(const Grid& grid, const Alpha& alpha, double cfl = 0.5);

/// One explicit Euler substep of the variational inequality from t to t - dt:
/// V + dt * (H(p_mean) + dissipation), then min with target, then max with
/// -obstacle. `obstacle` is the obstacle at the destination time and may be
/// empty (no obstacle). Throws std::invalid_argument when dt violates CFL.
Field step_backward_vi(const Field& v, double t, double dt, const Field& target, const Field* obstacle,
                       Hamiltonian& h, int order = 2);

ValueFunction solve(const SolveRequest& request);

struct KernelResult {
  Field kernel;
  bool converged = false;
  double final_change = 0.0;
  double span = 0.0;
};

/// Infinite-horizon backward solve against `violation_target` (no obstacle)
/// in unit-time chunks until the sup-norm change over a chunk drops below
/// tol or the span reaches t_max. The returned kernel is the complement of
/// the converged set. Throws EmptyKernelError when the kernel has no node.
KernelResult solve_invariant_kernel(const Field& violation_target, Hamiltonian& h, double tol, double t_max,
                                    double cfl = 0.5, int order = 2);

/// Number of threads solver sweeps may use (SPP_THREADS, else the OpenMP default).
void configure_threads_from_env();

}  // namespace spp
