#include "spp/hj_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "spp/errors.hpp"
#include "spp/geometry.hpp"

namespace spp {

namespace {

void heading_tables(const Grid& g, std::vector<double>& c, std::vector<double>& s) {
  if (g.dim() != 3) throw std::invalid_argument("hamiltonian: expected a 3-D (x, y, heading) grid");
  c.resize(g.count(2));
  s.resize(g.count(2));
  for (std::size_t i = 0; i < g.count(2); ++i) {
    c[i] = std::cos(g.coord(2, i));
    s[i] = std::sin(g.coord(2, i));
  }
}

double pick_min(double coef, double lo, double hi) { return coef > 0.0 ? coef * lo : coef * hi; }
double pick_max(double coef, double lo, double hi) { return coef < 0.0 ? coef * lo : coef * hi; }

// Fifth-order WENO reconstruction from five consecutive first differences.
inline double weno5(double v1, double v2, double v3, double v4, double v5) {
  const double p1 = v1 / 3.0 - 7.0 * v2 / 6.0 + 11.0 * v3 / 6.0;
  const double p2 = -v2 / 6.0 + 5.0 * v3 / 6.0 + v4 / 3.0;
  const double p3 = v3 / 3.0 + 5.0 * v4 / 6.0 - v5 / 6.0;
  auto sq = [](double a) { return a * a; };
  const double s1 = 13.0 / 12.0 * sq(v1 - 2 * v2 + v3) + 0.25 * sq(v1 - 4 * v2 + 3 * v3);
  const double s2 = 13.0 / 12.0 * sq(v2 - 2 * v3 + v4) + 0.25 * sq(v2 - v4);
  const double s3 = 13.0 / 12.0 * sq(v3 - 2 * v4 + v5) + 0.25 * sq(3 * v3 - 4 * v4 + v5);
  const double eps = 1e-6 * std::max({sq(v1), sq(v2), sq(v3), sq(v4), sq(v5)}) + 1e-99;
  const double a1 = 0.1 / sq(s1 + eps);
  const double a2 = 0.6 / sq(s2 + eps);
  const double a3 = 0.3 / sq(s3 + eps);
  return (a1 * p1 + a2 * p2 + a3 * p3) / (a1 + a2 + a3);
}

// One-sided differences along dimension k: first order, second-order ENO
// (the smaller of the two candidate second differences corrects each side),
// or fifth-order WENO. Non-periodic boundaries clamp the stencil index, so
// ghost nodes repeat the boundary value; this keeps the first-order scheme
// monotone.
inline void one_sided(const double* v, const Grid& g, std::size_t flat, const MultiIndex& idx, std::size_t k,
                      int order, double& dm, double& dp) {
  const auto n = static_cast<long>(g.count(k));
  const std::size_t s = g.stride(k);
  const auto i = static_cast<long>(idx[k]);
  const std::size_t base = flat - static_cast<std::size_t>(i) * s;
  const bool periodic = g.periodic(k);
  const double inv_h = 1.0 / g.spacing(k);
  auto at = [&](long off) {
    long j = i + off;
    if (periodic) {
      j = ((j % n) + n) % n;
    } else {
      j = std::clamp(j, 0L, n - 1);
    }
    return v[base + static_cast<std::size_t>(j) * s];
  };
  const double c = v[flat];
  if (order == 5) {
    double f[7];
    for (long o = -3; o <= 3; ++o) f[o + 3] = o == 0 ? c : at(o);
    double d[6];
    for (int j = 0; j < 6; ++j) d[j] = (f[j + 1] - f[j]) * inv_h;
    // d[j] is the difference between nodes i-3+j and i-2+j.
    dm = weno5(d[0], d[1], d[2], d[3], d[4]);
    dp = weno5(d[5], d[4], d[3], d[2], d[1]);
    return;
  }
  const double vm1 = at(-1), vp1 = at(1);
  dm = (c - vm1) * inv_h;
  dp = (vp1 - c) * inv_h;
  if (order >= 2) {
    const double vm2 = at(-2), vp2 = at(2);
    const double d2m = c - 2 * vm1 + vm2;
    const double d20 = vp1 - 2 * c + vm1;
    const double d2p = vp2 - 2 * vp1 + c;
    dm += 0.5 * inv_h * (std::abs(d2m) <= std::abs(d20) ? d2m : d20);
    dp -= 0.5 * inv_h * (std::abs(d20) <= std::abs(d2p) ? d20 : d2p);
  }
}

struct NodeTerms {
  double h;
  double diss;
};

inline NodeTerms node_terms(const double* v, const Grid& g, std::size_t flat, const MultiIndex& idx,
                            const Point& x, const Hamiltonian& ham, const Alpha& alpha, int order) {
  Point p{};
  double diss = 0.0;
  for (std::size_t k = 0; k < g.dim(); ++k) {
    double dm, dp;
    one_sided(v, g, flat, idx, k, order, dm, dp);
    p[k] = 0.5 * (dm + dp);
    diss += 0.5 * alpha[k] * (dp - dm);
  }
  return {ham.evaluate(flat, idx, x, p), diss};
}

// out = dV/d(elapsed time) in the integration direction.
void compute_rates(const Grid& g, const double* v, const Hamiltonian& ham, const Alpha& alpha, Direction dir,
                   int order, std::vector<double>& out) {
  const std::size_t d = g.dim();
  const auto n0 = static_cast<long long>(g.count(0));
  const std::size_t block = g.stride(0);
  const bool backward = dir == Direction::Backward;
#pragma omp parallel for schedule(static)
  for (long long i0 = 0; i0 < n0; ++i0) {
    const std::size_t begin = static_cast<std::size_t>(i0) * block;
    MultiIndex idx = g.unravel(begin);
    Point x{};
    for (std::size_t k = 0; k < d; ++k) x[k] = g.coord(k, idx[k]);
    for (std::size_t flat = begin; flat < begin + block; ++flat) {
      const NodeTerms t = node_terms(v, g, flat, idx, x, ham, alpha, order);
      out[flat] = backward ? t.h + t.diss : t.diss - t.h;
      for (std::size_t k = d; k-- > 1;) {
        if (++idx[k] < g.count(k)) {
          x[k] = g.coord(k, idx[k]);
          break;
        }
        idx[k] = 0;
        x[k] = g.min(k);
      }
    }
  }
}

void clamp_obstacle(std::vector<double>& v, const Field* obstacle) {
  if (obstacle == nullptr) return;
  const std::size_t n = v.size();
  const double* g = obstacle->values().data();
  if (obstacle->size() == n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], -g[i]);
  } else {
    const std::size_t per = n / obstacle->size();
    for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], -g[i / per]);
  }
}

void clamp(std::vector<double>& v, const Field& target, const Field* obstacle) {
  const double* l = target.values().data();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(v[i], l[i]);
  clamp_obstacle(v, obstacle);
}

void check_obstacle_grid(const Field& obstacle, const Grid& grid) {
  if (obstacle.grid() == grid) return;
  if (grid.dim() >= 2 && obstacle.grid().is_position_grid_of(grid)) return;
  throw std::invalid_argument("solve: obstacle grid matches neither the value grid nor its position sub-grid");
}

void check_finite(const std::vector<double>& v, double t) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InstabilityError("solve: non-finite value at t=" + std::to_string(t));
  }
}

// Explicit TVD RK2 integrator sharing its buffers across steps.
class Integrator {
 public:
  Integrator(const Field& init, const Field& target, Hamiltonian& ham, Direction dir, int order)
      : grid_(init.grid()), target_(target), ham_(ham), dir_(dir), order_(order), alpha_(ham.dissipation()) {
    v_.assign(init.values().begin(), init.values().end());
    stage_.resize(v_.size());
    rate_.resize(v_.size());
  }

  const Alpha& alpha() const { return alpha_; }
  std::vector<double>& values() { return v_; }

  // Advances by dt of elapsed time starting at time t.
  void step(double t, double dt, const Field* obstacle) {
    const bool backward = dir_ == Direction::Backward;
    const double sgn = backward ? -1.0 : 1.0;
    const std::size_t n = v_.size();

    ham_.prepare(t);
    compute_rates(grid_, v_.data(), ham_, alpha_, dir_, order_, rate_);
    for (std::size_t i = 0; i < n; ++i) stage_[i] = v_[i] + dt * rate_[i];
    if (backward) {
      clamp(stage_, target_, obstacle);
    } else {
      clamp_obstacle(stage_, obstacle);
    }

    ham_.prepare(t + sgn * dt);
    compute_rates(grid_, stage_.data(), ham_, alpha_, dir_, order_, rate_);
    for (std::size_t i = 0; i < n; ++i) v_[i] = 0.5 * (v_[i] + stage_[i] + dt * rate_[i]);
    if (backward) {
      clamp(v_, target_, obstacle);
    } else {
      clamp_obstacle(v_, obstacle);
    }
  }

 private:
  Grid grid_;
  const Field& target_;
  Hamiltonian& ham_;
  Direction dir_;
  int order_;
  Alpha alpha_;
  std::vector<double> v_, stage_, rate_;
};

}  // namespace

DubinsHamiltonian::DubinsHamiltonian(HamiltonianMode mode, DubinsParams params) : mode_(mode), params_(params) {
  if (mode == HamiltonianMode::FrsClosedLoop || mode == HamiltonianMode::ErrorBound) {
    throw std::invalid_argument(std::string("DubinsHamiltonian: unsupported mode ") + to_string(mode));
  }
  params_.validate();
}

void DubinsHamiltonian::bind(const Grid& grid) {
  grid_ = grid;
  heading_tables(grid, cos_, sin_);
}

double DubinsHamiltonian::evaluate(std::size_t, const MultiIndex& idx, const Point&, const Point& p) const {
  const double c = p[0] * cos_[idx[2]] + p[1] * sin_[idx[2]];
  const DubinsParams& q = params_;
  switch (mode_) {
    case HamiltonianMode::BasicReach:
    case HamiltonianMode::ReducedReach:
      return pick_min(c, q.v_min, q.v_max) + pick_min(p[2], -q.omega_max, q.omega_max);
    case HamiltonianMode::ReachUnderDstb:
      return pick_min(c, q.v_min, q.v_max) + pick_min(p[2], -q.omega_max, q.omega_max) +
             q.d_r * std::sqrt(p[0] * p[0] + p[1] * p[1]) + q.d_theta_max * std::abs(p[2]);
    case HamiltonianMode::FrsOpenLoop:
      return pick_max(c, q.v_min, q.v_max) + pick_max(p[2], -q.omega_max, q.omega_max) +
             q.d_r * std::sqrt(p[0] * p[0] + p[1] * p[1]) + q.d_theta_max * std::abs(p[2]);
    default:
      return 0.0;
  }
}

Alpha DubinsHamiltonian::dissipation() const {
  const auto a = dissipation_bounds(grid_, mode_, params_);
  return {a[0], a[1], a[2], 0.0};
}

ClosedLoopHamiltonian::ClosedLoopHamiltonian(DubinsParams params, const TimeField& value)
    : params_(params), value_(&value) {
  params_.validate();
  if (value.empty()) throw std::invalid_argument("ClosedLoopHamiltonian: empty value function");
}

void ClosedLoopHamiltonian::bind(const Grid& grid) {
  if (!(value_->front().grid() == grid)) throw std::invalid_argument("ClosedLoopHamiltonian: grid mismatch");
  grid_ = grid;
  heading_tables(grid, cos_, sin_);
  v_.assign(grid.size(), params_.v_max);
  w_.assign(grid.size(), params_.omega_max);
  v_lo_ = v_hi_ = v_;
  w_lo_ = w_hi_ = w_;
  cached_ = TimeField::npos;
}

void ClosedLoopHamiltonian::prepare(double t) {
  std::size_t k = value_->index_at_or_before(t);
  if (k == TimeField::npos) k = 0;
  if (k == cached_) return;
  cached_ = k;
  const Field& v = value_->field(k);
  const auto n = static_cast<long long>(grid_.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const auto flat = static_cast<std::size_t>(i);
    const Point g = node_gradient(v, flat);
    const State3 x{0.0, 0.0, grid_.coord(2, grid_.unravel(flat)[2])};
    const Control u = optimal_control({g[0], g[1], g[2]}, x, HamiltonianMode::ReachUnderDstb, params_);
    v_[flat] = u.v;
    w_[flat] = u.omega;
  }
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const auto flat = static_cast<std::size_t>(i);
    const MultiIndex idx = grid_.unravel(flat);
    double vl = v_[flat], vh = vl, wl = w_[flat], wh = wl;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        for (int c = -1; c <= 1; ++c) {
          MultiIndex j = idx;
          bool inside = true;
          const int off[3] = {a, b, c};
          for (std::size_t d = 0; d < 3; ++d) {
            const auto m = static_cast<long long>(grid_.count(d));
            long long q = static_cast<long long>(idx[d]) + off[d];
            if (grid_.periodic(d)) {
              q = (q + m) % m;
            } else if (q < 0 || q >= m) {
              inside = false;
            }
            j[d] = static_cast<std::size_t>(q);
          }
          if (!inside) continue;
          const std::size_t o = grid_.ravel(j);
          vl = std::min(vl, v_[o]);
          vh = std::max(vh, v_[o]);
          wl = std::min(wl, w_[o]);
          wh = std::max(wh, w_[o]);
        }
      }
    }
    v_lo_[flat] = vl;
    v_hi_[flat] = vh;
    w_lo_[flat] = wl;
    w_hi_[flat] = wh;
  }
}

double ClosedLoopHamiltonian::evaluate(std::size_t flat, const MultiIndex& idx, const Point&, const Point& p) const {
  const double c = p[0] * cos_[idx[2]] + p[1] * sin_[idx[2]];
  return pick_max(c, v_lo_[flat], v_hi_[flat]) + pick_max(p[2], w_lo_[flat], w_hi_[flat]) +
         params_.d_r * std::sqrt(p[0] * p[0] + p[1] * p[1]) + params_.d_theta_max * std::abs(p[2]);
}

Alpha ClosedLoopHamiltonian::dissipation() const {
  const auto a = dissipation_bounds(grid_, HamiltonianMode::FrsClosedLoop, params_);
  return {a[0], a[1], a[2], 0.0};
}

ErrorHamiltonian::ErrorHamiltonian(TrackingErrorParams params) : params_(params) {
  params_.tracker.validate();
  params_.planner.validate();
}

void ErrorHamiltonian::bind(const Grid& grid) {
  grid_ = grid;
  heading_tables(grid, cos_, sin_);
}

double ErrorHamiltonian::evaluate(std::size_t, const MultiIndex& idx, const Point& x, const Point& p) const {
  const DubinsParams& tr = params_.tracker;
  const DubinsParams& pl = params_.planner;
  const double k = p[0] * x[1] - p[1] * x[0] - p[2];
  const double cr = p[0] * cos_[idx[2]] + p[1] * sin_[idx[2]];
  return pick_max(-p[0], tr.v_min, tr.v_max) + pick_max(k, -tr.omega_max, tr.omega_max) +
         pick_min(cr, pl.v_min, pl.v_max) + pick_min(p[2], -pl.omega_max, pl.omega_max) -
         tr.d_r * std::sqrt(p[0] * p[0] + p[1] * p[1]) - tr.d_theta_max * std::abs(p[2]);
}

Alpha ErrorHamiltonian::dissipation() const {
  const auto a = dissipation_bounds(grid_, params_);
  return {a[0], a[1], a[2], 0.0};
}

double lf_numerical_hamiltonian(const Field& f, std::size_t flat, Hamiltonian& h, const Alpha& alpha, int order) {
  const Grid& g = f.grid();
  const MultiIndex idx = g.unravel(flat);
  const NodeTerms t = node_terms(f.values().data(), g, flat, idx, g.node(flat), h, alpha, order);
  return t.h - t.diss;
}

double cfl_time_step(const Grid& grid, const Alpha& alpha, double cfl) {
  double denom = 0.0;
  for (std::size_t k = 0; k < grid.dim(); ++k) denom += alpha[k] / grid.spacing(k);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return cfl / denom;
}

Field step_backward_vi(const Field& v, double t, double dt, const Field& target, const Field* obstacle,
                       Hamiltonian& h, int order) {
  if (!(v.grid() == target.grid())) throw std::invalid_argument("step_backward_vi: target grid mismatch");
  if (obstacle != nullptr) check_obstacle_grid(*obstacle, v.grid());
  h.bind(v.grid());
  const Alpha alpha = h.dissipation();
  if (!(dt > 0.0) || dt > cfl_time_step(v.grid(), alpha, 1.0) * (1.0 + 1e-12)) {
    throw std::invalid_argument("step_backward_vi: time step violates the CFL bound");
  }
  h.prepare(t);
  std::vector<double> rate(v.size());
  compute_rates(v.grid(), v.values().data(), h, alpha, Direction::Backward, order, rate);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] + dt * rate[i];
  clamp(out, target, obstacle);
  return Field(v.grid(), std::move(out));
}

namespace {

const Field* obstacle_at(const TimeField& obstacles, double t) {
  if (obstacles.empty()) return nullptr;
  const std::size_t k = obstacles.index_at_or_before(t);
  if (k == TimeField::npos) {
    throw std::invalid_argument("solve: obstacles do not cover t=" + std::to_string(t));
  }
  return &obstacles.field(k);
}

// Endpoints plus every multiple of save_dt strictly between them, in
// integration order.
std::vector<double> sample_times(double t_start, double t_end, double save_dt, bool backward) {
  const double eps = 1e-9 * save_dt;
  std::vector<double> out{t_start};
  const auto first = static_cast<long long>(std::floor((t_start + eps) / save_dt)) + 1;
  for (long long k = first;; ++k) {
    const double t = static_cast<double>(k) * save_dt;
    if (t >= t_end - eps) break;
    out.push_back(t);
  }
  out.push_back(t_end);
  if (backward) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<double> initial_values(const Field& target, const Field* obstacle) {
  std::vector<double> v(target.values().begin(), target.values().end());
  if (obstacle == nullptr) return v;
  const std::size_t per = v.size() / obstacle->size();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(v[i], -(*obstacle)[i / per]);
  return v;
}

}  // namespace

ValueFunction solve(const SolveRequest& req) {
  if (req.hamiltonian == nullptr) throw std::invalid_argument("solve: no Hamiltonian");
  if (!(req.t_start < req.t_end)) throw std::invalid_argument("solve: need t_start < t_end");
  if (!(req.save_dt > 0.0)) throw std::invalid_argument("solve: save_dt must be positive");
  if (!(req.cfl > 0.0 && req.cfl <= 1.0)) throw std::invalid_argument("solve: cfl must lie in (0, 1]");
  if (req.spatial_order != 1 && req.spatial_order != 2 && req.spatial_order != 5) {
    throw std::invalid_argument("solve: spatial_order must be 1, 2 or 5");
  }
  const Grid& grid = req.target.grid();
  for (const Field& f : req.obstacles.fields()) check_obstacle_grid(f, grid);
  if (req.stop_when_reached && req.direction != Direction::Backward) {
    throw std::invalid_argument("solve: stop_when_reached needs a backward solve");
  }

  Hamiltonian& ham = *req.hamiltonian;
  ham.bind(grid);
  const bool backward = req.direction == Direction::Backward;
  const double sgn = backward ? -1.0 : 1.0;
  const double t0 = backward ? req.t_end : req.t_start;
  const std::vector<double> times = sample_times(req.t_start, req.t_end, req.save_dt, backward);

  ValueFunction out;
  out.mode = ham.name();
  std::vector<std::pair<double, Field>> saved;

  const Field* g0 = obstacle_at(req.obstacles, t0);
  Field first(grid, initial_values(req.target, g0));
  Integrator integ(first, req.target, ham, req.direction, req.spatial_order);
  const double dt_max = cfl_time_step(grid, integ.alpha(), req.cfl);

  std::size_t extra_left = 0;
  bool reached = false;
  // Returns true when the early-stop condition fires.
  auto record = [&](double t) {
    Field f(grid, integ.values());
    if (req.on_sample) req.on_sample(t, f);
    bool stop = false;
    if (req.stop_when_reached) {
      if (!reached && sample(f, *req.stop_when_reached) <= 0.0) {
        reached = true;
        extra_left = req.stop_extra_samples;
      } else if (reached && extra_left > 0) {
        --extra_left;
      }
      stop = reached && extra_left == 0;
    }
    if (req.keep_samples) saved.emplace_back(t, std::move(f));
    return stop;
  };

  bool stop = record(t0);
  double t = t0;
  for (std::size_t i = 1; i < times.size() && !stop; ++i) {
    const double t_next = times[i];
    const double len = std::abs(t_next - t);
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(len / dt_max - 1e-12)));
    const double dt = len / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const double t_dest = s + 1 == steps ? t_next : t + sgn * dt;
      const Field* g = obstacle_at(req.obstacles, t_dest);
      integ.step(t, dt, g);
      t = t_dest;
    }
    check_finite(integ.values(), t);
    stop = record(t);
    if (stop && i + 1 < times.size()) out.stopped_early = true;
  }

  if (backward) std::reverse(saved.begin(), saved.end());
  for (auto& [ts, f] : saved) out.samples.push_back(ts, std::move(f));
  return out;
}

KernelResult solve_invariant_kernel(const Field& violation_target, Hamiltonian& h, double tol, double t_max,
                                    double cfl, int order) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_invariant_kernel: tol must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("solve_invariant_kernel: t_max must be positive");
  const Grid& grid = violation_target.grid();
  h.bind(grid);
  Integrator integ(violation_target, violation_target, h, Direction::Backward, order);
  const double dt_max = cfl_time_step(grid, integ.alpha(), cfl);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / dt_max)));
  const double dt = 1.0 / static_cast<double>(steps);

  KernelResult out;
  std::vector<double> prev = integ.values();
  double t = 0.0;
  while (out.span < t_max) {
    for (std::size_t s = 0; s < steps; ++s) {
      integ.step(t, dt, nullptr);
      t -= dt;
    }
    out.span += 1.0;
    check_finite(integ.values(), t);
    double change = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) change = std::max(change, std::abs(integ.values()[i] - prev[i]));
    out.final_change = change;
    prev = integ.values();
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  out.kernel = set_complement(Field(grid, std::move(prev)));
  if (!has_interior_node(out.kernel)) throw EmptyKernelError("invariant kernel is empty");
  return out;
}

void configure_threads_from_env() {
  if (const char* env = std::getenv("SPP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

}  // namespace spp
