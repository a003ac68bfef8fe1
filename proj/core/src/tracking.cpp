#include "spp/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spp/geometry.hpp"

namespace spp {

void ErrorGridSpec::validate() const {
  if (position_count < 3 || heading_count < 3) throw std::invalid_argument("error grid needs at least 3 nodes per axis");
  if (heading_window < 0.0 || heading_window >= kPi) throw std::invalid_argument("heading_window must lie in [0, pi)");
  if (!(extent > 1.0)) throw std::invalid_argument("error grid extent must exceed 1");
}

Grid make_error_grid(const TrackingErrorParams& params, const ErrorGridSpec& spec) {
  params.validate();
  spec.validate();
  const double l = spec.extent * params.r_eb;
  const std::size_t n = spec.position_count;
  if (spec.heading_window > 0.0) {
    const double a = spec.heading_window;
    return make_grid({-l, -l, -a}, {l, l, a}, {n, n, spec.heading_count}, {false, false, false});
  }
  return make_grid({-l, -l, 0.0}, {l, l, kTwoPi}, {n, n, spec.heading_count}, {false, false, true});
}

Field tracking_violation_target(const Grid& error_grid, double r_eb) {
  if (error_grid.dim() != 3) throw std::invalid_argument("tracking_violation_target: 3-D error grid required");
  const bool windowed = !error_grid.periodic(2);
  const double a = error_grid.max(2);
  std::vector<double> v(error_grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point x = error_grid.node(i);
    double l = r_eb - std::hypot(x[0], x[1]);
    if (windowed) l = std::min(l, r_eb / a * (a - std::abs(x[2])));
    v[i] = l;
  }
  return Field(error_grid, std::move(v));
}

KernelResult compute_tracking_kernel(const TrackingErrorParams& params, const KernelSettings& settings) {
  const Grid g = make_error_grid(params, settings.grid);
  ErrorHamiltonian h(params);
  return solve_invariant_kernel(tracking_violation_target(g, params.r_eb), h, settings.tol, settings.t_max,
                                settings.cfl, settings.spatial_order);
}

double kernel_position_radius(const Field& kernel) { return max_position_norm(kernel); }

}  // namespace spp
