#pragma once

#include <cstddef>

#include "spp/dynamics.hpp"
#include "spp/field.hpp"
#include "spp/grid.hpp"
#include "spp/hj_solver.hpp"

namespace spp {

/// Layout of the 3-D tracking-error grid.
///
/// With heading_window > 0 the relative heading axis covers
/// [-heading_window, heading_window] without wrap and the window edge joins
/// the violation set. Otherwise it is the full periodic circle.
struct ErrorGridSpec {
  std::size_t position_count = 21;
  std::size_t heading_count = 25;
  double heading_window = 0.6;
  /// Half-width of the position box as a multiple of r_eb.
  double extent = 4.0 / 3.0;

  void validate() const;
};

Grid make_error_grid(const TrackingErrorParams& params, const ErrorGridSpec& spec);

/// min(r_eb - |p|, heading-window margin scaled to the same units). Negative
/// where the error has left the tolerated set.
Field tracking_violation_target(const Grid& error_grid, double r_eb);

struct KernelSettings {
  ErrorGridSpec grid;
  double tol = 1e-3;
  double t_max = 20.0;
  double cfl = 0.5;
  int spatial_order = 2;
};

/// Invariant kernel of the error dynamics. Throws EmptyKernelError when the
/// tracker cannot hold any error state.
KernelResult compute_tracking_kernel(const TrackingErrorParams& params, const KernelSettings& settings);

/// Radius of the smallest origin-centred disk holding the kernel's position
/// projection.
double kernel_position_radius(const Field& kernel);

}  // namespace spp
