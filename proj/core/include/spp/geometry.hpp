#pragma once

#include <array>
#include <vector>

#include "spp/field.hpp"
#include "spp/grid.hpp"

namespace spp {

using Vec2 = std::array<double, 2>;

/// Signed distance to the disk |p - center| <= radius, constant along the
/// non-position dimensions. Negative inside.
Field sdf_disk_cylinder(const Grid& grid, Vec2 center, double radius);

/// Signed distance to the axis-aligned box [lo, hi] in the position plane.
Field sdf_axis_box(const Grid& grid, Vec2 lo, Vec2 hi);

/// Pointwise min: the union of the two sublevel sets.
Field set_union(const Field& f, const Field& g);
/// Pointwise max: the intersection of the two sublevel sets.
Field set_intersect(const Field& f, const Field& g);
/// Negation: the complement set (boundary shared).
Field set_complement(const Field& f);

/// Minkowski dilation of the position-plane cross sections by a disk of
/// radius r; non-position coordinates are left alone.
///
/// Inputs tagged exact_sdf take the f - r shortcut. Anything else goes through
/// a brute-force distance transform against the zero crossings of each
/// position slice, which rebuilds a signed distance of the dilated set.
Field dilate_positions(const Field& f, double r);

/// Min over all non-position coordinates; the sublevel set is the projection
/// of f's set onto the position plane. A 2-D input is returned unchanged.
Field project_min_nonposition(const Field& f);

/// Replicates a position-plane field over the non-position dimensions of grid.
Field extend_to_state_space(const Field& f2d, const Grid& grid);

/// Multilinear interpolation. Periodic coordinates wrap; throws
/// OutOfDomainError outside a non-periodic dimension.
double sample(const Field& f, const Point& x);

/// Gradient from central node differences, interpolated multilinearly.
Point sample_gradient(const Field& f, const Point& x);

/// Gradient at a grid node: central differences, one-sided at non-periodic
/// boundaries.
Point node_gradient(const Field& f, std::size_t flat);

/// Value and gradient in one pass.
std::pair<double, Point> sample_with_gradient(const Field& f, const Point& x);

/// True when some node of f lies in its zero sublevel set.
bool has_interior_node(const Field& f);

/// Points where the field crosses zero along position-plane grid edges,
/// found by linear interpolation; nodes with value exactly 0 are included.
/// For grids with more than two dimensions every slice contributes.
std::vector<Vec2> position_zero_crossings(const Field& f);

/// Largest |p| over the sublevel set, using sub-cell zero crossings for the
/// boundary. Returns a negative number for an empty set.
double max_position_norm(const Field& f);

}  // namespace spp
