#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spp/grid.hpp"

namespace spp {

/// Value used for "no obstacle": a uniform field far above any domain distance.
inline constexpr double kAbsentValue = 1e6;

/// Scalar implicit-surface function sampled on a Grid. The represented set is
/// the zero sublevel set {x : value(x) <= 0}.
class Field {
 public:
  Field() = default;
  explicit Field(Grid grid, double fill = 0.0);
  Field(Grid grid, std::vector<double> values, bool exact_sdf = false);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Set when the values are an exact signed distance in the position plane
  /// (extended as a cylinder over the non-position dimensions).
  bool exact_sdf() const { return exact_sdf_; }
  void set_exact_sdf(bool v) { exact_sdf_ = v; }

  /// True for the uniform "absent obstacle" sentinel.
  bool is_absent() const;

  double min_value() const;
  double max_value() const;

 private:
  Grid grid_;
  std::vector<double> values_;
  bool exact_sdf_ = false;
};

/// Field with all values at kAbsentValue.
Field absent_field(const Grid& grid);

/// A sequence of fields on one grid, stored with strictly increasing times.
class TimeField {
 public:
  TimeField() = default;

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  const std::vector<double>& times() const { return times_; }
  const std::vector<Field>& fields() const { return fields_; }
  std::vector<Field>& fields() { return fields_; }

  double time(std::size_t i) const { return times_[i]; }
  const Field& field(std::size_t i) const { return fields_[i]; }
  const Field& front() const { return fields_.front(); }
  const Field& back() const { return fields_.back(); }

  /// Appends a later sample. Throws std::invalid_argument when time does not
  /// increase or the grid differs from earlier samples.
  void push_back(double t, Field f);

  /// Inserts an earlier sample at the front (used by backward solves).
  void push_front(double t, Field f);

  /// Index of the latest sample with time <= t (within a small tolerance),
  /// or npos when t precedes the first sample.
  std::size_t index_at_or_before(double t) const;

  /// Drops every sample with index < first.
  void drop_before(std::size_t first);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<double> times_;
  std::vector<Field> fields_;
};

/// Tolerance used when comparing sample times.
inline constexpr double kTimeEps = 1e-9;

}  // namespace spp
