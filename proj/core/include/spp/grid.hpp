#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace spp {

inline constexpr std::size_t kMaxDim = 4;

/// Fixed-capacity coordinate vector; only the first Grid::dim() entries are used.
using Point = std::array<double, kMaxDim>;
using MultiIndex = std::array<std::size_t, kMaxDim>;

/// Rectangular node lattice. Dimensions 0 and 1 are the position plane, any
/// further dimensions are non-position coordinates (e.g. heading).
///
/// Values are stored row-major: the last dimension varies fastest. Periodic
/// dimensions do not duplicate the endpoint, so their spacing is
/// (max - min) / count.
class Grid {
 public:
  Grid() = default;

  std::size_t dim() const { return counts_.size(); }
  std::size_t size() const { return size_; }

  double min(std::size_t k) const { return mins_[k]; }
  double max(std::size_t k) const { return maxs_[k]; }
  std::size_t count(std::size_t k) const { return counts_[k]; }
  bool periodic(std::size_t k) const { return periodic_[k]; }
  double spacing(std::size_t k) const { return spacing_[k]; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }

  const std::vector<double>& mins() const { return mins_; }
  const std::vector<double>& maxs() const { return maxs_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  const std::vector<bool>& periodic_flags() const { return periodic_; }

  double coord(std::size_t k, std::size_t i) const { return mins_[k] + static_cast<double>(i) * spacing_[k]; }

  MultiIndex unravel(std::size_t flat) const;
  std::size_t ravel(const MultiIndex& idx) const;
  Point node(std::size_t flat) const;

  /// Maps a periodic coordinate into [min, max); identity for other dimensions.
  double wrap(std::size_t k, double x) const;

  /// The 2-D grid formed by the two position dimensions.
  Grid position_grid() const;

  /// Flat index into position_grid() of the node's position.
  std::size_t position_index(std::size_t flat) const { return flat / strides_[1]; }

  /// Number of nodes sharing one position (product of non-position counts).
  std::size_t nodes_per_position() const { return strides_[1]; }

  /// True when `other` equals this grid's position sub-grid.
  bool is_position_grid_of(const Grid& other) const;

  std::string describe() const;

  friend bool operator==(const Grid& a, const Grid& b);

 private:
  friend Grid make_grid(std::vector<double>, std::vector<double>, std::vector<std::size_t>, std::vector<bool>);

  std::vector<double> mins_;
  std::vector<double> maxs_;
  std::vector<std::size_t> counts_;
  std::vector<bool> periodic_;
  std::vector<double> spacing_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Validates and builds a grid. Throws std::invalid_argument on length
/// mismatch, dim outside [1, kMaxDim], counts below 3, or mins >= maxs.
Grid make_grid(std::vector<double> mins, std::vector<double> maxs, std::vector<std::size_t> counts,
               std::vector<bool> periodic);

}  // namespace spp
