#include "spp/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spp {

Grid make_grid(std::vector<double> mins, std::vector<double> maxs, std::vector<std::size_t> counts,
               std::vector<bool> periodic) {
  const std::size_t d = counts.size();
  if (mins.size() != d || maxs.size() != d || periodic.size() != d) {
    throw std::invalid_argument("make_grid: dimension mismatch between mins, maxs, counts, periodic");
  }
  if (d == 0 || d > kMaxDim) {
    throw std::invalid_argument("make_grid: dimension must be in [1, 4]");
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (counts[k] < 3) {
      throw std::invalid_argument("make_grid: counts[" + std::to_string(k) + "] must be at least 3");
    }
    if (!(mins[k] < maxs[k]) || !std::isfinite(mins[k]) || !std::isfinite(maxs[k])) {
      throw std::invalid_argument("make_grid: bounds of dimension " + std::to_string(k) + " are not ordered");
    }
  }

  Grid g;
  g.mins_ = std::move(mins);
  g.maxs_ = std::move(maxs);
  g.counts_ = std::move(counts);
  g.periodic_ = std::move(periodic);
  g.spacing_.resize(d);
  g.strides_.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double span = g.maxs_[k] - g.mins_[k];
    g.spacing_[k] = g.periodic_[k] ? span / static_cast<double>(g.counts_[k])
                                   : span / static_cast<double>(g.counts_[k] - 1);
  }
  std::size_t stride = 1;
  for (std::size_t k = d; k-- > 0;) {
    g.strides_[k] = stride;
    stride *= g.counts_[k];
  }
  g.size_ = stride;
  return g;
}

MultiIndex Grid::unravel(std::size_t flat) const {
  MultiIndex idx{};
  for (std::size_t k = 0; k < dim(); ++k) {
    idx[k] = flat / strides_[k];
    flat -= idx[k] * strides_[k];
  }
  return idx;
}

std::size_t Grid::ravel(const MultiIndex& idx) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dim(); ++k) flat += idx[k] * strides_[k];
  return flat;
}

Point Grid::node(std::size_t flat) const {
  const MultiIndex idx = unravel(flat);
  Point p{};
  for (std::size_t k = 0; k < dim(); ++k) p[k] = coord(k, idx[k]);
  return p;
}

double Grid::wrap(std::size_t k, double x) const {
  if (!periodic_[k]) return x;
  const double span = maxs_[k] - mins_[k];
  double r = std::fmod(x - mins_[k], span);
  if (r < 0) r += span;
  if (r >= span) r = 0.0;
  return mins_[k] + r;
}

Grid Grid::position_grid() const {
  if (dim() < 2) throw std::invalid_argument("position_grid: grid has fewer than two dimensions");
  return make_grid({mins_[0], mins_[1]}, {maxs_[0], maxs_[1]}, {counts_[0], counts_[1]},
                   {periodic_[0], periodic_[1]});
}

bool Grid::is_position_grid_of(const Grid& other) const {
  if (dim() != 2 || other.dim() < 2) return false;
  for (std::size_t k = 0; k < 2; ++k) {
    if (mins_[k] != other.mins_[k] || maxs_[k] != other.maxs_[k] || counts_[k] != other.counts_[k] ||
        periodic_[k] != other.periodic_[k]) {
      return false;
    }
  }
  return true;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << "Grid(dim=" << dim() << ", counts=";
  for (std::size_t k = 0; k < dim(); ++k) os << (k ? "x" : "") << counts_[k];
  os << ")";
  return os.str();
}

bool operator==(const Grid& a, const Grid& b) {
  return a.mins_ == b.mins_ && a.maxs_ == b.maxs_ && a.counts_ == b.counts_ && a.periodic_ == b.periodic_;
}

}  // namespace spp
