#include "spp/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace spp {

Field::Field(Grid grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {}

Field::Field(Grid grid, std::vector<double> values, bool exact_sdf)
    : grid_(std::move(grid)), values_(std::move(values)), exact_sdf_(exact_sdf) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("Field: value count does not match grid size");
  }
}

bool Field::is_absent() const {
  return !values_.empty() && std::all_of(values_.begin(), values_.end(), [](double v) { return v >= kAbsentValue; });
}

double Field::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

Field absent_field(const Grid& grid) { return Field(grid, kAbsentValue); }

void TimeField::push_back(double t, Field f) {
  if (!times_.empty()) {
    if (!(t > times_.back() + kTimeEps)) throw std::invalid_argument("TimeField: times must increase");
    if (!(f.grid() == fields_.front().grid())) throw std::invalid_argument("TimeField: grid mismatch");
  }
  times_.push_back(t);
  fields_.push_back(std::move(f));
}

void TimeField::push_front(double t, Field f) {
  if (!times_.empty()) {
    if (!(t < times_.front() - kTimeEps)) throw std::invalid_argument("TimeField: times must increase");
    if (!(f.grid() == fields_.front().grid())) throw std::invalid_argument("TimeField: grid mismatch");
  }
  times_.insert(times_.begin(), t);
  fields_.insert(fields_.begin(), std::move(f));
}

std::size_t TimeField::index_at_or_before(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t + kTimeEps);
  if (it == times_.begin()) return npos;
  return static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
}

void TimeField::drop_before(std::size_t first) {
  first = std::min(first, times_.size());
  times_.erase(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(first));
  fields_.erase(fields_.begin(), fields_.begin() + static_cast<std::ptrdiff_t>(first));
}

}  // namespace spp
