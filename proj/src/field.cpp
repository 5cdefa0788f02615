#include "polardisk/field.hpp"

#include <algorithm>

#include "polardisk/mesh.hpp"

namespace polardisk {

GridField::GridField(const PolarGrid& grid, double fill) : GridField(grid.m, grid.n, fill) {}

std::vector<double> GridField::unknowns() const {
  std::vector<double> x(interior_.size() + 1);
  x[0] = origin_;
  std::copy(interior_.begin(), interior_.end(), x.begin() + 1);
  return x;
}

void GridField::set_unknowns(std::span<const double> x) {
  if (x.size() != interior_.size() + 1)
    throw std::invalid_argument("unknown vector does not match the field shape");
  origin_ = x[0];
  std::copy(x.begin() + 1, x.end(), interior_.begin());
}

}  // namespace polardisk
