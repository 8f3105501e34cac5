#include "homog/field.hpp"

#include <cmath>

namespace homog {

DiscreteField::DiscreteField(GridPtr grid, Location loc)
    : grid_(std::move(grid)), loc_(loc) {
  ncomp_ = grid_->families(loc);
  size_t total = 0;
  for (int f = 0; f < ncomp_; ++f) {
    offsets_[f] = total;
    total += grid_->count(loc_, f);
  }
  values_.assign(total, 0.0);
}

void DiscreteField::axpy(double s, const DiscreteField& other) {
  require(same_layout(other), "axpy: field layout mismatch");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
}

void DiscreteField::assign(const std::function<double(const Vec3&, int)>& f) {
  for (int fam = 0; fam < ncomp_; ++fam) {
    Int3 s = grid_->shape(loc_, fam);
    auto v = comp(fam);
    size_t idx = 0;
    for (int i = 0; i < s[0]; ++i)
      for (int j = 0; j < s[1]; ++j)
        for (int k = 0; k < s[2]; ++k, ++idx)
          v[idx] = f(grid_->position(loc_, fam, i, j, k), fam);
  }
}

bool DiscreteField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool DiscreteField::same_layout(const DiscreteField& other) const {
  return loc_ == other.loc_ && grid_ && other.grid_ &&
         grid_->same_layout(*other.grid_);
}

DiscreteField make_field(GridPtr grid, Location loc) {
  return DiscreteField(std::move(grid), loc);
}

DiscreteField constant_field(GridPtr grid, Location loc, const Vec3& c) {
  DiscreteField f(std::move(grid), loc);
  for (int fam = 0; fam < f.components(); ++fam) {
    auto v = f.comp(fam);
    double value = c[f.components() == 1 ? 0 : fam];
    std::fill(v.begin(), v.end(), value);
  }
  return f;
}

}  // namespace homog
