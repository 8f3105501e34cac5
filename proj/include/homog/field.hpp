#pragma once

#include <functional>
#include <span>

#include "homog/grid.hpp"

namespace homog {

/// Values attached to one stagger location of a grid. Scalar fields live at
/// nodes or cells; vector fields on edges or faces store one component per
/// family, concatenated in canonical axis-major order.
class DiscreteField {
 public:
  DiscreteField() = default;
  DiscreteField(GridPtr grid, Location loc);

  const StaggeredGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Location location() const { return loc_; }
  int components() const { return ncomp_; }

  std::span<double> comp(int f) {
    return {values_.data() + offsets_[f], grid_->count(loc_, f)};
  }
  std::span<const double> comp(int f) const {
    return {values_.data() + offsets_[f], grid_->count(loc_, f)};
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  size_t size() const { return values_.size(); }

  double& at(int family, int i, int j, int k) {
    return values_[offsets_[family] + grid_->flat(loc_, family, i, j, k)];
  }
  double at(int family, int i, int j, int k) const {
    return values_[offsets_[family] + grid_->flat(loc_, family, i, j, k)];
  }

  void fill(double v) { std::fill(values_.begin(), values_.end(), v); }
  void scale(double s) {
    for (auto& v : values_) v *= s;
  }
  /// this += s * other (same layout required)
  void axpy(double s, const DiscreteField& other);

  /// Evaluates f(position, family) at every entity.
  void assign(const std::function<double(const Vec3&, int)>& f);

  bool all_finite() const;
  bool same_layout(const DiscreteField& other) const;

 private:
  GridPtr grid_;
  Location loc_ = Location::node;
  int ncomp_ = 0;
  std::array<size_t, 3> offsets_{0, 0, 0};
  std::vector<double> values_;
};

DiscreteField make_field(GridPtr grid, Location loc);

/// Constant vector field (location edge or face); scalar fields pass c[0].
DiscreteField constant_field(GridPtr grid, Location loc, const Vec3& c);

}  // namespace homog
