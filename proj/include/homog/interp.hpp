#pragma once

#include "homog/field.hpp"

namespace homog {

/// Multilinear interpolation of one component of a field at a point, on the
/// component's own stagger lattice. Periodic grids wrap; bounded grids clamp
/// the stencil at the lattice ends.
double interpolate(const DiscreteField& f, int family, const Vec3& p);

/// All components interpolated at one point (scalar fields fill [0]).
Vec3 interpolate_vector(const DiscreteField& f, const Vec3& p);

}  // namespace homog
