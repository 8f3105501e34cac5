#pragma once

#include "homog/field.hpp"

namespace homog {

// Primal operators (forward differences). curl/grad/div satisfy
// curl(grad(.)) = 0 and div(curl(.)) = 0 exactly.
DiscreteField grad(const DiscreteField& node_field);        // node -> edge
DiscreteField curl(const DiscreteField& edge_field);        // edge -> face (3-D)
DiscreteField curl2d(const DiscreteField& edge_field);      // edge -> cell (2-D scalar curl)
DiscreteField div(const DiscreteField& face_field);         // face -> cell (3-D)

// Dual (adjoint) operators with the conventional continuum signs:
//   <grad p, u>  = -<p, div_star u>      edge -> node
//   <curl u, f>  =  <u, curl_star f>     face -> edge
//   <div f, c>   = -<f, grad_star c>     cell -> face
//   <curl2d u, c> = <u, curl2d_star c>   cell -> edge (2-D)
DiscreteField div_star(const DiscreteField& edge_field);
DiscreteField curl_star(const DiscreteField& face_field);
DiscreteField grad_star(const DiscreteField& cell_field);
DiscreteField curl2d_star(const DiscreteField& cell_field);

/// Midpoint-quadrature weighted inner product; exterior entities excluded.
double inner_product(const DiscreteField& a, const DiscreteField& b);
double norm_l2(const DiscreteField& f);
/// sqrt(|u|^2 + |curl u|^2) for edge fields (scalar curl in 2-D).
double norm_hcurl(const DiscreteField& edge_field);
/// Weighted mean per component over the occupied region.
Vec3 mean(const DiscreteField& f);
/// Subtracts the weighted mean from every component.
void remove_mean(DiscreteField& f);

/// Projection onto the homogeneous-boundary subspace of one stagger
/// location: zeroes boundary and exterior entities. Tangential boundary
/// edges realize the PEC condition; boundary nodes realize Dirichlet.
class BoundaryMask {
 public:
  BoundaryMask(GridPtr grid, Location loc);
  void apply(DiscreteField& f) const;
  bool is_zeroed(int family, size_t idx) const;
  const StaggeredGrid& grid() const { return *grid_; }
  Location location() const { return loc_; }

 private:
  GridPtr grid_;
  Location loc_;
};

}  // namespace homog
