#pragma once

#include "homog/field.hpp"

namespace homog {

struct SpectralIdentityResult {
  double lhs;       // |grad psi|^2
  double rhs;       // |div psi|^2 + |curl psi|^2
  double residual;  // relative difference
};

/// Checks the periodic norm identity |grad psi|^2 = |div psi|^2 + |curl psi|^2
/// for a zero-mean vector field, using one Fourier wavenumber symbol in all
/// three operators so the identity is exact per mode. The mean is removed
/// internally.
SpectralIdentityResult spectral_identity_check(const DiscreteField& psi);

/// Returns the discretely divergence-free, zero-mean part of a periodic edge
/// field: subtracts the gradient of the periodic Poisson solve of the field's
/// divergence and removes the mean. Orthogonal projector (idempotent,
/// self-adjoint) with respect to the mimetic difference symbols.
DiscreteField helmholtz_project(const DiscreteField& edge_field);

/// FFT workspace bound to one periodic grid. Provides the gauge projection,
/// constant-coefficient inverses used as preconditioners, and the potential
/// reconstructions for the residual-field diagnostics.
class CellSpectral {
 public:
  explicit CellSpectral(GridPtr grid);
  ~CellSpectral();
  CellSpectral(const CellSpectral&) = delete;
  CellSpectral& operator=(const CellSpectral&) = delete;

  const GridPtr& grid() const { return grid_; }

  /// In-place Helmholtz projection of an edge field.
  void project_div_free(DiscreteField& e) const;

  /// y = P (abar * curl_star curl)^+ P r  on edge fields (pseudo-inverse on
  /// the divergence-free, zero-mean complement).
  DiscreteField inv_curl_curl(const DiscreteField& r, double abar) const;

  /// Zero-mean solve of  bbar * (-div_star grad) u = r  at nodes.
  DiscreteField inv_laplace_node(const DiscreteField& r, double bbar) const;

  /// Zero-mean cell potential with grad_star(pot) ~ G for a face field G
  /// that is curl_star-free with zero mean.
  DiscreteField cell_potential_from_face(const DiscreteField& G) const;

  /// Divergence-free zero-mean face potential with curl_star(pot) ~ g for an
  /// edge field g that is div_star-free with zero mean.
  DiscreteField face_potential_from_edge(const DiscreteField& g) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  GridPtr grid_;
};

/// Fast diagonalization on a bounded box: exact inverse of the
/// constant-coefficient operator restricted to the interior (masked)
/// subspace. Used as the "spectral-constant" preconditioner.
class BoxFdm {
 public:
  /// loc = edge: abar*curl_star(curl .) + bbar*(.) with PEC masking (3-D).
  /// loc = node: abar*(-div_star grad .) with Dirichlet masking (2-D or 3-D).
  BoxFdm(GridPtr grid, Location loc);
  ~BoxFdm();
  BoxFdm(const BoxFdm&) = delete;
  BoxFdm& operator=(const BoxFdm&) = delete;

  void solve(const DiscreteField& r, DiscreteField& y, double abar,
             double bbar) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace homog
