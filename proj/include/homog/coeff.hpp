#pragma once

#include <memory>
#include <string>

#include "homog/field.hpp"

namespace homog {

/// Full 3x3 matrix, row-major (2-D models use the upper-left 2x2 block).
using Mat3 = std::array<double, 9>;

Mat3 mat3_identity(double s = 1.0);
Mat3 mat3_from_sym(const SymMat3& m);
SymMat3 sym_part(const Mat3& m);
double max_asymmetry(const Mat3& m);

enum class CoeffFamily : uint8_t {
  constant,
  laminate,
  trig,
  checkerboard,
  composite,
};

const char* to_string(CoeffFamily f);

/// Two-scale matrix coefficient a(x, y): one of the built-in parametric
/// families. Models are immutable value objects; evaluation is pure and
/// exactly periodic in y.
class CoefficientModel {
 public:
  static CoefficientModel constant(const Mat3& m);
  static CoefficientModel identity(double s = 1.0);
  /// scalar laminate: value v1 for frac(y[axis]) < fraction, else v2, times I
  static CoefficientModel laminate(int axis, double v1, double v2,
                                   double fraction = 0.5);
  /// (base + amplitude * sin(2 pi freq y[axis])) * I
  static CoefficientModel trig(double base, double amplitude, int axis = 0,
                               int freq = 1);
  /// 2^d-subcube checkerboard alternating v1/v2, times I
  static CoefficientModel checkerboard(double v1, double v2);
  /// (s0 + s1 * x[axis]) * base(y)
  static CoefficientModel composite(CoefficientModel base, double s0, double s1,
                                    int axis = 0);

  Mat3 eval(const Vec3& x, const Vec3& y) const;
  bool x_dependent() const { return family_ == CoeffFamily::composite && s1_ != 0; }
  bool isotropic() const;
  bool declared_symmetric() const { return symmetric_; }
  CoeffFamily family() const { return family_; }
  /// Declared ellipticity bounds over the unit box in x.
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  std::string describe() const;
  /// Scalar modulation s(x); 1 for y-only models.
  double modulation(const Vec3& x) const;
  const CoefficientModel* base() const { return base_.get(); }

  // parameter access for config round-trips
  int axis() const { return axis_; }
  double v1() const { return v1_; }
  double v2() const { return v2_; }
  double fraction() const { return fraction_; }
  double base_value() const { return base_val_; }
  double amplitude() const { return amp_; }
  int freq() const { return freq_; }
  double s0() const { return s0_; }
  double s1() const { return s1_; }
  const Mat3& constant_matrix() const { return cmat_; }

 private:
  CoefficientModel() = default;
  void compute_bounds();

  CoeffFamily family_ = CoeffFamily::constant;
  Mat3 cmat_ = mat3_identity();
  int axis_ = 0;
  double v1_ = 1, v2_ = 1, fraction_ = 0.5;
  double base_val_ = 2, amp_ = 1;
  int freq_ = 1;
  std::shared_ptr<const CoefficientModel> base_;
  double s0_ = 1, s1_ = 0;
  bool symmetric_ = true;
  double c1_ = 1, c2_ = 1;
};

/// Coefficient samples attached to the stagger locations the operators need:
/// edge midpoints (fields) and face centers (fluxes/curls). Storage is
/// compact: a single matrix for uniform models, per-entity own-axis diagonal
/// entries otherwise; cross terms are only supported for uniform matrices.
class SampledCoefficient {
 public:
  /// Cell sampling at fixed macro point x (periodic grid required).
  static SampledCoefficient on_cell(const CoefficientModel& m, const Vec3& x,
                                    GridPtr cell_grid);
  /// Two-scale sampling a(x_e, x_e/eps mod 1) on a domain grid.
  static SampledCoefficient epsilon(const CoefficientModel& m, GridPtr domain_grid,
                                    double eps);

  const GridPtr& grid() const { return grid_; }
  const CoefficientModel& model() const { return model_; }
  bool uniform() const { return uniform_; }
  const Mat3& uniform_matrix() const { return umat_; }
  bool diagonal() const { return diagonal_; }
  std::span<const double> edge_diag(int family) const { return edge_diag_[family]; }
  std::span<const double> face_diag(int family) const { return face_diag_[family]; }
  bool has_faces() const { return !face_diag_[0].empty() || uniform_; }

  /// Full matrix evaluated at one entity (streaming; used by diagnostics).
  Mat3 full_at(Location loc, int family, int i, int j, int k) const;

  double mean_edge_diag() const;
  double mean_face_diag() const;

 private:
  SampledCoefficient(const CoefficientModel& m, GridPtr g);
  void fill();
  Vec3 sample_point_y(const Vec3& pos) const;

  CoefficientModel model_;
  GridPtr grid_;
  bool cell_mode_ = true;  // fixed macro point vs two-scale
  Vec3 x_{0, 0, 0};
  double eps_ = 1;
  bool uniform_ = false;
  bool diagonal_ = true;
  Mat3 umat_ = mat3_identity();
  std::array<std::vector<double>, 3> edge_diag_;
  std::array<std::vector<double>, 3> face_diag_;
};

struct BoundsEstimate {
  double c1_est;
  double c2_est;
};

/// Min/max eigenvalue over every stored sample location (exact symmetric
/// eigensolve). Throws if a sample is asymmetric while the model declares
/// symmetry.
BoundsEstimate estimate_bounds(const SampledCoefficient& s);

/// b * u for edge fields / a * F for face fields, using the sampled
/// diagonal entries at each entity; uniform full matrices couple components
/// through adjacent-cell averaging, which keeps the bilinear form symmetric.
DiscreteField apply_coeff(const SampledCoefficient& c, const DiscreteField& u);

/// Quadrature of the coefficient bilinear form sum_e w_e (c u . v).
double coeff_energy(const SampledCoefficient& c, const DiscreteField& u,
                    const DiscreteField& v);

/// Homogenized tensors a0(x), b0(x). Built-in models produce either constant
/// tensors or a scalar C^1 modulation of constant base tensors; arbitrary
/// macro samples are kept for diagnostics.
struct HomogenizedTensors {
  SymMat3 a0 = SymMat3::identity();
  SymMat3 b0 = SymMat3::identity();
  bool x_dependent = false;
  double s0 = 1, s1 = 0;
  int axis = 0;
  std::vector<Vec3> sample_points;
  std::vector<SymMat3> a0_samples, b0_samples;

  double modulation(const Vec3& x) const {
    return x_dependent ? s0 + s1 * x[axis] : 1.0;
  }
  SymMat3 a0_at(const Vec3& x) const { return modulation(x) * a0; }
  SymMat3 b0_at(const Vec3& x) const { return modulation(x) * b0; }

  /// Materializes the tensors as coefficient samples on a solver grid.
  SampledCoefficient sample(GridPtr grid, bool use_a0) const;
};

}  // namespace homog
