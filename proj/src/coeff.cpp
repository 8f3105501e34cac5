#include "homog/coeff.hpp"

#include <cmath>
#include <sstream>

#include "homog/ops.hpp"

namespace homog {

namespace {

// Average the entities of one family that surround each cell. Edges average
// over 2^(d-1) entities, faces over 2.
void avg_to_cells(const DiscreteField& u, int fam, DiscreteField& cellavg) {
  const auto& g = u.grid();
  const bool edge = u.location() == Location::edge;
  Int3 cs = g.shape(Location::cell, 0);
  Int3 fs = g.shape(u.location(), fam);
  auto src = u.comp(fam);
  auto dst = cellavg.comp(0);
  const bool per = g.periodic();
  const int d = g.dims();
  size_t idx = 0;
  for (int i = 0; i < cs[0]; ++i)
    for (int j = 0; j < cs[1]; ++j)
      for (int k = 0; k < cs[2]; ++k, ++idx) {
        Int3 c{i, j, k};
        double acc = 0;
        int cnt = 0;
        // offsets: +1 along node-sampled axes of the entity family
        Int3 hi{0, 0, 0};
        for (int a = 0; a < d; ++a) {
          bool node_sampled = edge ? (a != fam) : (a == fam);
          hi[a] = node_sampled ? 1 : 0;
        }
        for (int oi = 0; oi <= hi[0]; ++oi)
          for (int oj = 0; oj <= hi[1]; ++oj)
            for (int ok = 0; ok <= hi[2]; ++ok) {
              Int3 e{c[0] + oi, c[1] + oj, c[2] + ok};
              if (per)
                for (int a = 0; a < 3; ++a) e[a] = imod(e[a], fs[a]);
              acc += src[(static_cast<size_t>(e[0]) * fs[1] + e[1]) * fs[2] + e[2]];
              ++cnt;
            }
        dst[idx] = acc / cnt;
      }
}

// v_fam += scale * AVG_fam^T (w_c * cellvals) / w_e  (transpose of the
// averaging above, with the quadrature weight ratio).
void scatter_from_cells(const DiscreteField& cellvals, double scale, int fam,
                        DiscreteField& v) {
  const auto& g = v.grid();
  const bool edge = v.location() == Location::edge;
  Int3 cs = g.shape(Location::cell, 0);
  Int3 fs = g.shape(v.location(), fam);
  auto src = cellvals.comp(0);
  auto dst = v.comp(fam);
  const bool per = g.periodic();
  const int d = g.dims();
  Int3 hi{0, 0, 0};
  int cnt = 1;
  for (int a = 0; a < d; ++a) {
    bool node_sampled = edge ? (a != fam) : (a == fam);
    hi[a] = node_sampled ? 1 : 0;
    if (node_sampled) cnt *= 2;
  }
  const bool weighted = !per;
  size_t idx = 0;
  for (int i = 0; i < cs[0]; ++i)
    for (int j = 0; j < cs[1]; ++j)
      for (int k = 0; k < cs[2]; ++k, ++idx) {
        double wc = weighted ? g.weight(Location::cell, 0, idx) : 1.0;
        double val = scale * wc * src[idx] / cnt;
        Int3 c{i, j, k};
        for (int oi = 0; oi <= hi[0]; ++oi)
          for (int oj = 0; oj <= hi[1]; ++oj)
            for (int ok = 0; ok <= hi[2]; ++ok) {
              Int3 e{c[0] + oi, c[1] + oj, c[2] + ok};
              if (per)
                for (int a = 0; a < 3; ++a) e[a] = imod(e[a], fs[a]);
              dst[(static_cast<size_t>(e[0]) * fs[1] + e[1]) * fs[2] + e[2]] += val;
            }
      }
}

}  // namespace

Mat3 mat3_identity(double s) {
  return {s, 0, 0, 0, s, 0, 0, 0, s};
}

Mat3 mat3_from_sym(const SymMat3& m) {
  return {m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1),
          m(1, 2), m(2, 0), m(2, 1), m(2, 2)};
}

SymMat3 sym_part(const Mat3& m) {
  SymMat3 s;
  for (int i = 0; i < 3; ++i) s.a[i] = m[i * 3 + i];
  s.a[3] = 0.5 * (m[1] + m[3]);
  s.a[4] = 0.5 * (m[2] + m[6]);
  s.a[5] = 0.5 * (m[5] + m[7]);
  return s;
}

double max_asymmetry(const Mat3& m) {
  return std::max({std::abs(m[1] - m[3]), std::abs(m[2] - m[6]),
                   std::abs(m[5] - m[7])});
}

const char* to_string(CoeffFamily f) {
  switch (f) {
    case CoeffFamily::constant: return "constant";
    case CoeffFamily::laminate: return "laminate";
    case CoeffFamily::trig: return "trig";
    case CoeffFamily::checkerboard: return "checkerboard";
    case CoeffFamily::composite: return "composite";
  }
  return "?";
}

CoefficientModel CoefficientModel::constant(const Mat3& m) {
  CoefficientModel c;
  c.family_ = CoeffFamily::constant;
  c.cmat_ = m;
  c.compute_bounds();
  return c;
}

CoefficientModel CoefficientModel::identity(double s) {
  return constant(mat3_identity(s));
}

CoefficientModel CoefficientModel::laminate(int axis, double v1, double v2,
                                            double fraction) {
  require(v1 > 0 && v2 > 0, "laminate: values must be positive");
  require(fraction > 0 && fraction < 1, "laminate: fraction in (0,1)");
  CoefficientModel c;
  c.family_ = CoeffFamily::laminate;
  c.axis_ = axis;
  c.v1_ = v1;
  c.v2_ = v2;
  c.fraction_ = fraction;
  c.compute_bounds();
  return c;
}

CoefficientModel CoefficientModel::trig(double base, double amplitude, int axis,
                                        int freq) {
  require(base - std::abs(amplitude) > 0, "trig: coefficient must stay positive");
  CoefficientModel c;
  c.family_ = CoeffFamily::trig;
  c.base_val_ = base;
  c.amp_ = amplitude;
  c.axis_ = axis;
  c.freq_ = freq;
  c.compute_bounds();
  return c;
}

CoefficientModel CoefficientModel::checkerboard(double v1, double v2) {
  require(v1 > 0 && v2 > 0, "checkerboard: values must be positive");
  CoefficientModel c;
  c.family_ = CoeffFamily::checkerboard;
  c.v1_ = v1;
  c.v2_ = v2;
  c.compute_bounds();
  return c;
}

CoefficientModel CoefficientModel::composite(CoefficientModel base, double s0,
                                             double s1, int axis) {
  require(base.family_ != CoeffFamily::composite, "composite: no nesting");
  require(s0 > 0 && s0 + s1 > 0, "composite: modulation must stay positive on [0,1]");
  CoefficientModel c;
  c.family_ = CoeffFamily::composite;
  c.base_ = std::make_shared<CoefficientModel>(std::move(base));
  c.s0_ = s0;
  c.s1_ = s1;
  c.axis_ = axis;
  c.compute_bounds();
  return c;
}

void CoefficientModel::compute_bounds() {
  switch (family_) {
    case CoeffFamily::constant: {
      auto r = sym_part(cmat_).eig_range(3);
      c1_ = r[0];
      c2_ = r[1];
      break;
    }
    case CoeffFamily::laminate:
    case CoeffFamily::checkerboard:
      c1_ = std::min(v1_, v2_);
      c2_ = std::max(v1_, v2_);
      break;
    case CoeffFamily::trig:
      c1_ = base_val_ - std::abs(amp_);
      c2_ = base_val_ + std::abs(amp_);
      break;
    case CoeffFamily::composite: {
      double smin = std::min(s0_, s0_ + s1_);
      double smax = std::max(s0_, s0_ + s1_);
      c1_ = smin * base_->c1_;
      c2_ = smax * base_->c2_;
      break;
    }
  }
}

double CoefficientModel::modulation(const Vec3& x) const {
  if (family_ != CoeffFamily::composite) return 1.0;
  return s0_ + s1_ * x[axis_];
}

Mat3 CoefficientModel::eval(const Vec3& x, const Vec3& y) const {
  switch (family_) {
    case CoeffFamily::constant:
      return cmat_;
    case CoeffFamily::laminate: {
      double f = frac01(y[axis_]);
      return mat3_identity(f < fraction_ ? v1_ : v2_);
    }
    case CoeffFamily::trig:
      return mat3_identity(base_val_ +
                           amp_ * std::sin(2.0 * M_PI * freq_ * frac01(y[axis_])));
    case CoeffFamily::checkerboard: {
      int parity = 0;
      for (int a = 0; a < 3; ++a) parity += frac01(y[a]) < 0.5 ? 0 : 1;
      return mat3_identity(parity % 2 == 0 ? v1_ : v2_);
    }
    case CoeffFamily::composite: {
      Mat3 m = base_->eval(x, y);
      double s = modulation(x);
      for (auto& v : m) v *= s;
      return m;
    }
  }
  return mat3_identity();
}

bool CoefficientModel::isotropic() const {
  switch (family_) {
    case CoeffFamily::constant:
      return cmat_[1] == 0 && cmat_[2] == 0 && cmat_[3] == 0 && cmat_[5] == 0 &&
             cmat_[6] == 0 && cmat_[7] == 0 && cmat_[0] == cmat_[4] &&
             cmat_[4] == cmat_[8];
    case CoeffFamily::composite:
      return base_->isotropic();
    default:
      return true;
  }
}

std::string CoefficientModel::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  switch (family_) {
    case CoeffFamily::constant:
      os << "(" << cmat_[0] << "," << cmat_[4] << "," << cmat_[8] << ")";
      break;
    case CoeffFamily::laminate:
      os << "(axis=" << axis_ << "," << v1_ << "/" << v2_ << ",f=" << fraction_ << ")";
      break;
    case CoeffFamily::trig:
      os << "(" << base_val_ << "+" << amp_ << " sin 2pi*" << freq_ << " y" << axis_ << ")";
      break;
    case CoeffFamily::checkerboard:
      os << "(" << v1_ << "/" << v2_ << ")";
      break;
    case CoeffFamily::composite:
      os << "(" << s0_ << "+" << s1_ << " x" << axis_ << ")*" << base_->describe();
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

SampledCoefficient::SampledCoefficient(const CoefficientModel& m, GridPtr g)
    : model_(m), grid_(std::move(g)) {}

Vec3 SampledCoefficient::sample_point_y(const Vec3& pos) const {
  if (cell_mode_) {
    // cell grid coordinates are the fast variable y itself
    Vec3 y;
    for (int a = 0; a < 3; ++a)
      y[a] = (pos[a] - grid_->lo()[a]) / (grid_->hi()[a] - grid_->lo()[a]);
    return y;
  }
  return {frac01(pos[0] / eps_), frac01(pos[1] / eps_), frac01(pos[2] / eps_)};
}

void SampledCoefficient::fill() {
  const auto& g = *grid_;
  const bool xdep = model_.x_dependent();
  if (model_.family() == CoeffFamily::constant ||
      (model_.family() == CoeffFamily::composite &&
       model_.base()->family() == CoeffFamily::constant && !xdep)) {
    uniform_ = true;
    umat_ = model_.eval(x_, {0, 0, 0});
    diagonal_ =
        umat_[1] == 0 && umat_[2] == 0 && umat_[3] == 0 && umat_[5] == 0 &&
        umat_[6] == 0 && umat_[7] == 0;
    return;
  }
  if (model_.family() == CoeffFamily::composite &&
      model_.base()->family() == CoeffFamily::constant) {
    const Mat3& bm = model_.base()->constant_matrix();
    require(bm[1] == 0 && bm[2] == 0 && bm[3] == 0 && bm[5] == 0 && bm[6] == 0 &&
                bm[7] == 0,
            "sample: x-modulated non-diagonal matrices are not supported");
  }
  auto fill_loc = [&](Location loc, std::array<std::vector<double>, 3>& dst) {
    for (int f = 0; f < g.dims(); ++f) {
      Int3 s = g.shape(loc, f);
      dst[f].resize(g.count(loc, f));
      size_t idx = 0;
      for (int i = 0; i < s[0]; ++i)
        for (int j = 0; j < s[1]; ++j)
          for (int k = 0; k < s[2]; ++k, ++idx) {
            Vec3 pos = g.position(loc, f, i, j, k);
            Vec3 xx = cell_mode_ ? x_ : pos;
            Mat3 m = model_.eval(xx, sample_point_y(pos));
            dst[f][idx] = m[f * 3 + f];
          }
    }
  };
  fill_loc(Location::edge, edge_diag_);
  if (g.dims() == 3) fill_loc(Location::face, face_diag_);
  diagonal_ = true;  // variable built-in families are diagonal by construction
}

SampledCoefficient SampledCoefficient::on_cell(const CoefficientModel& m,
                                               const Vec3& x, GridPtr cell_grid) {
  require(cell_grid->periodic(), "sample_on_cell: cell grid must be periodic");
  SampledCoefficient s(m, std::move(cell_grid));
  s.cell_mode_ = true;
  s.x_ = x;
  s.fill();
  return s;
}

SampledCoefficient SampledCoefficient::epsilon(const CoefficientModel& m,
                                               GridPtr domain_grid, double eps) {
  require(eps > 0, "sample_epsilon: eps must be positive");
  SampledCoefficient s(m, std::move(domain_grid));
  s.cell_mode_ = false;
  s.eps_ = eps;
  s.fill();
  return s;
}

Mat3 SampledCoefficient::full_at(Location loc, int family, int i, int j,
                                 int k) const {
  Vec3 pos = grid_->position(loc, family, i, j, k);
  Vec3 xx = cell_mode_ ? x_ : pos;
  return model_.eval(xx, sample_point_y(pos));
}

double SampledCoefficient::mean_edge_diag() const {
  if (uniform_) return (umat_[0] + umat_[4] + umat_[8]) / 3.0;
  KahanSum s;
  size_t n = 0;
  for (int f = 0; f < grid_->dims(); ++f) {
    for (double v : edge_diag_[f]) s.add(v);
    n += edge_diag_[f].size();
  }
  return s.value() / static_cast<double>(n);
}

double SampledCoefficient::mean_face_diag() const {
  if (uniform_) return (umat_[0] + umat_[4] + umat_[8]) / 3.0;
  KahanSum s;
  size_t n = 0;
  for (int f = 0; f < grid_->dims(); ++f) {
    for (double v : face_diag_[f]) s.add(v);
    n += face_diag_[f].size();
  }
  return s.value() / static_cast<double>(n);
}

BoundsEstimate estimate_bounds(const SampledCoefficient& s) {
  const auto& g = *s.grid();
  double lo = std::numeric_limits<double>::max();
  double hi = -lo;
  bool any = false;
  auto scan = [&](Location loc) {
    for (int f = 0; f < g.dims(); ++f) {
      Int3 sh = g.shape(loc, f);
      for (int i = 0; i < sh[0]; ++i)
        for (int j = 0; j < sh[1]; ++j)
          for (int k = 0; k < sh[2]; ++k) {
            Mat3 m = s.full_at(loc, f, i, j, k);
            if (s.model().declared_symmetric() && max_asymmetry(m) > 0)
              fail("estimate_bounds: asymmetric sample from a symmetric model");
            auto r = sym_part(m).eig_range(g.dims());
            lo = std::min(lo, r[0]);
            hi = std::max(hi, r[1]);
            any = true;
          }
      if (s.uniform()) return;  // one sample decides
    }
  };
  scan(Location::edge);
  if (g.dims() == 3 && !s.uniform()) scan(Location::face);
  require(any, "estimate_bounds: empty sample set");
  return {lo, hi};
}

DiscreteField apply_coeff(const SampledCoefficient& c, const DiscreteField& u) {
  const auto& g = u.grid();
  require(c.grid()->same_layout(g), "apply_coeff: grid mismatch");
  require(u.location() == Location::edge || u.location() == Location::face,
          "apply_coeff: vector fields only");
  DiscreteField v(u.grid_ptr(), u.location());
  const bool edge = u.location() == Location::edge;
  // Diagonal part, sampled at each entity's own location.
  for (int f = 0; f < u.components(); ++f) {
    auto src = u.comp(f);
    auto dst = v.comp(f);
    if (c.uniform()) {
      double d = c.uniform_matrix()[f * 3 + f];
      for (size_t i = 0; i < src.size(); ++i) dst[i] = d * src[i];
    } else {
      auto d = edge ? c.edge_diag(f) : c.face_diag(f);
      for (size_t i = 0; i < src.size(); ++i) dst[i] = d[i] * src[i];
    }
  }
  if (c.uniform() && !c.diagonal()) {
    // Cross terms for uniform full matrices: couple components through
    // adjacent-cell averages (symmetric because averaging operators are
    // mutual adjoints under the quadrature weights).
    const Mat3& M = c.uniform_matrix();
    const int d = g.dims();
    DiscreteField cellavg(u.grid_ptr(), Location::cell);
    DiscreteField cross(u.grid_ptr(), u.location());
    for (int fa = 0; fa < d; ++fa)
      for (int fb = 0; fb < d; ++fb) {
        if (fa == fb) continue;
        double m = M[fa * 3 + fb];
        if (m == 0) continue;
        avg_to_cells(u, fb, cellavg);
        scatter_from_cells(cellavg, m, fa, cross);
      }
    if (g.periodic()) {
      v.axpy(1.0, cross);
    } else {
      for (int f = 0; f < v.components(); ++f) {
        auto dst = v.comp(f);
        auto cr = cross.comp(f);
        for (size_t i = 0; i < dst.size(); ++i) {
          double we = g.weight(u.location(), f, i);
          if (we > 0) dst[i] += cr[i] / we;
        }
      }
    }
  }
  return v;
}

double coeff_energy(const SampledCoefficient& c, const DiscreteField& u,
                    const DiscreteField& v) {
  DiscreteField cu = apply_coeff(c, u);
  return inner_product(cu, v);
}

SampledCoefficient HomogenizedTensors::sample(GridPtr grid, bool use_a0) const {
  const SymMat3& t = use_a0 ? a0 : b0;
  CoefficientModel m = CoefficientModel::constant(mat3_from_sym(t));
  if (x_dependent) m = CoefficientModel::composite(std::move(m), s0, s1, axis);
  return SampledCoefficient::epsilon(m, std::move(grid), 1.0);
}

}  // namespace homog
