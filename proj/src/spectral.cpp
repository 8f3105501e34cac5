#include "homog/spectral.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>

#include "homog/ops.hpp"

namespace homog {

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

using cplx = std::complex<double>;

}  // namespace

// ---------------------------------------------------------------------------
// CellSpectral: complex FFTs on periodic grids (one shape for all locations)

struct CellSpectral::Impl {
  Int3 n;
  Vec3 h;
  size_t N = 0;
  fftw_plan fwd = nullptr, bwd = nullptr;
  cplx* buf = nullptr;

  explicit Impl(const StaggeredGrid& g) : n(g.res()), h(g.spacing()) {
    N = static_cast<size_t>(n[0]) * n[1] * n[2];
    std::lock_guard<std::mutex> lock(fftw_mutex());
    buf = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * N));
    auto* fb = reinterpret_cast<fftw_complex*>(buf);
    fwd = fftw_plan_dft_3d(n[0], n[1], n[2], fb, fb, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_3d(n[0], n[1], n[2], fb, fb, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }

  void forward(const double* src, cplx* dst) const {
    for (size_t i = 0; i < N; ++i) buf[i] = src[i];
    fftw_execute(fwd);
    std::memcpy(dst, buf, sizeof(cplx) * N);
  }
  void backward(const cplx* src, double* dst) const {
    std::memcpy(buf, src, sizeof(cplx) * N);
    fftw_execute(bwd);
    const double scale = 1.0 / static_cast<double>(N);
    for (size_t i = 0; i < N; ++i) dst[i] = buf[i].real() * scale;
  }

  /// Forward-difference symbol per axis at mode index m.
  cplx dsym(int axis, int m) const {
    double th = 2.0 * M_PI * m / n[axis];
    return (cplx(std::cos(th), std::sin(th)) - 1.0) / h[axis];
  }
};

CellSpectral::CellSpectral(GridPtr grid) : grid_(std::move(grid)) {
  require(grid_->periodic(), "CellSpectral: periodic grids only");
  impl_ = std::make_unique<Impl>(*grid_);
}
CellSpectral::~CellSpectral() = default;

void CellSpectral::project_div_free(DiscreteField& e) const {
  require(e.location() == Location::edge, "project_div_free: edge fields only");
  const int dims = grid_->dims();
  const auto& im = *impl_;
  std::vector<cplx> hat(im.N * dims);
  for (int f = 0; f < dims; ++f) im.forward(e.comp(f).data(), hat.data() + im.N * f);
  size_t idx = 0;
  for (int i = 0; i < im.n[0]; ++i)
    for (int j = 0; j < im.n[1]; ++j)
      for (int k = 0; k < im.n[2]; ++k, ++idx) {
        if (i == 0 && j == 0 && k == 0) {
          for (int f = 0; f < dims; ++f) hat[im.N * f + idx] = 0.0;
          continue;
        }
        cplx d[3] = {im.dsym(0, i), im.dsym(1, j), im.dsym(2, k)};
        cplx s = 0.0;
        double d2 = 0.0;
        for (int f = 0; f < dims; ++f) {
          s += std::conj(d[f]) * hat[im.N * f + idx];
          d2 += std::norm(d[f]);
        }
        for (int f = 0; f < dims; ++f) hat[im.N * f + idx] -= d[f] * s / d2;
      }
  for (int f = 0; f < dims; ++f) im.backward(hat.data() + im.N * f, e.comp(f).data());
}

DiscreteField CellSpectral::inv_curl_curl(const DiscreteField& r, double abar) const {
  require(r.location() == Location::edge && grid_->dims() == 3,
          "inv_curl_curl: 3-D edge fields only");
  const auto& im = *impl_;
  std::vector<cplx> hat(im.N * 3);
  for (int f = 0; f < 3; ++f) im.forward(r.comp(f).data(), hat.data() + im.N * f);
  size_t idx = 0;
  for (int i = 0; i < im.n[0]; ++i)
    for (int j = 0; j < im.n[1]; ++j)
      for (int k = 0; k < im.n[2]; ++k, ++idx) {
        if (i == 0 && j == 0 && k == 0) {
          for (int f = 0; f < 3; ++f) hat[im.N * f + idx] = 0.0;
          continue;
        }
        cplx d[3] = {im.dsym(0, i), im.dsym(1, j), im.dsym(2, k)};
        double d2 = std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]);
        cplx s = 0.0;
        for (int f = 0; f < 3; ++f) s += std::conj(d[f]) * hat[im.N * f + idx];
        for (int f = 0; f < 3; ++f) {
          cplx v = hat[im.N * f + idx] - d[f] * s / d2;
          hat[im.N * f + idx] = v / (abar * d2);
        }
      }
  DiscreteField y(r.grid_ptr(), Location::edge);
  for (int f = 0; f < 3; ++f) im.backward(hat.data() + im.N * f, y.comp(f).data());
  return y;
}

DiscreteField CellSpectral::inv_laplace_node(const DiscreteField& r, double bbar) const {
  require(r.location() == Location::node, "inv_laplace_node: node fields only");
  const auto& im = *impl_;
  const int dims = grid_->dims();
  std::vector<cplx> hat(im.N);
  im.forward(r.comp(0).data(), hat.data());
  size_t idx = 0;
  for (int i = 0; i < im.n[0]; ++i)
    for (int j = 0; j < im.n[1]; ++j)
      for (int k = 0; k < im.n[2]; ++k, ++idx) {
        if (i == 0 && j == 0 && k == 0) {
          hat[idx] = 0.0;
          continue;
        }
        double d2 = std::norm(im.dsym(0, i)) + std::norm(im.dsym(1, j));
        if (dims == 3) d2 += std::norm(im.dsym(2, k));
        hat[idx] /= bbar * d2;
      }
  DiscreteField y(r.grid_ptr(), Location::node);
  im.backward(hat.data(), y.comp(0).data());
  return y;
}

DiscreteField CellSpectral::cell_potential_from_face(const DiscreteField& G) const {
  require(G.location() == Location::face && grid_->dims() == 3,
          "cell_potential_from_face: 3-D face fields only");
  const auto& im = *impl_;
  std::vector<cplx> hat(im.N * 3);
  for (int f = 0; f < 3; ++f) im.forward(G.comp(f).data(), hat.data() + im.N * f);
  std::vector<cplx> pot(im.N);
  size_t idx = 0;
  for (int i = 0; i < im.n[0]; ++i)
    for (int j = 0; j < im.n[1]; ++j)
      for (int k = 0; k < im.n[2]; ++k, ++idx) {
        if (i == 0 && j == 0 && k == 0) {
          pot[idx] = 0.0;
          continue;
        }
        cplx d[3] = {im.dsym(0, i), im.dsym(1, j), im.dsym(2, k)};
        double d2 = std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]);
        cplx divg = d[0] * hat[idx] + d[1] * hat[im.N + idx] + d[2] * hat[2 * im.N + idx];
        pot[idx] = -divg / d2;
      }
  DiscreteField out(G.grid_ptr(), Location::cell);
  im.backward(pot.data(), out.comp(0).data());
  return out;
}

DiscreteField CellSpectral::face_potential_from_edge(const DiscreteField& g) const {
  require(g.location() == Location::edge && grid_->dims() == 3,
          "face_potential_from_edge: 3-D edge fields only");
  const auto& im = *impl_;
  std::vector<cplx> hat(im.N * 3), pot(im.N * 3);
  for (int f = 0; f < 3; ++f) im.forward(g.comp(f).data(), hat.data() + im.N * f);
  size_t idx = 0;
  for (int i = 0; i < im.n[0]; ++i)
    for (int j = 0; j < im.n[1]; ++j)
      for (int k = 0; k < im.n[2]; ++k, ++idx) {
        if (i == 0 && j == 0 && k == 0) {
          for (int f = 0; f < 3; ++f) pot[im.N * f + idx] = 0.0;
          continue;
        }
        cplx d[3] = {im.dsym(0, i), im.dsym(1, j), im.dsym(2, k)};
        double d2 = std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]);
        // pot = (d x ghat) / |d|^2 ; then curl_star(pot) = ghat and div(pot) = 0
        cplx gh[3] = {hat[idx], hat[im.N + idx], hat[2 * im.N + idx]};
        pot[idx] = (d[1] * gh[2] - d[2] * gh[1]) / d2;
        pot[im.N + idx] = (d[2] * gh[0] - d[0] * gh[2]) / d2;
        pot[2 * im.N + idx] = (d[0] * gh[1] - d[1] * gh[0]) / d2;
      }
  DiscreteField out(g.grid_ptr(), Location::face);
  for (int f = 0; f < 3; ++f) im.backward(pot.data() + im.N * f, out.comp(f).data());
  return out;
}

DiscreteField helmholtz_project(const DiscreteField& e) {
  require(e.grid().periodic(), "helmholtz_project: periodic grids only");
  CellSpectral sp(e.grid_ptr());
  DiscreteField out = e;
  sp.project_div_free(out);
  return out;
}

SpectralIdentityResult spectral_identity_check(const DiscreteField& psi) {
  const auto& g = psi.grid();
  require(g.periodic(), "spectral_identity_check: periodic grids only");
  require(psi.components() == g.dims(),
          "spectral_identity_check: vector field required");
  // True wavenumbers 2*pi*freq/extent in all three operators.
  Int3 n = g.res();
  size_t N = static_cast<size_t>(n[0]) * n[1] * n[2];
  const int dims = g.dims();
  std::vector<cplx> hat(N * 3, cplx(0, 0));
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto* buf = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * N));
    auto* fb = reinterpret_cast<fftw_complex*>(buf);
    fftw_plan plan =
        fftw_plan_dft_3d(n[0], n[1], n[2], fb, fb, FFTW_FORWARD, FFTW_ESTIMATE);
    for (int f = 0; f < dims; ++f) {
      auto src = psi.comp(f);
      for (size_t i = 0; i < N; ++i) buf[i] = src[i];
      fftw_execute(plan);
      std::memcpy(hat.data() + N * f, buf, sizeof(cplx) * N);
    }
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  auto freq = [&](int axis, int m) {
    int f = m <= n[axis] / 2 ? m : m - n[axis];
    return 2.0 * M_PI * f / (g.hi()[axis] - g.lo()[axis]);
  };
  KahanSum lhs_s, div_s, curl_s;
  size_t idx = 0;
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j)
      for (int k = 0; k < n[2]; ++k, ++idx) {
        if (i == 0 && j == 0 && k == 0) continue;  // removes the mean
        double kv[3] = {freq(0, i), freq(1, j), dims == 3 ? freq(2, k) : 0.0};
        cplx ph[3] = {hat[idx], hat[N + idx], hat[2 * N + idx]};
        double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
        double p2 = std::norm(ph[0]) + std::norm(ph[1]) + std::norm(ph[2]);
        lhs_s.add(k2 * p2);
        cplx dv = kv[0] * ph[0] + kv[1] * ph[1] + kv[2] * ph[2];
        div_s.add(std::norm(dv));
        cplx cx = kv[1] * ph[2] - kv[2] * ph[1];
        cplx cy = kv[2] * ph[0] - kv[0] * ph[2];
        cplx cz = kv[0] * ph[1] - kv[1] * ph[0];
        curl_s.add(std::norm(cx) + std::norm(cy) + std::norm(cz));
      }
  double vol = 1.0;
  for (int a = 0; a < dims; ++a) vol *= g.hi()[a] - g.lo()[a];
  double scale = vol / (static_cast<double>(N) * static_cast<double>(N));
  SpectralIdentityResult res;
  res.lhs = lhs_s.value() * scale;
  res.rhs = (div_s.value() + curl_s.value()) * scale;
  double den = std::max({std::abs(res.lhs), std::abs(res.rhs), 1e-300});
  res.residual = std::abs(res.lhs - res.rhs) / den;
  return res;
}

// ---------------------------------------------------------------------------
// BoxFdm: sine/cosine diagonalization on bounded boxes

struct BoxFdm::Impl {
  GridPtr grid;
  Location loc;
  int dims;
  Int3 n;
  Vec3 h;
  // One work array + plan pair per family.
  std::array<std::vector<double>, 3> work;
  std::array<Int3, 3> wshape;
  std::array<fftw_plan, 3> fwd{nullptr, nullptr, nullptr};
  std::array<fftw_plan, 3> bwd{nullptr, nullptr, nullptr};
  double norm = 1.0;

  Impl(GridPtr g, Location l) : grid(std::move(g)), loc(l) {
    dims = grid->dims();
    n = grid->res();
    h = grid->spacing();
    std::lock_guard<std::mutex> lock(fftw_mutex());
    norm = 1.0;
    for (int a = 0; a < dims; ++a) norm *= 2.0 * n[a];
    if (loc == Location::edge) {
      require(dims == 3, "BoxFdm: edge variant is 3-D");
      for (int f = 0; f < 3; ++f) {
        Int3 s;
        fftw_r2r_kind kf[3], kb[3];
        for (int a = 0; a < 3; ++a) {
          if (a == f) {
            s[a] = n[a];
            kf[a] = FFTW_REDFT10;
            kb[a] = FFTW_REDFT01;
          } else {
            s[a] = n[a] - 1;
            kf[a] = FFTW_RODFT00;
            kb[a] = FFTW_RODFT00;
          }
        }
        wshape[f] = s;
        work[f].assign(static_cast<size_t>(s[0]) * s[1] * s[2], 0.0);
        fwd[f] = fftw_plan_r2r_3d(s[0], s[1], s[2], work[f].data(), work[f].data(),
                                  kf[0], kf[1], kf[2], FFTW_ESTIMATE);
        bwd[f] = fftw_plan_r2r_3d(s[0], s[1], s[2], work[f].data(), work[f].data(),
                                  kb[0], kb[1], kb[2], FFTW_ESTIMATE);
      }
    } else {
      require(loc == Location::node, "BoxFdm: node or edge locations only");
      Int3 s{n[0] - 1, n[1] - 1, dims == 3 ? n[2] - 1 : 1};
      wshape[0] = s;
      work[0].assign(static_cast<size_t>(s[0]) * s[1] * s[2], 0.0);
      if (dims == 3) {
        fwd[0] = fftw_plan_r2r_3d(s[0], s[1], s[2], work[0].data(), work[0].data(),
                                  FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00,
                                  FFTW_ESTIMATE);
        bwd[0] = fwd[0];
      } else {
        fwd[0] = fftw_plan_r2r_2d(s[0], s[1], work[0].data(), work[0].data(),
                                  FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        bwd[0] = fwd[0];
      }
    }
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    for (int f = 0; f < 3; ++f) {
      if (fwd[f]) fftw_destroy_plan(fwd[f]);
      if (bwd[f] && bwd[f] != fwd[f]) fftw_destroy_plan(bwd[f]);
    }
  }

  double sigma(int axis, int m) const {
    return (2.0 / h[axis]) * std::sin(M_PI * m / (2.0 * n[axis]));
  }

  // Gather interior dofs of family f into the dense work array (projection:
  // boundary/exterior dofs read as zero via the interior-status test).
  void gather(const DiscreteField& r, int f) {
    Int3 fs = grid->shape(loc, f);
    const auto& st = grid->status_array(loc, f);
    auto v = r.comp(f);
    Int3 s = wshape[f];
    Int3 off{0, 0, 0};
    for (int a = 0; a < 3; ++a)
      if (s[a] == n[a] - 1) off[a] = 1;
    size_t widx = 0;
    for (int i = 0; i < s[0]; ++i)
      for (int j = 0; j < s[1]; ++j)
        for (int k = 0; k < s[2]; ++k, ++widx) {
          size_t fidx = (static_cast<size_t>(i + off[0]) * fs[1] + (j + off[1])) * fs[2] +
                        (k + off[2]);
          work[f][widx] =
              st[fidx] == static_cast<uint8_t>(EntityStatus::interior) ? v[fidx] : 0.0;
        }
  }
  void scatter(DiscreteField& y, int f) const {
    Int3 fs = grid->shape(loc, f);
    const auto& st = grid->status_array(loc, f);
    auto v = y.comp(f);
    std::fill(v.begin(), v.end(), 0.0);
    Int3 s = wshape[f];
    Int3 off{0, 0, 0};
    for (int a = 0; a < 3; ++a)
      if (s[a] == n[a] - 1) off[a] = 1;
    size_t widx = 0;
    for (int i = 0; i < s[0]; ++i)
      for (int j = 0; j < s[1]; ++j)
        for (int k = 0; k < s[2]; ++k, ++widx) {
          size_t fidx = (static_cast<size_t>(i + off[0]) * fs[1] + (j + off[1])) * fs[2] +
                        (k + off[2]);
          if (st[fidx] == static_cast<uint8_t>(EntityStatus::interior))
            v[fidx] = work[f][widx] / norm;
        }
  }
};

BoxFdm::BoxFdm(GridPtr grid, Location loc) {
  require(grid->topology() == Topology::bounded, "BoxFdm: bounded grids only");
  impl_ = std::make_unique<Impl>(std::move(grid), loc);
}
BoxFdm::~BoxFdm() = default;

void BoxFdm::solve(const DiscreteField& r, DiscreteField& y, double abar,
                   double bbar) const {
  auto& im = *impl_;
  if (im.loc == Location::node) {
    im.gather(r, 0);
    fftw_execute(im.fwd[0]);
    Int3 s = im.wshape[0];
    size_t idx = 0;
    for (int i = 0; i < s[0]; ++i)
      for (int j = 0; j < s[1]; ++j)
        for (int k = 0; k < s[2]; ++k, ++idx) {
          double sx = im.sigma(0, i + 1), sy = im.sigma(1, j + 1);
          double lam = sx * sx + sy * sy;
          if (im.dims == 3) {
            double sz = im.sigma(2, k + 1);
            lam += sz * sz;
          }
          im.work[0][idx] /= abar * lam + bbar;
        }
    fftw_execute(im.bwd[0]);
    im.scatter(y, 0);
    return;
  }
  // Edge (Maxwell) variant.
  for (int f = 0; f < 3; ++f) {
    im.gather(r, f);
    fftw_execute(im.fwd[f]);
  }
  // Per-mode 3x3 solve: x = (r + (abar/bbar) sig (sig.r)) / (abar|sig|^2 + bbar),
  // with components absent when a transverse (sine) index is zero.
  Int3 nn = im.n;
  auto widx = [&](int f, Int3 m) -> long {
    // m holds mode indices (cos index on the own axis, sine index elsewhere);
    // returns -1 when the component is absent for this mode triple.
    Int3 s = im.wshape[f];
    Int3 a;
    for (int ax = 0; ax < 3; ++ax) {
      if (ax == f) {
        a[ax] = m[ax];
      } else {
        if (m[ax] == 0) return -1;
        a[ax] = m[ax] - 1;
      }
      if (a[ax] < 0 || a[ax] >= s[ax]) return -1;
    }
    return (static_cast<long>(a[0]) * s[1] + a[1]) * s[2] + a[2];
  };
  for (int p = 0; p < nn[0]; ++p)
    for (int q = 0; q < nn[1]; ++q)
      for (int t = 0; t < nn[2]; ++t) {
        Int3 m{p, q, t};
        long ix = widx(0, m), iy = widx(1, m), iz = widx(2, m);
        if (ix < 0 && iy < 0 && iz < 0) continue;
        double sig[3] = {im.sigma(0, p), im.sigma(1, q), im.sigma(2, t)};
        double rv[3] = {ix >= 0 ? im.work[0][ix] : 0.0,
                        iy >= 0 ? im.work[1][iy] : 0.0,
                        iz >= 0 ? im.work[2][iz] : 0.0};
        double s2 = sig[0] * sig[0] + sig[1] * sig[1] + sig[2] * sig[2];
        double sr = sig[0] * rv[0] + sig[1] * rv[1] + sig[2] * rv[2];
        double den = abar * s2 + bbar;
        double coef = (abar / bbar) * sr;
        if (ix >= 0) im.work[0][ix] = (rv[0] + coef * sig[0]) / den;
        if (iy >= 0) im.work[1][iy] = (rv[1] + coef * sig[1]) / den;
        if (iz >= 0) im.work[2][iz] = (rv[2] + coef * sig[2]) / den;
      }
  for (int f = 0; f < 3; ++f) {
    fftw_execute(im.bwd[f]);
    im.scatter(y, f);
  }
}

}  // namespace homog
