#include "homog/ops.hpp"

#include <cmath>

namespace homog {

namespace {

struct View {
  const double* p;
  Int3 s;
  size_t str[3];
  View(const DiscreteField& f, Location loc, int fam, const StaggeredGrid& g)
      : p(f.comp(fam).data()), s(g.shape(loc, fam)) {
    str[0] = static_cast<size_t>(s[1]) * s[2];
    str[1] = s[2];
    str[2] = 1;
  }
};

struct MutView {
  double* p;
  Int3 s;
  size_t str[3];
  MutView(DiscreteField& f, Location loc, int fam, const StaggeredGrid& g)
      : p(f.comp(fam).data()), s(g.shape(loc, fam)) {
    str[0] = static_cast<size_t>(s[1]) * s[2];
    str[1] = s[2];
    str[2] = 1;
  }
};

inline size_t at(const View& v, int i, int j, int k) {
  return i * v.str[0] + j * v.str[1] + k;
}

// Index of the +1 neighbor along axis, or SIZE_MAX when absent.
inline int next_index(int i, int n, bool periodic) {
  if (i + 1 < n) return i + 1;
  return periodic ? 0 : -1;
}
inline int prev_index(int i, bool periodic, int n) {
  if (i > 0) return i - 1;
  return periodic ? n - 1 : -1;
}

void zero_exterior(DiscreteField& f) {
  const auto& g = f.grid();
  if (g.periodic() || !g.masked()) return;
  for (int fam = 0; fam < f.components(); ++fam) {
    const auto& st = g.status_array(f.location(), fam);
    auto v = f.comp(fam);
    for (size_t i = 0; i < v.size(); ++i)
      if (st[i] == static_cast<uint8_t>(EntityStatus::exterior)) v[i] = 0.0;
  }
}

}  // namespace

DiscreteField grad(const DiscreteField& phi) {
  const auto& g = phi.grid();
  require(phi.location() == Location::node, "grad: input must be a node field");
  DiscreteField out(phi.grid_ptr(), Location::edge);
  const bool per = g.periodic();
  View n(phi, Location::node, 0, g);
  for (int f = 0; f < g.dims(); ++f) {
    MutView e(out, Location::edge, f, g);
    const double invh = 1.0 / g.spacing()[f];
    for (int i = 0; i < e.s[0]; ++i) {
      int ip = f == 0 ? next_index(i, n.s[0], per) : i;
      for (int j = 0; j < e.s[1]; ++j) {
        int jp = f == 1 ? next_index(j, n.s[1], per) : j;
        const double* tail = n.p + i * n.str[0] + j * n.str[1];
        const double* headrow = n.p + ip * n.str[0] + jp * n.str[1];
        double* o = e.p + i * e.str[0] + j * e.str[1];
        if (f == 2) {
          int nz = n.s[2];
          for (int k = 0; k + 1 < nz; ++k) o[k] = (tail[k + 1] - tail[k]) * invh;
          if (e.s[2] == nz) o[nz - 1] = (tail[0] - tail[nz - 1]) * invh;
        } else {
          for (int k = 0; k < e.s[2]; ++k) o[k] = (headrow[k] - tail[k]) * invh;
        }
      }
    }
  }
  zero_exterior(out);
  return out;
}

DiscreteField curl(const DiscreteField& e) {
  const auto& g = e.grid();
  require(g.dims() == 3, "curl: 3-D grids only (use curl2d in 2-D)");
  require(e.location() == Location::edge, "curl: input must be an edge field");
  DiscreteField out(e.grid_ptr(), Location::face);
  const bool per = g.periodic();
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3, b = (c + 2) % 3;
    MutView fc(out, Location::face, c, g);
    View eb(e, Location::edge, b, g);
    View ea(e, Location::edge, a, g);
    const double inva = 1.0 / g.spacing()[a], invb = 1.0 / g.spacing()[b];
    for (int i = 0; i < fc.s[0]; ++i)
      for (int j = 0; j < fc.s[1]; ++j)
        for (int k = 0; k < fc.s[2]; ++k) {
          Int3 idx{i, j, k};
          Int3 pa = idx, pb = idx;
          pa[a] = next_index(idx[a], eb.s[a], per);
          pb[b] = next_index(idx[b], ea.s[b], per);
          double dba = (eb.p[at(eb, pa[0], pa[1], pa[2])] -
                        eb.p[at(eb, i, j, k)]) * inva;
          double dab = (ea.p[at(ea, pb[0], pb[1], pb[2])] -
                        ea.p[at(ea, i, j, k)]) * invb;
          fc.p[at(fc, i, j, k)] = dba - dab;
        }
  }
  zero_exterior(out);
  return out;
}

DiscreteField curl2d(const DiscreteField& e) {
  const auto& g = e.grid();
  require(g.dims() == 2, "curl2d: 2-D grids only");
  require(e.location() == Location::edge, "curl2d: input must be an edge field");
  DiscreteField out(e.grid_ptr(), Location::cell);
  const bool per = g.periodic();
  MutView c(out, Location::cell, 0, g);
  View ex(e, Location::edge, 0, g);
  View ey(e, Location::edge, 1, g);
  const double invx = 1.0 / g.spacing()[0], invy = 1.0 / g.spacing()[1];
  for (int i = 0; i < c.s[0]; ++i) {
    int ip = next_index(i, ey.s[0], per);
    for (int j = 0; j < c.s[1]; ++j) {
      int jp = next_index(j, ex.s[1], per);
      double dxy = (ey.p[at(ey, ip, j, 0)] - ey.p[at(ey, i, j, 0)]) * invx;
      double dyx = (ex.p[at(ex, i, jp, 0)] - ex.p[at(ex, i, j, 0)]) * invy;
      c.p[at(c, i, j, 0)] = dxy - dyx;
    }
  }
  zero_exterior(out);
  return out;
}

DiscreteField div(const DiscreteField& f) {
  const auto& g = f.grid();
  require(g.dims() == 3, "div: 3-D grids only");
  require(f.location() == Location::face, "div: input must be a face field");
  DiscreteField out(f.grid_ptr(), Location::cell);
  const bool per = g.periodic();
  MutView c(out, Location::cell, 0, g);
  for (int a = 0; a < 3; ++a) {
    View fa(f, Location::face, a, g);
    const double inv = 1.0 / g.spacing()[a];
    for (int i = 0; i < c.s[0]; ++i)
      for (int j = 0; j < c.s[1]; ++j)
        for (int k = 0; k < c.s[2]; ++k) {
          Int3 p{i, j, k};
          p[a] = next_index(p[a], fa.s[a], per);
          c.p[at(c, i, j, k)] +=
              (fa.p[at(fa, p[0], p[1], p[2])] - fa.p[at(fa, i, j, k)]) * inv;
        }
  }
  zero_exterior(out);
  return out;
}

namespace {

// Weighted backward difference D_a^-(w g) evaluated on the output lattice,
// with out-of-range terms dropped (bounded) or wrapped (periodic).
// Weights are uniform on periodic grids and cancel there.
double wval(const View& v, const StaggeredGrid& g, Location loc, int fam,
            int i, int j, int k, bool weighted) {
  size_t idx = at(v, i, j, k);
  double x = v.p[idx];
  if (weighted) x *= g.weight(loc, fam, idx);
  return x;
}

}  // namespace

DiscreteField div_star(const DiscreteField& e) {
  const auto& g = e.grid();
  require(e.location() == Location::edge, "div_star: input must be an edge field");
  DiscreteField out(e.grid_ptr(), Location::node);
  const bool per = g.periodic();
  const bool weighted = !per;
  MutView n(out, Location::node, 0, g);
  for (int f = 0; f < g.dims(); ++f) {
    View ef(e, Location::edge, f, g);
    const double inv = 1.0 / g.spacing()[f];
    for (int i = 0; i < n.s[0]; ++i)
      for (int j = 0; j < n.s[1]; ++j)
        for (int k = 0; k < n.s[2]; ++k) {
          Int3 idx{i, j, k};
          double acc = 0;
          if (idx[f] < ef.s[f])
            acc += wval(ef, g, Location::edge, f, idx[0], idx[1], idx[2], weighted);
          Int3 pm = idx;
          pm[f] = prev_index(idx[f], per, ef.s[f]);
          if (pm[f] >= 0)
            acc -= wval(ef, g, Location::edge, f, pm[0], pm[1], pm[2], weighted);
          n.p[at(n, i, j, k)] += acc * inv;
        }
  }
  if (weighted) {
    auto v = out.comp(0);
    for (size_t idx = 0; idx < v.size(); ++idx) {
      double w = g.weight(Location::node, 0, idx);
      v[idx] = w > 0 ? v[idx] / w : 0.0;
    }
  }
  return out;
}

DiscreteField curl_star(const DiscreteField& f) {
  const auto& g = f.grid();
  require(g.dims() == 3, "curl_star: 3-D grids only");
  require(f.location() == Location::face, "curl_star: input must be a face field");
  DiscreteField out(f.grid_ptr(), Location::edge);
  const bool per = g.periodic();
  const bool weighted = !per;
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3, b = (c + 2) % 3;
    MutView ec(out, Location::edge, c, g);
    View fb(f, Location::face, b, g);
    View fa(f, Location::face, a, g);
    const double inva = 1.0 / g.spacing()[a], invb = 1.0 / g.spacing()[b];
    for (int i = 0; i < ec.s[0]; ++i)
      for (int j = 0; j < ec.s[1]; ++j)
        for (int k = 0; k < ec.s[2]; ++k) {
          Int3 idx{i, j, k};
          double acc = 0;
          // + D_a^-(w f_b)
          if (idx[a] < fb.s[a] && idx[b] < fb.s[b] && idx[c] < fb.s[c])
            acc += wval(fb, g, Location::face, b, idx[0], idx[1], idx[2], weighted) * inva;
          Int3 pm = idx;
          pm[a] = prev_index(idx[a], per, fb.s[a]);
          if (pm[a] >= 0 && pm[b] < fb.s[b] && pm[c] < fb.s[c])
            acc -= wval(fb, g, Location::face, b, pm[0], pm[1], pm[2], weighted) * inva;
          // - D_b^-(w f_a)
          if (idx[a] < fa.s[a] && idx[b] < fa.s[b] && idx[c] < fa.s[c])
            acc -= wval(fa, g, Location::face, a, idx[0], idx[1], idx[2], weighted) * invb;
          pm = idx;
          pm[b] = prev_index(idx[b], per, fa.s[b]);
          if (pm[b] >= 0 && pm[a] < fa.s[a] && pm[c] < fa.s[c])
            acc += wval(fa, g, Location::face, a, pm[0], pm[1], pm[2], weighted) * invb;
          ec.p[at(ec, i, j, k)] = acc;
        }
    if (weighted) {
      auto v = out.comp(c);
      for (size_t idx = 0; idx < v.size(); ++idx) {
        double w = g.weight(Location::edge, c, idx);
        v[idx] = w > 0 ? v[idx] / w : 0.0;
      }
    }
  }
  return out;
}

DiscreteField grad_star(const DiscreteField& cf) {
  const auto& g = cf.grid();
  require(g.dims() == 3, "grad_star: 3-D grids only");
  require(cf.location() == Location::cell, "grad_star: input must be a cell field");
  DiscreteField out(cf.grid_ptr(), Location::face);
  const bool per = g.periodic();
  const bool weighted = !per;
  View c(cf, Location::cell, 0, g);
  for (int a = 0; a < 3; ++a) {
    MutView fa(out, Location::face, a, g);
    const double inv = 1.0 / g.spacing()[a];
    for (int i = 0; i < fa.s[0]; ++i)
      for (int j = 0; j < fa.s[1]; ++j)
        for (int k = 0; k < fa.s[2]; ++k) {
          Int3 idx{i, j, k};
          double acc = 0;
          if (idx[a] < c.s[a])
            acc += wval(c, g, Location::cell, 0, idx[0], idx[1], idx[2], weighted);
          Int3 pm = idx;
          pm[a] = prev_index(idx[a], per, c.s[a]);
          if (pm[a] >= 0)
            acc -= wval(c, g, Location::cell, 0, pm[0], pm[1], pm[2], weighted);
          size_t o = at(fa, i, j, k);
          if (weighted) {
            double w = g.weight(Location::face, a, o);
            fa.p[o] = w > 0 ? acc * inv / w : 0.0;
          } else {
            fa.p[o] = acc * inv;
          }
        }
  }
  return out;
}

DiscreteField curl2d_star(const DiscreteField& cf) {
  const auto& g = cf.grid();
  require(g.dims() == 2, "curl2d_star: 2-D grids only");
  require(cf.location() == Location::cell, "curl2d_star: input must be a cell field");
  DiscreteField out(cf.grid_ptr(), Location::edge);
  const bool per = g.periodic();
  const bool weighted = !per;
  View c(cf, Location::cell, 0, g);
  // (C2* psi)_x = +D_y^-(w psi)/w_e ; (C2* psi)_y = -D_x^-(w psi)/w_e
  for (int f = 0; f < 2; ++f) {
    const int t = 1 - f;  // differencing axis
    const double sgn = (f == 0) ? 1.0 : -1.0;
    MutView ef(out, Location::edge, f, g);
    const double inv = 1.0 / g.spacing()[t];
    for (int i = 0; i < ef.s[0]; ++i)
      for (int j = 0; j < ef.s[1]; ++j) {
        Int3 idx{i, j, 0};
        double acc = 0;
        if (idx[t] < c.s[t] && idx[f] < c.s[f])
          acc += wval(c, g, Location::cell, 0, idx[0], idx[1], 0, weighted);
        Int3 pm = idx;
        pm[t] = prev_index(idx[t], per, c.s[t]);
        if (pm[t] >= 0 && pm[f] < c.s[f])
          acc -= wval(c, g, Location::cell, 0, pm[0], pm[1], 0, weighted);
        size_t o = at(ef, i, j, 0);
        if (weighted) {
          double w = g.weight(Location::edge, f, o);
          ef.p[o] = w > 0 ? sgn * acc * inv / w : 0.0;
        } else {
          ef.p[o] = sgn * acc * inv;
        }
      }
  }
  return out;
}

double inner_product(const DiscreteField& a, const DiscreteField& b) {
  require(a.same_layout(b) && a.location() == b.location(),
          "inner_product: grid/location mismatch");
  const auto& g = a.grid();
  KahanSum s;
  if (g.periodic()) {
    for (size_t i = 0; i < a.values().size(); ++i)
      s.add(a.values()[i] * b.values()[i]);
    return s.value() * g.cell_volume();
  }
  for (int fam = 0; fam < a.components(); ++fam) {
    auto va = a.comp(fam);
    auto vb = b.comp(fam);
    for (size_t i = 0; i < va.size(); ++i)
      s.add(g.weight(a.location(), fam, i) * va[i] * vb[i]);
  }
  return s.value();
}

double norm_l2(const DiscreteField& f) { return std::sqrt(inner_product(f, f)); }

double norm_hcurl(const DiscreteField& e) {
  require(e.location() == Location::edge, "norm_hcurl: edge fields only");
  DiscreteField c = e.grid().dims() == 3 ? curl(e) : curl2d(e);
  double a = inner_product(e, e), b = inner_product(c, c);
  return std::sqrt(a + b);
}

Vec3 mean(const DiscreteField& f) {
  const auto& g = f.grid();
  Vec3 m{0, 0, 0};
  for (int fam = 0; fam < f.components(); ++fam) {
    KahanSum num, den;
    auto v = f.comp(fam);
    for (size_t i = 0; i < v.size(); ++i) {
      double w = g.weight(f.location(), fam, i);
      num.add(w * v[i]);
      den.add(w);
    }
    m[fam] = den.value() > 0 ? num.value() / den.value() : 0.0;
  }
  return m;
}

void remove_mean(DiscreteField& f) {
  Vec3 m = mean(f);
  for (int fam = 0; fam < f.components(); ++fam) {
    auto v = f.comp(fam);
    for (auto& x : v) x -= m[fam];
  }
}

BoundaryMask::BoundaryMask(GridPtr grid, Location loc)
    : grid_(std::move(grid)), loc_(loc) {
  require(grid_->topology() == Topology::bounded,
          "BoundaryMask: bounded grids only");
}

void BoundaryMask::apply(DiscreteField& f) const {
  require(f.location() == loc_ && f.grid().same_layout(*grid_),
          "BoundaryMask: field layout mismatch");
  for (int fam = 0; fam < f.components(); ++fam) {
    const auto& st = grid_->status_array(loc_, fam);
    auto v = f.comp(fam);
    for (size_t i = 0; i < v.size(); ++i)
      if (st[i] != static_cast<uint8_t>(EntityStatus::interior)) v[i] = 0.0;
  }
}

bool BoundaryMask::is_zeroed(int family, size_t idx) const {
  return grid_->status_array(loc_, family)[idx] !=
         static_cast<uint8_t>(EntityStatus::interior);
}

}  // namespace homog
