#include "homog/grid.hpp"

#include <algorithm>
#include <cmath>

namespace homog {

const char* to_string(Location loc) {
  switch (loc) {
    case Location::node: return "node";
    case Location::edge: return "edge";
    case Location::face: return "face";
    case Location::cell: return "cell";
  }
  return "?";
}

std::array<double, 2> SymMat3::eig_range(int dims) const {
  if (dims == 2) {
    double tr = a[0] + a[1];
    double det = a[0] * a[1] - a[3] * a[3];
    double d = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    return {tr / 2 - d, tr / 2 + d};
  }
  // Closed-form symmetric 3x3 eigenvalues (trigonometric method).
  double p1 = a[3] * a[3] + a[4] * a[4] + a[5] * a[5];
  double q = (a[0] + a[1] + a[2]) / 3.0;
  if (p1 == 0.0) {
    double mn = std::min({a[0], a[1], a[2]});
    double mx = std::max({a[0], a[1], a[2]});
    return {mn, mx};
  }
  double p2 = (a[0] - q) * (a[0] - q) + (a[1] - q) * (a[1] - q) +
              (a[2] - q) * (a[2] - q) + 2 * p1;
  double p = std::sqrt(p2 / 6.0);
  // B = (A - q I) / p ; r = det(B)/2 clamped into [-1,1]
  double b00 = (a[0] - q) / p, b11 = (a[1] - q) / p, b22 = (a[2] - q) / p;
  double b01 = a[3] / p, b02 = a[4] / p, b12 = a[5] / p;
  double detb = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                b02 * (b01 * b12 - b11 * b02);
  double r = std::clamp(detb / 2.0, -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  double emax = q + 2 * p * std::cos(phi);
  double emin = q + 2 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  return {emin, emax};
}

SymMat3 operator*(double s, const SymMat3& m) {
  SymMat3 r = m;
  r *= s;
  return r;
}

StaggeredGrid::StaggeredGrid(int dims, Int3 resolution, Topology topology,
                             Vec3 lo, Vec3 hi, DomainKind kind,
                             std::vector<uint8_t> cell_mask)
    : dims_(dims), res_(resolution), topology_(topology), kind_(kind),
      lo_(lo), hi_(hi), cell_occ_(std::move(cell_mask)) {
  require(dims == 2 || dims == 3, "grid: dims must be 2 or 3");
  if (dims == 2) res_[2] = 1;
  cellvol_ = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (a >= dims) {
      h_[a] = 1.0;
      lo_[a] = 0.0;
      hi_[a] = 1.0;
      continue;
    }
    require(res_[a] >= 2, "grid: resolution must be >= 2 per axis");
    require(hi_[a] > lo_[a], "grid: extent must have positive measure");
    h_[a] = (hi_[a] - lo_[a]) / res_[a];
    cellvol_ *= h_[a];
  }
  if (!cell_occ_.empty()) {
    require(topology_ == Topology::bounded, "grid: mask requires bounded topology");
    require(cell_occ_.size() == count(Location::cell, 0),
            "grid: mask shape mismatch");
    if (std::all_of(cell_occ_.begin(), cell_occ_.end(),
                    [](uint8_t o) { return o != 0; }))
      cell_occ_.clear();
  }
  size_t nocc = 0;
  if (cell_occ_.empty())
    nocc = count(Location::cell, 0);
  else
    nocc = static_cast<size_t>(
        std::count_if(cell_occ_.begin(), cell_occ_.end(),
                      [](uint8_t o) { return o != 0; }));
  domainvol_ = cellvol_ * static_cast<double>(nocc);
  if (topology_ == Topology::bounded) classify_entities();
}

Int3 StaggeredGrid::shape(Location loc, int family) const {
  Int3 s = res_;
  if (topology_ == Topology::periodic) return s;
  for (int a = 0; a < dims_; ++a) {
    bool node_sampled = false;
    switch (loc) {
      case Location::node: node_sampled = true; break;
      case Location::edge: node_sampled = (a != family); break;
      case Location::face: node_sampled = (a == family); break;
      case Location::cell: node_sampled = false; break;
    }
    if (node_sampled) s[a] += 1;
  }
  return s;
}

size_t StaggeredGrid::count(Location loc, int family) const {
  Int3 s = shape(loc, family);
  return static_cast<size_t>(s[0]) * s[1] * s[2];
}

size_t StaggeredGrid::total_count(Location loc) const {
  size_t n = 0;
  for (int f = 0; f < families(loc); ++f) n += count(loc, f);
  return n;
}

Vec3 StaggeredGrid::stagger_offset(Location loc, int family) const {
  Vec3 o{0, 0, 0};
  for (int a = 0; a < dims_; ++a) {
    switch (loc) {
      case Location::node: break;
      case Location::edge: o[a] = (a == family) ? 0.5 : 0.0; break;
      case Location::face: o[a] = (a == family) ? 0.0 : 0.5; break;
      case Location::cell: o[a] = 0.5; break;
    }
  }
  return o;
}

Vec3 StaggeredGrid::position(Location loc, int family, int i, int j, int k) const {
  Vec3 o = stagger_offset(loc, family);
  return {lo_[0] + (i + o[0]) * h_[0], lo_[1] + (j + o[1]) * h_[1],
          lo_[2] + (k + o[2]) * h_[2]};
}

bool StaggeredGrid::cell_occupied(int i, int j, int k) const {
  if (topology_ == Topology::periodic) return true;
  if (i < 0 || i >= res_[0] || j < 0 || j >= res_[1] || k < 0 || k >= res_[2])
    return false;
  if (cell_occ_.empty()) return true;
  return cell_occ_[flat(Location::cell, 0, i, j, k)] != 0;
}

void StaggeredGrid::classify_entities() {
  auto classify = [&](Location loc, int family) {
    Int3 s = shape(loc, family);
    int slot = loc_family_slot(loc, family);
    auto& st = status_[slot];
    auto& of = occfrac_[slot];
    st.assign(count(loc, family), 0);
    of.assign(count(loc, family), 0.f);
    Vec3 off = stagger_offset(loc, family);
    // Adjacent cell slot ranges per axis: staggered axes pin the cell layer,
    // node-sampled axes straddle two layers.
    size_t idx = 0;
    for (int i = 0; i < s[0]; ++i)
      for (int j = 0; j < s[1]; ++j)
        for (int k = 0; k < s[2]; ++k, ++idx) {
          Int3 e{i, j, k};
          int total = 0, occ = 0;
          Int3 clo, chi;
          for (int a = 0; a < 3; ++a) {
            if (a >= dims_) {
              clo[a] = 0;
              chi[a] = 0;
            } else if (off[a] == 0.5) {
              clo[a] = chi[a] = e[a];
            } else {
              clo[a] = e[a] - 1;
              chi[a] = e[a];
            }
          }
          for (int ci = clo[0]; ci <= chi[0]; ++ci)
            for (int cj = clo[1]; cj <= chi[1]; ++cj)
              for (int ck = clo[2]; ck <= chi[2]; ++ck) {
                ++total;
                if (cell_occupied(ci, cj, ck)) ++occ;
              }
          EntityStatus es = occ == 0       ? EntityStatus::exterior
                            : occ == total ? EntityStatus::interior
                                           : EntityStatus::boundary;
          st[idx] = static_cast<uint8_t>(es);
          of[idx] = static_cast<float>(occ) / static_cast<float>(total);
        }
  };
  classify(Location::node, 0);
  for (int f = 0; f < dims_; ++f) classify(Location::edge, f);
  if (dims_ == 3)
    for (int f = 0; f < dims_; ++f) classify(Location::face, f);
  classify(Location::cell, 0);
}

namespace {

double dist_point_segment(double px, double py, double ax, double ay, double bx,
                          double by) {
  double vx = bx - ax, vy = by - ay;
  double t = ((px - ax) * vx + (py - ay) * vy) / (vx * vx + vy * vy);
  t = std::clamp(t, 0.0, 1.0);
  double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

double StaggeredGrid::boundary_distance(const Vec3& x) const {
  require(topology_ == Topology::bounded, "boundary_distance: bounded grids only");
  double d = std::numeric_limits<double>::max();
  for (int a = 0; a < dims_; ++a)
    d = std::min({d, x[a] - lo_[a], hi_[a] - x[a]});
  if (kind_ == DomainKind::lshape) {
    double mx = 0.5 * (lo_[0] + hi_[0]);
    double my = 0.5 * (lo_[1] + hi_[1]);
    if (x[0] >= mx && x[1] >= my) return 0.0;  // inside the removed quadrant
    double dwall = std::min(dist_point_segment(x[0], x[1], mx, my, mx, hi_[1]),
                            dist_point_segment(x[0], x[1], mx, my, hi_[0], my));
    d = std::min(d, dwall);
  }
  return std::max(d, 0.0);
}

Vec3 StaggeredGrid::reflect_into_domain(const Vec3& x) const {
  require(topology_ == Topology::bounded, "reflect_into_domain: bounded grids only");
  Vec3 y = x;
  for (int a = 0; a < dims_; ++a) {
    // Fold across the outer box walls (repeat for far-out points).
    double len = hi_[a] - lo_[a];
    double t = y[a] - lo_[a];
    t = std::fabs(t);
    double period = 2.0 * len;
    t = t - period * std::floor(t / period);
    if (t > len) t = period - t;
    y[a] = lo_[a] + t;
  }
  if (kind_ == DomainKind::lshape) {
    double mx = 0.5 * (lo_[0] + hi_[0]);
    double my = 0.5 * (lo_[1] + hi_[1]);
    if (y[0] > mx && y[1] > my) {
      // Corner composition: reflect across both re-entrant walls.
      y[0] = 2 * mx - y[0];
      y[1] = 2 * my - y[1];
    }
  }
  return y;
}

bool StaggeredGrid::same_layout(const StaggeredGrid& other) const {
  return dims_ == other.dims_ && res_ == other.res_ &&
         topology_ == other.topology_ && lo_ == other.lo_ && hi_ == other.hi_ &&
         cell_occ_ == other.cell_occ_;
}

GridPtr build_grid(int dims, Int3 resolution, Topology topology, Vec3 lo,
                   Vec3 hi, std::optional<std::vector<uint8_t>> mask,
                   DomainKind kind) {
  return std::make_shared<StaggeredGrid>(dims, resolution, topology, lo, hi,
                                         kind, mask.value_or(std::vector<uint8_t>{}));
}

GridPtr build_unit_cell(int dims, int n) {
  return build_grid(dims, {n, n, n}, Topology::periodic);
}

GridPtr build_lshape(int n) {
  return build_grid(2, {n, n, 1}, Topology::bounded, {0, 0, 0}, {1, 1, 1},
                    lshape_mask({n, n, 1}), DomainKind::lshape);
}

std::vector<uint8_t> lshape_mask(Int3 resolution) {
  require(resolution[0] % 2 == 0 && resolution[1] % 2 == 0,
          "lshape_mask: resolution must be even");
  std::vector<uint8_t> m(static_cast<size_t>(resolution[0]) * resolution[1], 1);
  for (int i = resolution[0] / 2; i < resolution[0]; ++i)
    for (int j = resolution[1] / 2; j < resolution[1]; ++j)
      m[static_cast<size_t>(i) * resolution[1] + j] = 0;
  return m;
}

}  // namespace homog
