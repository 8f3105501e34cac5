#include "homog/interp.hpp"

#include <cmath>

namespace homog {

double interpolate(const DiscreteField& f, int family, const Vec3& p) {
  const auto& g = f.grid();
  const Int3 s = g.shape(f.location(), family);
  const Vec3 off = g.stagger_offset(f.location(), family);
  const bool per = g.periodic();
  int i0[3] = {0, 0, 0}, i1[3] = {0, 0, 0};
  double fr[3] = {0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    if (a >= g.dims() || s[a] == 1) {
      i0[a] = i1[a] = 0;
      fr[a] = 0;
      continue;
    }
    double t = (p[a] - g.lo()[a]) / g.spacing()[a] - off[a];
    if (per) {
      double n = s[a];
      t -= n * std::floor(t / n);
      int b = static_cast<int>(t);
      if (b >= s[a]) b = s[a] - 1;
      i0[a] = b;
      i1[a] = b + 1 == s[a] ? 0 : b + 1;
      fr[a] = t - b;
    } else {
      if (t <= 0) {
        i0[a] = 0;
        i1[a] = s[a] > 1 ? 1 : 0;
        fr[a] = 0;
      } else if (t >= s[a] - 1) {
        i0[a] = s[a] - 2;
        i1[a] = s[a] - 1;
        fr[a] = 1;
      } else {
        int b = static_cast<int>(t);
        i0[a] = b;
        i1[a] = b + 1;
        fr[a] = t - b;
      }
    }
  }
  auto v = f.comp(family);
  auto val = [&](int i, int j, int k) {
    return v[(static_cast<size_t>(i) * s[1] + j) * s[2] + k];
  };
  double c00 = val(i0[0], i0[1], i0[2]) * (1 - fr[0]) + val(i1[0], i0[1], i0[2]) * fr[0];
  double c10 = val(i0[0], i1[1], i0[2]) * (1 - fr[0]) + val(i1[0], i1[1], i0[2]) * fr[0];
  double c01 = val(i0[0], i0[1], i1[2]) * (1 - fr[0]) + val(i1[0], i0[1], i1[2]) * fr[0];
  double c11 = val(i0[0], i1[1], i1[2]) * (1 - fr[0]) + val(i1[0], i1[1], i1[2]) * fr[0];
  double c0 = c00 * (1 - fr[1]) + c10 * fr[1];
  double c1 = c01 * (1 - fr[1]) + c11 * fr[1];
  return c0 * (1 - fr[2]) + c1 * fr[2];
}

Vec3 interpolate_vector(const DiscreteField& f, const Vec3& p) {
  Vec3 out{0, 0, 0};
  for (int fam = 0; fam < f.components(); ++fam) out[fam] = interpolate(f, fam, p);
  return out;
}

}  // namespace homog
