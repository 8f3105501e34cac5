#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace homog {

using Vec3 = std::array<double, 3>;
using Int3 = std::array<int, 3>;

/// Symmetric 3x3 matrix stored as the upper triangle (xx, yy, zz, xy, xz, yz).
/// 2-D problems use the upper-left 2x2 block and ignore the z entries.
struct SymMat3 {
  std::array<double, 6> a{0, 0, 0, 0, 0, 0};

  static SymMat3 identity(double s = 1.0) {
    SymMat3 m;
    m.a = {s, s, s, 0, 0, 0};
    return m;
  }
  static SymMat3 diag(double x, double y, double z) {
    SymMat3 m;
    m.a = {x, y, z, 0, 0, 0};
    return m;
  }

  double xx() const { return a[0]; }
  double yy() const { return a[1]; }
  double zz() const { return a[2]; }

  double operator()(int i, int j) const {
    if (i == j) return a[i];
    int lo = i < j ? i : j, hi = i < j ? j : i;
    if (lo == 0 && hi == 1) return a[3];
    if (lo == 0 && hi == 2) return a[4];
    return a[5];
  }
  void set(int i, int j, double v) {
    if (i == j) {
      a[i] = v;
      return;
    }
    int lo = i < j ? i : j, hi = i < j ? j : i;
    if (lo == 0 && hi == 1)
      a[3] = v;
    else if (lo == 0 && hi == 2)
      a[4] = v;
    else
      a[5] = v;
  }

  bool is_diagonal(double tol = 0.0) const {
    return std::abs(a[3]) <= tol && std::abs(a[4]) <= tol && std::abs(a[5]) <= tol;
  }

  Vec3 apply(const Vec3& v) const {
    return {a[0] * v[0] + a[3] * v[1] + a[4] * v[2],
            a[3] * v[0] + a[1] * v[1] + a[5] * v[2],
            a[4] * v[0] + a[5] * v[1] + a[2] * v[2]};
  }

  SymMat3& operator*=(double s) {
    for (auto& v : a) v *= s;
    return *this;
  }
  SymMat3& operator+=(const SymMat3& o) {
    for (int i = 0; i < 6; ++i) a[i] += o.a[i];
    return *this;
  }

  /// Eigenvalue range of the leading dims x dims block (closed form, dims = 2 or 3).
  std::array<double, 2> eig_range(int dims) const;
};

SymMat3 operator*(double s, const SymMat3& m);

/// Neumaier compensated accumulator. Fixed-order sums with this are
/// bit-reproducible and accurate enough for the determinism contract.
class KahanSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline int imod(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

/// Fractional part folded into [0,1).
inline double frac01(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace homog
