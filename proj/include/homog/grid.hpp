#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "homog/common.hpp"

namespace homog {

enum class Topology : uint8_t { periodic = 0, bounded = 1 };

enum class Location : uint8_t { node = 0, edge = 1, face = 2, cell = 3 };

/// interior: not touching the complement of the occupied region;
/// boundary: touching both sides; exterior: fully outside.
enum class EntityStatus : uint8_t { interior = 0, boundary = 1, exterior = 2 };

/// Named domain shapes. The L-shape removes one quadrant of the box
/// (quadrant 3 = upper-right in the first two axes).
enum class DomainKind : uint8_t { box = 0, lshape = 1, custom = 2 };

const char* to_string(Location loc);

/// Uniform Cartesian staggered grid over a periodic unit cell or a bounded
/// box, with optional per-cell occupancy mask for polygonal domains.
///
/// Staggering: scalars at nodes, vector unknowns on edges (component f along
/// axis f), curls on faces (component f normal to axis f), volume scalars at
/// cells. Raw entity index (i,j,k) is axis-major: flat = (i*ny + j)*nz + k.
class StaggeredGrid {
 public:
  StaggeredGrid(int dims, Int3 resolution, Topology topology, Vec3 lo, Vec3 hi,
                DomainKind kind = DomainKind::box,
                std::vector<uint8_t> cell_mask = {});

  int dims() const { return dims_; }
  Topology topology() const { return topology_; }
  bool periodic() const { return topology_ == Topology::periodic; }
  DomainKind kind() const { return kind_; }
  const Int3& res() const { return res_; }
  const Vec3& lo() const { return lo_; }
  const Vec3& hi() const { return hi_; }
  const Vec3& spacing() const { return h_; }
  double cell_volume() const { return cellvol_; }
  /// Total measure of the occupied region.
  double domain_volume() const { return domainvol_; }
  bool masked() const { return !cell_occ_.empty(); }
  const std::vector<uint8_t>& cell_occupancy() const { return cell_occ_; }

  int families(Location loc) const {
    return (loc == Location::edge || loc == Location::face) ? dims_ : 1;
  }

  /// Index extents of the raw entity lattice for one family.
  Int3 shape(Location loc, int family) const;
  size_t count(Location loc, int family) const;
  size_t total_count(Location loc) const;

  size_t flat(Location loc, int family, int i, int j, int k) const {
    Int3 s = shape(loc, family);
    return (static_cast<size_t>(i) * s[1] + j) * s[2] + k;
  }

  Vec3 position(Location loc, int family, int i, int j, int k) const;
  /// Stagger offset in units of h per axis (0 or 1/2).
  Vec3 stagger_offset(Location loc, int family) const;

  EntityStatus status(Location loc, int family, size_t idx) const {
    if (topology_ == Topology::periodic) return EntityStatus::interior;
    return static_cast<EntityStatus>(status_[loc_family_slot(loc, family)][idx]);
  }
  /// Midpoint-quadrature weight; boundary entities carry the occupied
  /// fraction of their adjacent cell slots, exterior entities carry zero.
  double weight(Location loc, int family, size_t idx) const {
    if (topology_ == Topology::periodic) return cellvol_;
    return cellvol_ * occfrac_[loc_family_slot(loc, family)][idx];
  }
  const std::vector<uint8_t>& status_array(Location loc, int family) const {
    return status_[loc_family_slot(loc, family)];
  }

  bool cell_occupied(int i, int j, int k) const;

  /// Euclidean distance from an interior point to the domain boundary
  /// (box and L-shape only).
  double boundary_distance(const Vec3& x) const;

  /// Folds a point into the occupied region by even reflection across the
  /// boundary faces (corner composition where needed).
  Vec3 reflect_into_domain(const Vec3& x) const;

  bool same_layout(const StaggeredGrid& other) const;

 private:
  int loc_family_slot(Location loc, int family) const {
    return static_cast<int>(loc) == 0   ? 0
           : loc == Location::edge      ? 1 + family
           : loc == Location::face      ? 4 + family
                                        : 7;
  }
  void classify_entities();

  int dims_;
  Int3 res_;
  Topology topology_;
  DomainKind kind_;
  Vec3 lo_{0, 0, 0}, hi_{1, 1, 1}, h_{0, 0, 0};
  double cellvol_ = 0;
  double domainvol_ = 0;
  std::vector<uint8_t> cell_occ_;  // empty => all occupied
  // slots: 0 node, 1..3 edge, 4..6 face, 7 cell (bounded grids only)
  std::array<std::vector<uint8_t>, 8> status_;
  std::array<std::vector<float>, 8> occfrac_;
};

using GridPtr = std::shared_ptr<const StaggeredGrid>;

/// Builds a grid; resolution must be >= 2 per axis and masks require bounded
/// topology. The L-shape helper below produces the standard quadrant mask.
GridPtr build_grid(int dims, Int3 resolution, Topology topology,
                   Vec3 lo = {0, 0, 0}, Vec3 hi = {1, 1, 1},
                   std::optional<std::vector<uint8_t>> mask = std::nullopt,
                   DomainKind kind = DomainKind::box);

GridPtr build_unit_cell(int dims, int n);

/// Unit-square L-shape: the upper-right quadrant of the box is removed.
GridPtr build_lshape(int n);

std::vector<uint8_t> lshape_mask(Int3 resolution);

}  // namespace homog
