#pragma once

#include <iosfwd>
#include <string>

#include "homog/field.hpp"

namespace homog {

/// Binary field snapshot, little-endian throughout.
///
/// Layout:
///   magic   "HMGF"                      4 bytes
///   version u32 (= 1)
///   dims    u32, topology u8, kind u8, location u8, pad u8
///   resolution u32 x 3
///   lo f64 x 3, hi f64 x 3
///   mask_bytes u64 (0 when the grid carries no mask), then that many bytes
///     of per-cell occupancy in canonical order
///   ncomp u32, total_values u64, then f64 values per component in canonical
///     axis-major order
void write_snapshot(const std::string& path, const DiscreteField& f);
DiscreteField read_snapshot(const std::string& path);

void write_snapshot(std::ostream& os, const DiscreteField& f);
DiscreteField read_snapshot(std::istream& is);

}  // namespace homog
