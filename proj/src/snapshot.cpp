#include "homog/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace homog {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) fail("snapshot: truncated stream");
  return v;
}

constexpr char kMagic[4] = {'H', 'M', 'G', 'F'};

}  // namespace

void write_snapshot(std::ostream& os, const DiscreteField& f) {
  const auto& g = f.grid();
  os.write(kMagic, 4);
  put<uint32_t>(os, 1);
  put<uint32_t>(os, static_cast<uint32_t>(g.dims()));
  put<uint8_t>(os, static_cast<uint8_t>(g.topology()));
  put<uint8_t>(os, static_cast<uint8_t>(g.kind()));
  put<uint8_t>(os, static_cast<uint8_t>(f.location()));
  put<uint8_t>(os, 0);
  for (int a = 0; a < 3; ++a) put<uint32_t>(os, static_cast<uint32_t>(g.res()[a]));
  for (int a = 0; a < 3; ++a) put<double>(os, g.lo()[a]);
  for (int a = 0; a < 3; ++a) put<double>(os, g.hi()[a]);
  const auto& mask = g.cell_occupancy();
  put<uint64_t>(os, static_cast<uint64_t>(mask.size()));
  if (!mask.empty())
    os.write(reinterpret_cast<const char*>(mask.data()),
             static_cast<std::streamsize>(mask.size()));
  put<uint32_t>(os, static_cast<uint32_t>(f.components()));
  put<uint64_t>(os, static_cast<uint64_t>(f.size()));
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) fail("snapshot: write failed");
}

DiscreteField read_snapshot(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) fail("snapshot: bad magic");
  uint32_t version = get<uint32_t>(is);
  if (version != 1) fail("snapshot: unsupported version");
  int dims = static_cast<int>(get<uint32_t>(is));
  auto topology = static_cast<Topology>(get<uint8_t>(is));
  auto kind = static_cast<DomainKind>(get<uint8_t>(is));
  auto loc = static_cast<Location>(get<uint8_t>(is));
  get<uint8_t>(is);
  Int3 res;
  for (int a = 0; a < 3; ++a) res[a] = static_cast<int>(get<uint32_t>(is));
  Vec3 lo, hi;
  for (int a = 0; a < 3; ++a) lo[a] = get<double>(is);
  for (int a = 0; a < 3; ++a) hi[a] = get<double>(is);
  uint64_t mask_bytes = get<uint64_t>(is);
  std::vector<uint8_t> mask(mask_bytes);
  if (mask_bytes)
    is.read(reinterpret_cast<char*>(mask.data()),
            static_cast<std::streamsize>(mask_bytes));
  GridPtr grid = build_grid(dims, res, topology, lo, hi,
                            mask.empty() ? std::nullopt
                                         : std::optional<std::vector<uint8_t>>(mask),
                            kind);
  uint32_t ncomp = get<uint32_t>(is);
  uint64_t total = get<uint64_t>(is);
  DiscreteField f(grid, loc);
  if (ncomp != static_cast<uint32_t>(f.components()) || total != f.size())
    fail("snapshot: layout mismatch");
  is.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!is) fail("snapshot: truncated values");
  return f;
}

void write_snapshot(const std::string& path, const DiscreteField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail("snapshot: cannot open " + path);
  write_snapshot(os, f);
}

DiscreteField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail("snapshot: cannot open " + path);
  return read_snapshot(is);
}

}  // namespace homog
