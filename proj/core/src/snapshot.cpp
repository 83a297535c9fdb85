#include "dmnls/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dmnls/errors.hpp"

namespace dmnls {
namespace {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DomainError("snapshot: truncated file");
  return to_little(v);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& f, double t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DomainError("snapshot: cannot open " + path.string() + " for writing");
  const Field u = f.to_physical();
  put<std::uint64_t>(os, u.size());
  put<double>(os, u.grid().length());
  put<double>(os, t);
  for (const auto& v : u.values()) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw DomainError("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("snapshot: cannot open " + path.string());
  const auto n = get<std::uint64_t>(is);
  const auto length = get<double>(is);
  const auto t = get<double>(is);
  Field f(make_grid(static_cast<std::size_t>(n), length));
  for (auto& v : f.values()) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = {re, im};
  }
  return {std::move(f), t};
}

}  // namespace dmnls
