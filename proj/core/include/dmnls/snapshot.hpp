#pragma once

#include <filesystem>

#include "dmnls/field.hpp"

namespace dmnls {

/// Binary field snapshot: little-endian header (n: u64, L: f64, t: f64)
/// followed by n (re, im) f64 pairs in physical space.
struct Snapshot {
  Field field;
  double time = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const Field& f, double t);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace dmnls
