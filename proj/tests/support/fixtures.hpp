#pragma once

#include <map>
#include <mutex>

#include "dmnls/dmnls.hpp"

namespace fixture {

/// Ground states on a coarse 64π box, solved once per process.
inline const dmnls::GroundState& ground_state(double p) {
  static std::mutex mutex;
  static std::map<double, dmnls::GroundState> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(p);
  if (it == cache.end()) {
    dmnls::GroundStateConfig cfg;
    cfg.n = 1024;
    it = cache.emplace(p, dmnls::petviashvili_solve(p, cfg)).first;
  }
  return it->second;
}

}  // namespace fixture
