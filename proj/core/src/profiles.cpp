#include "dmnls/profiles.hpp"

#include <cmath>

#include "dmnls/errors.hpp"

namespace dmnls {

Field make_profile(const GridPtr& grid, const ProfileParams& params) {
  if (!(params.width > 0.0)) throw DomainError("profile width must be positive");
  if (!std::isfinite(params.amplitude) || !std::isfinite(params.chirp) ||
      !std::isfinite(params.shift) || !std::isfinite(params.phase)) {
    throw DomainError("profile parameters must be finite");
  }
  return Field::sample(grid, [&](double x) {
    const double y = x - params.shift;
    const double s = y / params.width;
    const double shape = params.family == ProfileFamily::Gaussian ? std::exp(-0.5 * s * s)
                                                                  : 1.0 / std::cosh(s);
    return params.amplitude * shape * std::polar(1.0, params.chirp * y * y + params.phase);
  });
}

ProfileFamily parse_profile_family(const std::string& name) {
  if (name == "gaussian") return ProfileFamily::Gaussian;
  if (name == "sech") return ProfileFamily::Sech;
  throw DomainError("unknown profile family '" + name + "'");
}

std::string to_string(ProfileFamily f) {
  return f == ProfileFamily::Gaussian ? "gaussian" : "sech";
}

Field gaussian(const GridPtr& grid, double amplitude) {
  ProfileParams params;
  params.amplitude = amplitude;
  return make_profile(grid, params);
}

Field cyclic_shift(const Field& u, long cells) {
  const Field src = u.to_physical();
  const long n = static_cast<long>(src.size());
  Field out(src.grid_ptr());
  for (long j = 0; j < n; ++j) {
    const long from = ((j - cells) % n + n) % n;
    out[static_cast<std::size_t>(j)] = src[static_cast<std::size_t>(from)];
  }
  return out;
}

}  // namespace dmnls
