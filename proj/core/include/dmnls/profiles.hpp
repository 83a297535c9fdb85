#pragma once

#include <string>

#include "dmnls/field.hpp"

namespace dmnls {

enum class ProfileFamily { Gaussian, Sech };

/// amplitude · shape((x - shift)/width) · e^{i chirp (x - shift)²}, with
/// shape(s) = e^{-s²/2} or sech(s).
struct ProfileParams {
  ProfileFamily family = ProfileFamily::Gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  double chirp = 0.0;
  double shift = 0.0;
  double phase = 0.0;
};

Field make_profile(const GridPtr& grid, const ProfileParams& params);

ProfileFamily parse_profile_family(const std::string& name);
std::string to_string(ProfileFamily f);

/// The unit Gaussian e^{-x²/2}.
Field gaussian(const GridPtr& grid, double amplitude = 1.0);

/// u(x - a) for a shift by an integer number of cells.
Field cyclic_shift(const Field& u, long cells);

}  // namespace dmnls
