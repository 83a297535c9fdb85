#pragma once

#include "dmnls/dichotomy.hpp"
#include "dmnls/errors.hpp"
#include "dmnls/evolution.hpp"
#include "dmnls/field.hpp"
#include "dmnls/grid.hpp"
#include "dmnls/ground_state.hpp"
#include "dmnls/nonlinearity.hpp"
#include "dmnls/parallel.hpp"
#include "dmnls/profiles.hpp"
#include "dmnls/quadrature.hpp"
#include "dmnls/snapshot.hpp"
#include "dmnls/spectral.hpp"
#include "dmnls/virial.hpp"
