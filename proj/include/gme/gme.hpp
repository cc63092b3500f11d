#pragma once

#include "gme/ascent.hpp"
#include "gme/correlation.hpp"
#include "gme/errors.hpp"
#include "gme/family.hpp"
#include "gme/linalg.hpp"
#include "gme/measure.hpp"
#include "gme/quadrilateral.hpp"
#include "gme/rng.hpp"
#include "gme/states.hpp"
#include "gme/stationary.hpp"
#include "gme/surface.hpp"
#include "gme/version.hpp"
