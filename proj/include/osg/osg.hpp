#pragma once

#include "branches.hpp"
#include "commands.hpp"
#include "constants.hpp"
#include "distributions.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "fields.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "phase_space.hpp"
#include "propagator.hpp"
#include "scenario.hpp"
