#pragma once

#include "cablesail/boom_model.hpp"
#include "cablesail/calibration.hpp"
#include "cablesail/control.hpp"
#include "cablesail/equilibrium.hpp"
#include "cablesail/error.hpp"
#include "cablesail/linearization.hpp"
#include "cablesail/numerics.hpp"
#include "cablesail/passivity.hpp"
#include "cablesail/polynomial.hpp"
#include "cablesail/sim_engine.hpp"
