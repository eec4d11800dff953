#pragma once

// Umbrella header for the palletbench crash-test simulator.

#include "palletbench/bench.hpp"
#include "palletbench/body.hpp"
#include "palletbench/collision.hpp"
#include "palletbench/config.hpp"
#include "palletbench/dynamics.hpp"
#include "palletbench/errors.hpp"
#include "palletbench/math.hpp"
#include "palletbench/restraint.hpp"
#include "palletbench/rng.hpp"
#include "palletbench/runner.hpp"
#include "palletbench/scene.hpp"
#include "palletbench/validation.hpp"
#include "palletbench/wrap.hpp"
#include "palletbench/xml.hpp"
