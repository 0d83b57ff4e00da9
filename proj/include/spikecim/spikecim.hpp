#pragma once

// Event-driven behavioral simulator of a dual-spike temporal-coded
// SOT-MRAM compute-in-memory macro.

#include "spikecim/analog.hpp"
#include "spikecim/config.hpp"
#include "spikecim/csv.hpp"
#include "spikecim/device.hpp"
#include "spikecim/energy.hpp"
#include "spikecim/engine.hpp"
#include "spikecim/errors.hpp"
#include "spikecim/rational.hpp"
#include "spikecim/reference.hpp"
#include "spikecim/runconfig.hpp"
#include "spikecim/spike.hpp"
#include "spikecim/units.hpp"
#include "spikecim/workload.hpp"
