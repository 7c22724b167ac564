#pragma once

// Umbrella header for the repliq library.

#include "analysis.hpp"    // IWYU pragma: export
#include "core.hpp"        // IWYU pragma: export
#include "io.hpp"          // IWYU pragma: export
#include "math.hpp"        // IWYU pragma: export
#include "replicability.hpp"  // IWYU pragma: export
#include "rvalue.hpp"      // IWYU pragma: export
#include "selection.hpp"   // IWYU pragma: export
#include "simulation.hpp"  // IWYU pragma: export
