#pragma once

#include "fptp/harness.hpp"

namespace fptp {

// Per-cell measurement pass over a swept grid. Cells are independent; each
// kernel writes only the per_plan map of the cell it owns.

// Reference implementation, one cell after another.
void measure_grid_serial(ExperimentGrid& grid, const Collection& collection,
                         const ScenarioSetup& setup, const MeasureOptions& options);

// OpenMP fan-out over cells with `jobs` threads. Produces the same grid as the
// serial kernel.
void measure_grid_parallel(ExperimentGrid& grid, const Collection& collection,
                           const ScenarioSetup& setup, const MeasureOptions& options,
                           int jobs);

// Serial for jobs <= 1, parallel otherwise.
void measure_grid(ExperimentGrid& grid, const Collection& collection,
                  const ScenarioSetup& setup, const MeasureOptions& options);

}  // namespace fptp
