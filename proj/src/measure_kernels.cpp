#include "fptp/measure_kernels.hpp"

#include <omp.h>

#include <exception>

namespace fptp {

namespace {

std::uint64_t cell_key(const GridCell& cell, int dim) {
  return static_cast<std::uint64_t>(cell.j) * static_cast<std::uint64_t>(dim) +
         static_cast<std::uint64_t>(cell.i);
}

}  // namespace

void measure_grid_serial(ExperimentGrid& grid, const Collection& collection,
                         const ScenarioSetup& setup, const MeasureOptions& options) {
  for (auto& cell : grid.cells()) {
    if (!cell.visited) continue;
    cell.per_plan = measure_all_plans(cell.query, collection, setup, options,
                                      cell_key(cell, grid.dim()));
  }
}

void measure_grid_parallel(ExperimentGrid& grid, const Collection& collection,
                           const ScenarioSetup& setup, const MeasureOptions& options,
                           int jobs) {
  auto& cells = grid.cells();
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
  const int dim = grid.dim();
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs > 0 ? jobs : 1)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    GridCell& cell = cells[static_cast<std::size_t>(c)];
    if (!cell.visited) continue;
    try {
      cell.per_plan =
          measure_all_plans(cell.query, collection, setup, options, cell_key(cell, dim));
    } catch (...) {
#pragma omp critical(fptp_measure_failure)
      if (!failure) failure = std::current_exception();
    }
  }

  if (failure) std::rethrow_exception(failure);
}

void measure_grid(ExperimentGrid& grid, const Collection& collection,
                  const ScenarioSetup& setup, const MeasureOptions& options) {
  if (options.jobs <= 1) {
    measure_grid_serial(grid, collection, setup, options);
  } else {
    measure_grid_parallel(grid, collection, setup, options, options.jobs);
  }
}

}  // namespace fptp
