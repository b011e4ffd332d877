#pragma once

#include <filesystem>
#include <ostream>
#include <span>

#include "thermsynth/simulation.hpp"

namespace thermsynth {

/// Header of exact column names, then one row per trace entry. time_s is an
/// integer, everything else fixed with 4 decimals; LF endings, no quoting.
void write_output_csv(const SimulationTrace& trace, std::span<const OutputColumn> columns,
                      std::ostream& out);

/// Writes through a temporary file next to `path` and renames it into place.
void write_output_csv(const SimulationTrace& trace, std::span<const OutputColumn> columns,
                      const std::filesystem::path& path);

}  // namespace thermsynth
