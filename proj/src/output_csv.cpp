#include "thermsynth/output_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "thermsynth/errors.hpp"

namespace thermsynth {

void write_output_csv(const SimulationTrace& trace, std::span<const OutputColumn> columns,
                      std::ostream& out) {
  if (columns.empty()) throw ConfigError("output_columns must not be empty");
  const auto names = column_names();
  std::string line;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) line += ',';
    line += names[static_cast<std::size_t>(columns[i])];
  }
  line += '\n';
  out << line;

  char buf[64];
  for (const auto& row : trace.rows) {
    line.clear();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i > 0) line += ',';
      double x = row[static_cast<std::size_t>(columns[i])];
      char* end = nullptr;
      if (columns[i] == OutputColumn::time_s) {
        end = std::to_chars(buf, buf + sizeof buf, std::llround(x)).ptr;
      } else {
        if (std::abs(x) < 5e-5) x = 0.0;  // no "-0.0000"
        end = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 4).ptr;
      }
      line.append(buf, end);
    }
    line += '\n';
    out << line;
  }
}

void write_output_csv(const SimulationTrace& trace, std::span<const OutputColumn> columns,
                      const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SimulationError("cannot write " + tmp.string());
    write_output_csv(trace, columns, out);
    out.flush();
    if (!out) throw SimulationError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace thermsynth
