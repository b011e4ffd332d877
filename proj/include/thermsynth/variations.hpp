#pragma once

#include <string>
#include <vector>

#include "thermsynth/config_document.hpp"

namespace thermsynth {

/// Position of one run along a multi-valued key.
struct Axis {
  Section section = Section::building;
  std::string key;
  std::size_t index = 0;  // position in the declared list
  std::size_t rank = 0;   // position in the sorted distinct values (drives the label letter)
  KeyValue value;
};

struct Variation {
  std::string label;
  RunConfig run;
  std::vector<Axis> axes;  // multi-valued keys only, document order
};

/// Cartesian: row-major over the multi-valued keys with the first declared key
/// varying slowest. Zip: element-wise. Labels are unique or this throws.
std::vector<Variation> expand_variations(const ConfigDocument& doc);

/// Decodes the trailing letter group of an ordinal label ("sr3_acc" -> {0, 2, 2}).
std::vector<std::size_t> decode_label_letters(const std::string& label);

}  // namespace thermsynth
