#include "thermsynth/variations.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "thermsynth/errors.hpp"

namespace thermsynth {

namespace {

/// Rank of each value among the sorted distinct values of the key.
std::vector<std::size_t> value_ranks(const std::vector<KeyValue>& values) {
  std::vector<KeyValue> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> ranks;
  for (const auto& v : values) {
    ranks.push_back(static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
  }
  return ranks;
}

std::string letters_for(std::size_t rank) {
  // a..z, then aa, ab, … for very long lists
  std::string s;
  std::size_t r = rank;
  do {
    s.insert(s.begin(), static_cast<char>('a' + r % 26));
    r /= 26;
  } while (r-- > 0);
  return s;
}

}  // namespace

std::vector<Variation> expand_variations(const ConfigDocument& doc) {
  RunConfig base;
  std::vector<const ParameterValues*> multi;
  for (const auto& p : doc.parameters) {
    if (p.values.size() == 1) {
      apply_parameter(base, p.section, p.key, p.values.front());
    } else {
      multi.push_back(&p);
    }
  }

  std::vector<std::vector<std::size_t>> ranks;
  for (const auto* p : multi) ranks.push_back(value_ranks(p->values));

  std::size_t count = 1;
  if (doc.mode == VariationMode::zip) {
    count = multi.empty() ? 1 : multi.front()->values.size();
    for (const auto* p : multi) {
      if (p->values.size() != count) {
        throw ConfigError("zip mode requires equal list lengths; key " + p->key + " has " +
                          std::to_string(p->values.size()) + " values, expected " +
                          std::to_string(count));
      }
    }
  } else {
    for (const auto* p : multi) count *= p->values.size();
  }

  std::vector<Variation> out;
  out.reserve(count);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < count; ++i) {
    Variation v;
    v.run = base;
    std::string letters;
    std::size_t rest = i;
    std::vector<std::size_t> idx(multi.size());
    if (doc.mode == VariationMode::zip) {
      std::fill(idx.begin(), idx.end(), i);
    } else {
      for (std::size_t k = multi.size(); k-- > 0;) {
        idx[k] = rest % multi[k]->values.size();
        rest /= multi[k]->values.size();
      }
    }
    for (std::size_t k = 0; k < multi.size(); ++k) {
      const auto& p = *multi[k];
      apply_parameter(v.run, p.section, p.key, p.values[idx[k]]);
      v.axes.push_back({p.section, p.key, idx[k], ranks[k][idx[k]], p.values[idx[k]]});
      letters += letters_for(ranks[k][idx[k]]);
    }
    if (doc.label_scheme == LabelScheme::index) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%04zu", i + 1);
      v.label = doc.label_prefix + buf;
    } else {
      v.label = doc.label_prefix + std::to_string(i + 1);
      if (!letters.empty()) v.label += "_" + letters;
    }
    if (!seen.insert(v.label).second) throw ConfigError("duplicate run label " + v.label);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::size_t> decode_label_letters(const std::string& label) {
  const auto pos = label.rfind('_');
  if (pos == std::string::npos) return {};
  std::vector<std::size_t> out;
  for (std::size_t i = pos + 1; i < label.size(); ++i) {
    const char c = label[i];
    if (c < 'a' || c > 'z') return {};
    out.push_back(static_cast<std::size_t>(c - 'a'));
  }
  return out;
}

}  // namespace thermsynth
