#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace objper {

/// Sum of a value multiset, independent of input order: terms are sorted
/// ascending before accumulation, so any permutation of the inputs yields
/// bit-identical results.
inline double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double v : terms) acc += v;
  return acc;
}

}  // namespace objper
