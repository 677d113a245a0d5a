#pragma once

#include <cmath>
#include <vector>

namespace poswalk {

// Neumaier's compensated sum. Long probability sums feed tolerance checks
// near 1e-12, so plain accumulation is not always good enough.
struct NeumaierSum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }

  double value() const { return s + c; }
};

inline double compensated_sum(const std::vector<double>& v) {
  NeumaierSum acc;
  for (double x : v) acc.add(x);
  return acc.value();
}

}  // namespace poswalk
