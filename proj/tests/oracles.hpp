#pragma once

// Brute-force reference implementations used only by tests. Everything here
// enumerates paths outright in extended precision, so it is exponentially
// slow and deliberately shares no code with the library's dynamic programs.

#include <map>
#include <utility>
#include <vector>

#include "poswalk/kernels.hpp"
#include "poswalk/step_law.hpp"

namespace testutil {

// Sum over all n-step paths from x to y whose intermediate states satisfy
// the constraint (endpoints free, matching the library convention).
inline long double enum_kernel(const poswalk::StepLaw& law,
                               poswalk::Strictness s, int n, int x, int y) {
  const int floor = poswalk::state_floor(s);
  long double total = 0.0L;
  struct Frame {
    int state;
    long double prob;
    int step;
  };
  std::vector<Frame> stack{{x, 1.0L, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.step == n) {
      if (f.state == y) total += f.prob;
      continue;
    }
    for (size_t i = 0; i < law.offsets.size(); ++i) {
      const int next = f.state + law.offsets[i];
      if (f.step + 1 < n && next < floor) continue;  // intermediate killed
      stack.push_back({next, f.prob * static_cast<long double>(law.probs[i]),
                       f.step + 1});
    }
  }
  return total;
}

// P_x(constraint holds at times 1..n), by the same enumeration.
inline long double enum_survival(const poswalk::StepLaw& law,
                                 poswalk::Strictness s, int n, int x) {
  const int floor = poswalk::state_floor(s);
  long double total = 0.0L;
  struct Frame {
    int state;
    long double prob;
    int step;
  };
  std::vector<Frame> stack{{x, 1.0L, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.step == n) {
      total += f.prob;
      continue;
    }
    for (size_t i = 0; i < law.offsets.size(); ++i) {
      const int next = f.state + law.offsets[i];
      if (next < floor) continue;
      stack.push_back({next, f.prob * static_cast<long double>(law.probs[i]),
                       f.step + 1});
    }
  }
  return total;
}

// Joint law of the first ladder epoch and height up to horizon t_max.
// Descending weak: first time S <= 0, height -S; descending strict: first
// time S < 0, height -S. Ascending variants look for entries into the
// upper half-line instead.
inline std::map<std::pair<int, int>, long double> enum_ladder(
    const poswalk::StepLaw& law, poswalk::Strictness s, bool descending,
    int t_max) {
  std::map<std::pair<int, int>, long double> joint;
  struct Frame {
    int state;
    long double prob;
    int step;
  };
  std::vector<Frame> stack{{0, 1.0L, 0}};
  const bool strict = s == poswalk::Strictness::strict;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.step == t_max) continue;  // epoch beyond the horizon, dropped
    for (size_t i = 0; i < law.offsets.size(); ++i) {
      const int next = f.state + law.offsets[i];
      const long double p =
          f.prob * static_cast<long double>(law.probs[i]);
      const bool hit = descending ? (strict ? next < 0 : next <= 0)
                                  : (strict ? next > 0 : next >= 0);
      if (hit) {
        const int height = descending ? -next : next;
        joint[{f.step + 1, height}] += p;
      } else {
        stack.push_back({next, p, f.step + 1});
      }
    }
  }
  return joint;
}

}  // namespace testutil
