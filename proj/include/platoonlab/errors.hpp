#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace platoonlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A gain or parameter lies outside its admissible interval.
struct GainRangeError : Error {
  using Error::Error;
};

/// A denominator is not Hurwitz where the analysis requires it.
struct NonHurwitzError : Error {
  using Error::Error;
};

/// An iterative solver failed to reach its tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

/// A simulation produced non-finite or overflowing state.
struct SimDivergedError : Error {
  SimDivergedError(std::size_t step_, double time_)
      : Error("simulation diverged at step " + std::to_string(step_) +
              " (t = " + std::to_string(time_) + " s)"),
        step(step_),
        time(time_) {}
  std::size_t step;
  double time;
};

}  // namespace platoonlab
