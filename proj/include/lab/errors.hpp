#pragma once
#include <stdexcept>
#include <string>

namespace lab {

// common base for every guard trip, so callers can map "the parameters are
// degenerate" to one policy without swallowing unrelated runtime errors
struct GuardFailure : std::runtime_error {
  explicit GuardFailure(const std::string& what) : std::runtime_error(what) {}
};

// a sampled spectral/shift parameter landed too close to a zero of a
// denominator theta/sine factor
struct PoleNearby : GuardFailure {
  explicit PoleNearby(const std::string& what) : GuardFailure(what) {}
};

// classical phase point too close to the x_j = x_k collision set
struct CollisionSingularity : GuardFailure {
  explicit CollisionSingularity(const std::string& what) : GuardFailure(what) {}
};

// resampling failed to produce generic parameters within the retry budget
struct DegenerateParameters : GuardFailure {
  explicit DegenerateParameters(const std::string& what) : GuardFailure(what) {}
};

}  // namespace lab
