// Shared error types and a portable seeded RNG.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace treebal {

// Malformed input file; carries the 1-based line number.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Instance exceeds a documented exact-search bound.
struct OversizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// find_reduction returned nothing although the state is not in the base case.
struct CompletenessViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// No reconstruction candidate restored a valid balanced state.
struct ReconstructionViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Internal contract breach (invalid intermediate state and the like).
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Seeded RNG with portable integer sampling. std::mt19937_64 output is fixed by
// the standard, but the distributions are not, so sampling is done by rejection.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform value in [0, bound). bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform value in [lo, hi] inclusive.
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace treebal
