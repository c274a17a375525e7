// hdbuchi/base.hpp -- error taxonomy, deterministic RNG, small shared helpers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hdbuchi {

// Exit-code taxonomy shared between the library and the command line tool:
//   2 -- bad input (parse error, usage error, violated precondition)
//   3 -- a configured resource cap was exceeded
//   4 -- an internal cross-check failed (a bug, never expected on any input)
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& m) : std::runtime_error(m) {}
};
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& m) : std::runtime_error(m) {}
};
struct IntegrityError : std::runtime_error {
  explicit IntegrityError(const std::string& m) : std::runtime_error(m) {}
};

// splitmix64: tiny, fast, reproducible across platforms.  Good enough for
// test-corpus generation; not meant for anything cryptographic.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, bound).  Lemire-style rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw IntegrityError("Rng::below: zero bound");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) {
    return below(den) < num;
  }

 private:
  std::uint64_t state_;
};

}  // namespace hdbuchi
