#ifndef OPMEAN_RNG_HPP
#define OPMEAN_RNG_HPP

#include <cstdint>

namespace opmean {

// SplitMix64 finalizer; the documented mixing function for substreams.
uint64_t mix64(uint64_t x);

// Counter-based SplitMix64 stream with Box-Muller gaussians. Identical seeds
// give bitwise-identical streams on every platform (no libm-dependent
// distributions beyond sqrt/log/cos/sin of IEEE doubles).
class Rng {
 public:
  explicit Rng(uint64_t state) : s_(state) {}

  uint64_t next_u64();
  // uniform in [0, 1)
  double uniform();
  double uniform(double a, double b);
  // log-uniform in [a, b], a > 0
  double log_uniform(double a, double b);
  double gauss();

 private:
  uint64_t s_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

// Per-trial substream: hash(seed, trial).
Rng substream(uint64_t seed, uint64_t trial);

}  // namespace opmean

#endif
