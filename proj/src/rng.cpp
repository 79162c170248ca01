#include "opmean/rng.hpp"

#include <cmath>

namespace opmean {

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t Rng::next_u64() {
  s_ += 0x9E3779B97F4A7C15ULL;
  uint64_t z = s_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::log_uniform(double a, double b) {
  return std::exp(uniform(std::log(a), std::log(b)));
}

double Rng::gauss() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // Box-Muller; u1 in (0,1]
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 6.283185307179586476925286766559 * u2;
  cached_ = r * std::sin(th);
  have_cached_ = true;
  return r * std::cos(th);
}

Rng substream(uint64_t seed, uint64_t trial) {
  return Rng(mix64(seed ^ mix64(trial + 0x5851F42D4C957F2DULL)));
}

}  // namespace opmean
