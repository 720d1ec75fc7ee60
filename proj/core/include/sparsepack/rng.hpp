#ifndef SPARSEPACK_RNG_HPP_
#define SPARSEPACK_RNG_HPP_

#include <cstdint>

namespace sparsepack {

// Counter-based generation: every draw is a pure function of a key, so
// (i, j) cells can be generated in any order (or in parallel) without
// changing the output.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a) {
  return splitmix64(seed ^ splitmix64(a));
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b) {
  return mix_key(mix_key(seed, a), b);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b, std::uint64_t c) {
  return mix_key(mix_key(seed, a, b), c);
}

// Uniform in the open interval (0, 1); never returns an exact endpoint.
inline double uniform_open01(std::uint64_t key) {
  const std::uint64_t bits = splitmix64(key);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform in [0, 1).
inline double uniform01(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

// Small sequential generator for code that wants a stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() { return splitmix64(state_++); }
  double next_open01() { return uniform_open01(state_++); }
  double next01() { return uniform01(state_++); }
  // Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

}  // namespace sparsepack

#endif  // SPARSEPACK_RNG_HPP_
