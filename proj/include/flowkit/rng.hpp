#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace flowkit {

// Seedable, splittable random stream. Derived streams depend only on the
// parent's key, never on how many draws the parent made, so inserting a new
// draw site cannot perturb sibling streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)), engine_(key_) {}

  Rng stream(std::uint64_t index) const { return Rng(mix(key_ ^ mix(index + 1)), 0); }
  Rng stream(std::string_view label) const { return Rng(mix(key_ ^ hash(label)), 0); }

  std::uint64_t next() { return engine_(); }

  double next_double() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool chance(double probability) { return next_double() < probability; }

  std::size_t pick_index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  template <typename T>
  const T& pick(const std::vector<T>& pool) {
    return pool[pick_index(pool.size())];
  }

 private:
  Rng(std::uint64_t key, int) : key_(key), engine_(key) {}

  static std::uint64_t mix(std::uint64_t x) {  // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  static std::uint64_t hash(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace flowkit
