#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace annealot {

// mt19937_64 output is fixed by the standard; the std distributions are not,
// so every conversion to a real or an index is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform();
  // (0, 1), safe for log.
  double uniform_open();
  double normal();
  double gumbel(double scale);
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

std::vector<int> random_permutation(int n, Rng& rng);

}  // namespace annealot
