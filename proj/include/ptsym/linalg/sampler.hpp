#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ptsym {

/// Seeded source of standard-normal variates.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniforms are the top 53 bits scaled to [0, 1), and normals come
/// from the Marsaglia polar method, so the stream is identical across
/// standard libraries (std::normal_distribution is not).
class SeededSampler {
public:
  explicit SeededSampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::vector<double> sample_gaussian(SeededSampler& s, std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = s.gaussian();
  return out;
}

}  // namespace ptsym
