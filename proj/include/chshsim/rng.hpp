#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace chshsim {

/// Written into manifests and reports so a run can be reproduced exactly.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 per (stream, chunk); seed = splitmix64(seed ^ splitmix64(stream << 56 ^ chunk)); "
    "uniform = (bits >> 11) * 2^-53";

/// Independent purposes get independent streams so changing one input (for
/// example the pair probabilities) never perturbs another stream's draws.
enum class Stream : std::uint64_t {
  SettingChoice = 1,
  HiddenVariable = 2,
  Counterfactual = 3,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Platform-stable uniform source. std::mt19937_64's output sequence is fixed
/// by the standard; the double conversion is done here rather than through
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
class Substream {
 public:
  Substream(std::uint64_t seed, Stream stream, std::uint64_t chunk)
      : engine_(splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(stream) << 56) ^ chunk))) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chshsim
