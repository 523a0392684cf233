#ifndef SVRDA_SAMPLING_HPP
#define SVRDA_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "svrda/types.hpp"

namespace svrda {

/// splitmix64: counter-based, 64-bit seeded, bit-identical streams on every
/// platform. The raw 64-bit stream matches the published reference
/// implementation (Vigna, public domain).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double next_open_double() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (one value per two raw draws).
  double next_gaussian();

  /// Deterministic sub-seed for worker k; workers never share one rng.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
    SeededRng r(seed ^ (0x632be59bd9b4e019ULL + k));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

/// The nonuniform distribution q_i = L_i / (n Lbar) with its cumulative table.
struct SamplingDistribution {
  std::vector<double> weights;
  std::vector<double> cumulative;  // strictly increasing, last entry exactly 1

  Index size() const { return static_cast<Index>(weights.size()); }

  /// Inverse-CDF lookup: smallest i with cumulative[i] > u, u in [0, 1).
  Index index_from_uniform(double u) const;
};

SamplingDistribution build_q(const std::vector<double>& lipschitz);

Index sample_nonuniform(const SamplingDistribution& q, SeededRng& rng);
Index sample_uniform(Index n, SeededRng& rng);

}  // namespace svrda

#endif
