#include "svrda/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace svrda {

double SeededRng::next_gaussian() {
  const double u1 = next_open_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Index SamplingDistribution::index_from_uniform(double u) const {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;  // u == 1 cannot happen, guard anyway
  return static_cast<Index>(it - cumulative.begin());
}

SamplingDistribution build_q(const std::vector<double>& lipschitz) {
  if (lipschitz.empty()) throw std::invalid_argument("build_q: empty Lipschitz array");
  const std::size_t n = lipschitz.size();
  double sum = 0.0;
  for (double li : lipschitz) {
    if (!(li > 0.0)) throw std::invalid_argument("build_q: needs all L_i > 0");
    sum += li;
  }
  SamplingDistribution q;
  q.weights.resize(n);
  q.cumulative.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q.weights[i] = lipschitz[i] / sum;  // = L_i / (n Lbar)
    acc += q.weights[i];
    q.cumulative[i] = acc;
  }
  q.cumulative[n - 1] = 1.0;  // snap away the last rounding residue
  return q;
}

Index sample_nonuniform(const SamplingDistribution& q, SeededRng& rng) {
  return q.index_from_uniform(rng.next_double());
}

Index sample_uniform(Index n, SeededRng& rng) {
  Index i = static_cast<Index>(rng.next_double() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

}  // namespace svrda
