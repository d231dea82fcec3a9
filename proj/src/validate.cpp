#include "wom/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "wom/construct.hpp"
#include "wom/model.hpp"
#include "wom/polar.hpp"
#include "wom/rng.hpp"
#include "wom/sc.hpp"
#include "wom/sim.hpp"

namespace wom {

namespace {

constexpr std::uint64_t kCheckSeed = 0x76616c6964ull;

BitVec random_bits(SplitMix64& rng, std::size_t n) {
  BitVec v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng.next() & 1u);
  return v;
}

BitVec bits_of(std::uint32_t word, std::size_t n) {
  BitVec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (word >> i) & 1u;
  return v;
}

CheckResult check_involution(unsigned max_log2_n) {
  SplitMix64 rng(kCheckSeed);
  const unsigned cap = std::min(max_log2_n, 8u);
  for (unsigned log2n = 1; log2n <= cap; ++log2n) {
    const std::size_t n = std::size_t{1} << log2n;
    for (int trial = 0; trial < 200; ++trial) {
      const BitVec x = random_bits(rng, n);
      if (polar_transform(polar_transform(x)) != x)
        return {"transform_involution", false,
                "double transform differs at N=" + std::to_string(n)};
    }
  }
  return {"transform_involution", true,
          "200 random inputs per size up to N=" + std::to_string(1u << cap)};
}

CheckResult check_chain_rule(unsigned max_log2_n) {
  const double grid[] = {0.3, 0.5, 0.7};
  double worst = 0.0;
  const unsigned cap = std::min(max_log2_n, 3u);
  for (unsigned log2n = 0; log2n <= cap; ++log2n) {
    const std::size_t n = std::size_t{1} << log2n;
    for (double s : grid)
      for (double t : grid) {
        const SourceModel model(s, t);
        for (std::uint32_t yw = 0; yw < (1u << n); ++yw) {
          const BitVec y = bits_of(yw, n);
          for (std::uint32_t uw = 0; uw < (1u << n); ++uw) {
            const BitVec u = bits_of(uw, n);
            const double chained = chain_probability(model, y, u);
            const BitVec x = polar_transform(u);
            double direct = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
              const ProbPair leaf = leaf_pair(model, y[i]);
              direct *= x[i] ? leaf.p1 : leaf.p0;
            }
            worst = std::max(worst, std::fabs(chained - direct));
          }
        }
      }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max abs error %.2e", worst);
  return {"chain_rule", worst <= 1e-10, buf};
}

CheckResult check_conservation(unsigned max_log2_n) {
  const double grid[] = {0.3, 0.5, 0.7};
  double worst = 0.0;
  const unsigned cap = std::min(max_log2_n, 3u);
  for (unsigned log2n = 1; log2n <= cap; ++log2n) {
    const std::size_t n = std::size_t{1} << log2n;
    for (double s : grid)
      for (double t : grid) {
        const SourceModel model(s, t);
        const IndexStats stats = exact_statistics(model, n);
        double sum = 0.0;
        for (double h : stats.h_hat) sum += h;
        const double expect = static_cast<double>(n) * (1.0 - s) * entropy(t);
        worst = std::max(worst, std::fabs(sum - expect));
      }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max abs deviation %.2e", worst);
  return {"entropy_conservation", worst <= 1e-9, buf};
}

CheckResult check_tv_bound(unsigned max_log2_n) {
  const double grid[] = {0.3, 0.5, 0.7};
  const double thresholds[] = {0.01, 0.05, 0.1};
  double worst_excess = 0.0;
  const unsigned cap = std::min(max_log2_n, 3u);
  for (unsigned log2n = 1; log2n <= cap; ++log2n) {
    const std::size_t n = std::size_t{1} << log2n;
    for (double s : grid)
      for (double t : grid) {
        const SourceModel model(s, t);
        const IndexStats stats = exact_statistics(model, n);
        for (double threshold : thresholds) {
          const HighEntropySet set =
              select_high_entropy_set(stats, SelectMode::threshold, threshold);
          const TvReport tv = tv_distance_exact(model, set);
          worst_excess = std::max(worst_excess, tv.tv - tv.bound);
        }
      }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max (tv - bound) %.2e", worst_excess);
  return {"tv_bound", worst_excess <= 1e-12, buf};
}

}  // namespace

std::vector<CheckResult> run_validation(unsigned max_log2_n) {
  std::vector<CheckResult> results;
  results.push_back(check_involution(max_log2_n));
  results.push_back(check_chain_rule(max_log2_n));
  results.push_back(check_conservation(max_log2_n));
  results.push_back(check_tv_bound(max_log2_n));
  return results;
}

}  // namespace wom
