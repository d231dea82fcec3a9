#include "wom/model.hpp"

#include <cmath>
#include <stdexcept>

#include "wom/rng.hpp"

namespace wom {

SourceModel::SourceModel(double s, double t) : SourceModel(s, t, true) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("SourceModel: s must lie strictly in (0,1)");
}

SourceModel::SourceModel(double s, double t, bool) : s_(s), t_(t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("SourceModel: t must lie strictly in (0,1)");
  if (!(s >= 0.0 && s < 1.0))
    throw std::invalid_argument("SourceModel: s out of range");
}

SourceModel SourceModel::first_write(double t) { return SourceModel(0.0, t, false); }

double entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("entropy: p outside [0,1]");
  double h = 0.0;
  if (p > 0.0) h += p * std::log2(1.0 / p);
  if (p < 1.0) h += (1.0 - p) * std::log2(1.0 / (1.0 - p));
  return h;
}

ModelStats model_stats(const SourceModel& model) {
  const double h = (1.0 - model.s()) * entropy(model.t());
  return ModelStats{h, h, (1.0 - model.s()) * model.t()};
}

BitVec sample_state(const SourceModel& model, std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  BitVec y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = rng.next_bernoulli(model.s()) ? 0 : 1;
  return y;
}

std::pair<BitVec, BitVec> sample_joint(const SourceModel& model, std::size_t n,
                                       std::uint64_t seed) {
  SplitMix64 rng(seed);
  BitVec y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.next_bernoulli(model.s())) {
      y[i] = 0;
      x[i] = 0;  // a cell in state 0 forces the bit
    } else {
      y[i] = 1;
      x[i] = rng.next_bernoulli(model.t()) ? 0 : 1;
    }
  }
  return {std::move(y), std::move(x)};
}

std::size_t count_flips(const BitVec& before, const BitVec& after) {
  if (before.size() != after.size())
    throw std::invalid_argument("count_flips: length mismatch");
  std::size_t flips = 0;
  for (std::size_t i = 0; i < before.size(); ++i)
    flips += (before[i] == 1 && after[i] == 0);
  return flips;
}

}  // namespace wom
