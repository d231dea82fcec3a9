#include "wom/construct.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "enum_util.hpp"
#include "json.hpp"
#include "wom/polar.hpp"
#include "wom/rng.hpp"
#include "wom/sc.hpp"

namespace wom {

namespace {

double entropy_clamped(double p) {
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  double h = 0.0;
  if (p > 0.0) h += p * std::log2(1.0 / p);
  if (p < 1.0) h += (1.0 - p) * std::log2(1.0 / (1.0 - p));
  return h;
}

void finish_moments(std::uint64_t m, const std::vector<double>& sum,
                    const std::vector<double>& sumsq, std::vector<double>& mean,
                    std::vector<double>& se) {
  const std::size_t n = sum.size();
  mean.resize(n);
  se.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mean[i] = sum[i] / static_cast<double>(m);
    if (m < 2) {
      se[i] = 0.0;
      continue;
    }
    double var = (sumsq[i] - static_cast<double>(m) * mean[i] * mean[i]) /
                 static_cast<double>(m - 1);
    if (var < 0.0) var = 0.0;
    se[i] = std::sqrt(var / static_cast<double>(m));
  }
}

}  // namespace

const char* method_name(Method m) {
  return m == Method::exact ? "exact" : "monte_carlo";
}

const char* select_mode_name(SelectMode m) {
  return m == SelectMode::threshold ? "threshold" : "target_rate";
}

IndexStats exact_statistics(const SourceModel& model, std::size_t n_cells) {
  if (!is_power_of_two(n_cells))
    throw std::invalid_argument("exact_statistics: N is not a power of two");
  if (n_cells > 10)
    throw std::invalid_argument("exact_statistics: N > 10 exceeds the enumeration limit");
  const unsigned n = static_cast<unsigned>(n_cells);
  const std::uint32_t full = static_cast<std::uint32_t>((1ull << n) - 1);

  const detail::ExactEnum enumerator(model, n_cells);
  auto levels = enumerator.make_levels();

  std::vector<double> a(n, 0.0), h(n, 0.0);
  for (std::uint32_t y = 0; y <= full; ++y) {
    const double py = enumerator.prob_y(y);
    if (py == 0.0) continue;
    enumerator.levels_for(y, levels);
    for (unsigned i = 0; i < n; ++i) {
      const std::vector<double>& pref = levels[i];
      const std::vector<double>& ext = levels[i + 1];
      for (std::size_t p = 0; p < pref.size(); ++p) {
        const double tot = pref[p];
        if (tot <= 0.0) continue;
        const double p0 = ext[2 * p] / tot;
        a[i] += py * tot * std::fabs(p0 - 0.5);
        h[i] += py * tot * entropy_clamped(p0);
      }
    }
  }

  IndexStats stats;
  stats.n_cells = n_cells;
  stats.s = model.s();
  stats.t = model.t();
  stats.method = Method::exact;
  stats.a_hat = std::move(a);
  stats.h_hat = std::move(h);
  stats.a_se.assign(n_cells, 0.0);
  stats.h_se.assign(n_cells, 0.0);
  return stats;
}

IndexStats estimate_statistics(const SourceModel& model, std::size_t n_cells,
                               std::uint64_t samples, std::uint64_t seed) {
  if (!is_power_of_two(n_cells))
    throw std::invalid_argument("estimate_statistics: N is not a power of two");
  if (samples == 0)
    throw std::invalid_argument("estimate_statistics: need at least one sample");

  std::vector<double> sum_a(n_cells, 0.0), sumsq_a(n_cells, 0.0);
  std::vector<double> sum_h(n_cells, 0.0), sumsq_h(n_cells, 0.0);
  BitVec y(n_cells), u(n_cells);
  ForcedScan scan(n_cells);
  const double s = model.s(), t = model.t();

  for (std::uint64_t trial = 0; trial < samples; ++trial) {
    SplitMix64 rng(mix_seed(seed, trial));
    for (std::size_t i = 0; i < n_cells; ++i) {
      if (rng.next_bernoulli(s)) {
        y[i] = 0;
        u[i] = 0;
      } else {
        y[i] = 1;
        u[i] = rng.next_bernoulli(t) ? 0 : 1;
      }
    }
    polar_transform_inplace(u);  // decisions realized by this draw
    scan.run(model, y, u, [&](std::size_t i, double p0) {
      double dev, ent;
      if (p0 <= 0.0 || p0 >= 1.0) {  // saturated and uniform conditionals
        dev = 0.5;                   // dominate once polarization kicks in
        ent = 0.0;
      } else if (p0 == 0.5) {
        dev = 0.0;
        ent = 1.0;
      } else {
        dev = std::fabs(p0 - 0.5);
        ent = -(p0 * std::log2(p0) + (1.0 - p0) * std::log2(1.0 - p0));
      }
      sum_a[i] += dev;
      sumsq_a[i] += dev * dev;
      sum_h[i] += ent;
      sumsq_h[i] += ent * ent;
    });
  }

  IndexStats stats;
  stats.n_cells = n_cells;
  stats.s = s;
  stats.t = t;
  stats.method = Method::monte_carlo;
  stats.samples = samples;
  stats.seed = seed;
  finish_moments(samples, sum_a, sumsq_a, stats.a_hat, stats.a_se);
  finish_moments(samples, sum_h, sumsq_h, stats.h_hat, stats.h_se);
  return stats;
}

SourceModel model_for(double s, double t) {
  return s == 0.0 ? SourceModel::first_write(t) : SourceModel(s, t);
}

HighEntropySet select_high_entropy_set(const IndexStats& stats, SelectMode mode,
                                       double param) {
  if (stats.a_hat.size() != stats.n_cells)
    throw std::invalid_argument("select_high_entropy_set: inconsistent stats");
  if (!(param >= 0.0) || !std::isfinite(param))
    throw std::invalid_argument("select_high_entropy_set: bad parameter");

  HighEntropySet set;
  set.n_cells = stats.n_cells;
  set.s = stats.s;
  set.t = stats.t;
  set.method = stats.method;
  set.samples = stats.samples;
  set.seed = stats.seed;
  set.mode = mode;
  set.threshold_or_rate = param;

  if (mode == SelectMode::threshold) {
    for (std::uint32_t i = 0; i < stats.n_cells; ++i)
      if (stats.a_hat[i] <= param) set.indices.push_back(i);
  } else {
    const double capacity = model_stats(model_for(stats.s, stats.t)).capacity;
    const double want = param * static_cast<double>(stats.n_cells) * capacity;
    const auto count = static_cast<std::size_t>(std::ceil(want - 1e-9));
    if (count > stats.n_cells) {
      const double max_rate =
          capacity > 0.0 ? 1.0 / capacity : 0.0;
      throw std::invalid_argument(
          "select_high_entropy_set: target rate needs " + std::to_string(count) +
          " of " + std::to_string(stats.n_cells) +
          " indices; maximum achievable target is " + std::to_string(max_rate));
    }
    std::vector<std::uint32_t> order(stats.n_cells);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t l, std::uint32_t r) {
      if (stats.a_hat[l] != stats.a_hat[r]) return stats.a_hat[l] < stats.a_hat[r];
      return l < r;
    });
    set.indices.assign(order.begin(), order.begin() + count);
    std::sort(set.indices.begin(), set.indices.end());
  }

  set.has_stats = true;
  set.a_hat.reserve(set.indices.size());
  set.a_se.reserve(set.indices.size());
  set.h_hat.reserve(set.indices.size());
  set.h_se.reserve(set.indices.size());
  for (auto i : set.indices) {
    set.a_hat.push_back(stats.a_hat[i]);
    set.a_se.push_back(stats.a_se[i]);
    set.h_hat.push_back(stats.h_hat[i]);
    set.h_se.push_back(stats.h_se[i]);
  }
  return set;
}

void save_set(const HighEntropySet& set, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["N"] = set.n_cells;
  j["s"] = set.s;
  j["t"] = set.t;
  j["method"] = method_name(set.method);
  j["samples"] = set.samples;
  j["seed"] = set.seed;
  j["mode"] = select_mode_name(set.mode);
  j["threshold_or_rate"] = set.threshold_or_rate;
  j["indices"] = set.indices;
  if (set.has_stats) {
    j["stats"] = nlohmann::ordered_json{{"a_hat", set.a_hat},
                                        {"a_se", set.a_se},
                                        {"h_hat", set.h_hat},
                                        {"h_se", set.h_se}};
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

HighEntropySet load_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("set file " + path.string() + ": " + e.what());
  }

  auto fail = [&](const std::string& why) -> std::runtime_error {
    return std::runtime_error("set file " + path.string() + ": " + why);
  };
  try {
    if (j.at("format_version").get<int>() != 1) throw fail("unsupported format_version");
    HighEntropySet set;
    set.n_cells = j.at("N").get<std::size_t>();
    if (!is_power_of_two(set.n_cells)) throw fail("N is not a power of two");
    set.s = j.at("s").get<double>();
    set.t = j.at("t").get<double>();
    if (!(set.s >= 0.0 && set.s < 1.0)) throw fail("s out of range");
    if (!(set.t > 0.0 && set.t < 1.0)) throw fail("t out of range");
    const std::string method = j.at("method").get<std::string>();
    if (method == "exact")
      set.method = Method::exact;
    else if (method == "monte_carlo")
      set.method = Method::monte_carlo;
    else
      throw fail("unknown method '" + method + "'");
    set.samples = j.at("samples").get<std::uint64_t>();
    set.seed = j.at("seed").get<std::uint64_t>();
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "threshold")
      set.mode = SelectMode::threshold;
    else if (mode == "target_rate")
      set.mode = SelectMode::target_rate;
    else
      throw fail("unknown mode '" + mode + "'");
    set.threshold_or_rate = j.at("threshold_or_rate").get<double>();
    if (!(set.threshold_or_rate >= 0.0) || !std::isfinite(set.threshold_or_rate))
      throw fail("bad threshold_or_rate");
    set.indices = j.at("indices").get<std::vector<std::uint32_t>>();
    for (std::size_t i = 0; i < set.indices.size(); ++i) {
      if (set.indices[i] >= set.n_cells) throw fail("index out of range");
      if (i > 0 && set.indices[i] <= set.indices[i - 1])
        throw fail("indices not strictly ascending");
    }
    if (j.contains("stats")) {
      const auto& st = j.at("stats");
      set.a_hat = st.at("a_hat").get<std::vector<double>>();
      set.a_se = st.at("a_se").get<std::vector<double>>();
      set.h_hat = st.at("h_hat").get<std::vector<double>>();
      set.h_se = st.at("h_se").get<std::vector<double>>();
      if (set.a_hat.size() != set.indices.size() ||
          set.a_se.size() != set.indices.size() ||
          set.h_hat.size() != set.indices.size() ||
          set.h_se.size() != set.indices.size())
        throw fail("stats arrays do not match the index list");
      set.has_stats = true;
    } else {
      set.has_stats = false;
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
}

double SetCache::quantize(double v) {
  return static_cast<double>(std::lround(v * 256.0)) / 256.0;
}

const HighEntropySet& SetCache::get_or_build(double s, double t,
                                             std::size_t n_cells, Method method,
                                             std::uint64_t samples,
                                             std::uint64_t seed, SelectMode mode,
                                             double param) {
  const auto q_s = static_cast<std::uint32_t>(
      std::clamp<long>(std::lround(s * 256.0), 0, 255));
  const auto q_t = static_cast<std::uint32_t>(
      std::clamp<long>(std::lround(t * 256.0), 1, 255));
  std::uint64_t param_bits;
  static_assert(sizeof(param_bits) == sizeof(param));
  std::memcpy(&param_bits, &param, sizeof(param));
  const Key key{q_s,
                q_t,
                n_cells,
                samples,
                seed,
                static_cast<int>(method),
                static_cast<int>(mode),
                param_bits};
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;

  const SourceModel model = model_for(q_s / 256.0, q_t / 256.0);
  IndexStats stats = method == Method::exact
                         ? exact_statistics(model, n_cells)
                         : estimate_statistics(model, n_cells, samples, seed);
  auto set = std::make_unique<HighEntropySet>(
      select_high_entropy_set(stats, mode, param));
  const HighEntropySet& ref = *set;
  cache_.emplace(key, std::move(set));
  return ref;
}

}  // namespace wom
