#include "wom/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "enum_util.hpp"
#include "json.hpp"
#include "wom/rng.hpp"

namespace wom {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

BitVec uniform_message(std::size_t len, std::uint64_t seed) {
  SplitMix64 rng(seed);
  BitVec v(len);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng.next() & 1u);
  return v;
}

struct FlipAccumulator {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double fraction) {
    ++count;
    sum += fraction;
    sumsq += fraction * fraction;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double stderr_of_mean() const {
    if (count < 2) return 0.0;
    const double m = mean();
    double var = (sumsq - static_cast<double>(count) * m * m) /
                 static_cast<double>(count - 1);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / static_cast<double>(count));
  }
};

std::string dump_number(double v) { return nlohmann::json(v).dump(); }

}  // namespace

ExperimentReport run_write_experiment(const SourceModel& model,
                                      const HighEntropySet& set,
                                      std::uint64_t trials, std::uint64_t seed) {
  const double start = now_seconds();
  ExperimentReport report;
  report.n_cells = set.n_cells;
  report.s = model.s();
  report.t = model.t();
  report.rate = set.rate();
  report.capacity = model_stats(model).capacity;
  report.trials = trials;

  FlipAccumulator flips;
  const std::size_t n = set.n_cells;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const BitVec state = sample_state(model, n, mix_seed(seed, 3 * trial));
    const BitVec message =
        uniform_message(set.message_length(), mix_seed(seed, 3 * trial + 1));
    const EncodeOutcome outcome =
        encode(model, set, state, message, mix_seed(seed, 3 * trial + 2));
    switch (outcome.status) {
      case EncodeStatus::ok: {
        if (!validate_write(state, outcome.codeword).empty()) {
          ++report.violations;  // defensive; encode already checked
          break;
        }
        ++report.successes;
        if (decode(outcome.codeword, set) != message) ++report.decode_mismatches;
        flips.add(static_cast<double>(outcome.flips) / static_cast<double>(n));
        break;
      }
      case EncodeStatus::zero_probability:
        ++report.zero_prob_failures;
        break;
      case EncodeStatus::write_violation:
        ++report.violations;
        break;
    }
  }
  report.flip_mean = flips.mean();
  report.flip_stderr = flips.stderr_of_mean();
  report.seconds = now_seconds() - start;
  return report;
}

WriteStep write_once(SetCache& cache, const BitVec& state, double t,
                     std::uint64_t msg_seed, std::uint64_t enc_seed,
                     std::uint64_t cons_seed, const MultiwriteConfig& config) {
  const std::size_t n = state.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("write_once: state length is not a power of two");

  std::size_t zeros = 0;
  for (auto b : state) zeros += (b == 0);
  const long q_s = std::lround(static_cast<double>(zeros) / n * 256.0);

  WriteStep step;
  step.next_state = state;
  if (q_s >= 256) {
    // Nothing writable; record a vacuous zero-bit write and move on.
    step.ok = true;
    step.round_trip_ok = true;
    step.s_used = 1.0;
    return step;
  }
  const double s_q = std::clamp(q_s, 0l, 255l) / 256.0;
  const double t_q = std::clamp(std::lround(t * 256.0), 1l, 255l) / 256.0;
  step.s_used = s_q;

  const SourceModel model = model_for(s_q, t_q);
  const HighEntropySet& set =
      cache.get_or_build(s_q, t_q, n, config.method, config.samples, cons_seed,
                         SelectMode::target_rate, config.target_rate);

  const BitVec message = uniform_message(set.message_length(), msg_seed);
  const EncodeOutcome outcome = encode(model, set, state, message, enc_seed);
  if (!outcome.ok()) {
    step.failure = outcome.status;
    return step;
  }
  step.ok = true;
  step.next_state = outcome.codeword;
  step.message_bits = set.message_length();
  step.flips = outcome.flips;
  step.round_trip_ok = decode(outcome.codeword, set) == message;
  return step;
}

std::uint64_t multiwrite_construction_seed(std::uint64_t seed) {
  return mix_seed(seed, 0x5e75);
}

std::vector<ExperimentReport> run_multiwrite(const std::vector<double>& t_schedule,
                                             std::size_t n_cells,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             const MultiwriteConfig& config) {
  if (t_schedule.empty())
    throw std::invalid_argument("run_multiwrite: empty schedule");
  if (!is_power_of_two(n_cells))
    throw std::invalid_argument("run_multiwrite: N is not a power of two");
  for (double t : t_schedule)
    if (!(t > 0.0 && t < 1.0))
      throw std::invalid_argument("run_multiwrite: schedule entries must lie in (0,1)");

  SetCache cache;
  const std::uint64_t cons_seed = multiwrite_construction_seed(seed);
  std::vector<BitVec> states(trials, BitVec(n_cells, 1));  // fresh memory
  std::vector<ExperimentReport> reports;
  reports.reserve(t_schedule.size());

  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    const double start = now_seconds();
    const double t_q = std::clamp(std::lround(t_schedule[k] * 256.0), 1l, 255l) / 256.0;
    // Write 1 derives per-trial streams exactly like run_write_experiment so
    // that a length-1 schedule reduces to it.
    const std::uint64_t write_seed =
        k == 0 ? seed : mix_seed(seed, 0x6d770000ull + k);

    ExperimentReport report;
    report.n_cells = n_cells;
    report.t = t_q;
    report.trials = trials;
    FlipAccumulator flips;
    double s_sum = 0.0, capacity_sum = 0.0;
    std::uint64_t message_bits_written = 0;

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      WriteStep step = write_once(cache, states[trial], t_schedule[k],
                                  mix_seed(write_seed, 3 * trial + 1),
                                  mix_seed(write_seed, 3 * trial + 2), cons_seed,
                                  config);
      s_sum += step.s_used;
      capacity_sum += (1.0 - step.s_used) * entropy(t_q);
      if (step.ok) {
        ++report.successes;
        if (!step.round_trip_ok) ++report.decode_mismatches;
        message_bits_written += step.message_bits;
        flips.add(static_cast<double>(step.flips) / static_cast<double>(n_cells));
        states[trial] = std::move(step.next_state);
      } else if (step.failure == EncodeStatus::zero_probability) {
        ++report.zero_prob_failures;  // state unchanged: write aborted
      } else {
        ++report.violations;
      }
    }
    if (trials > 0) {
      report.s = s_sum / static_cast<double>(trials);
      report.capacity = capacity_sum / static_cast<double>(trials);
      report.rate = static_cast<double>(message_bits_written) /
                    (static_cast<double>(trials) * static_cast<double>(n_cells));
    }
    report.flip_mean = flips.mean();
    report.flip_stderr = flips.stderr_of_mean();
    report.seconds = now_seconds() - start;
    reports.push_back(report);
  }
  return reports;
}

TvReport tv_distance_exact(const SourceModel& model, const HighEntropySet& set) {
  const std::size_t n = set.n_cells;
  if (!is_power_of_two(n))
    throw std::invalid_argument("tv_distance_exact: N is not a power of two");
  if (n > 8)
    throw std::invalid_argument("tv_distance_exact: N > 8 exceeds the enumeration limit");

  std::vector<std::uint8_t> selected(n, 0);
  for (auto i : set.indices) selected[i] = 1;

  const IndexStats stats = exact_statistics(model, n);
  double bound = 0.0;
  for (auto i : set.indices) bound += 2.0 * stats.a_hat[i];

  const detail::ExactEnum enumerator(model, n);
  auto levels = enumerator.make_levels();

  double tv = 0.0;
  // Depth-first over prefixes. The encoder-induced distribution factors as
  // 1/2 on selected indices and the model conditional elsewhere; on branches
  // the model cannot reach, only its total mass matters, so the subtree
  // collapses to q_mass regardless of how a conditional would be defined
  // there. Until the first selected index the two measures coincide, so the
  // walk reuses the model mass verbatim there (and TV is exactly zero for an
  // empty selection).
  auto walk = [&](auto&& self, std::size_t depth, std::size_t prefix,
                  double q_mass, bool diverged) -> void {
    const double p_mass = levels[depth][prefix];
    if (!diverged) q_mass = p_mass;
    if (p_mass == 0.0) {
      tv += q_mass;
      return;
    }
    if (depth == n) {
      tv += std::fabs(p_mass - q_mass);
      return;
    }
    if (selected[depth]) {
      self(self, depth + 1, 2 * prefix, 0.5 * q_mass, true);
      self(self, depth + 1, 2 * prefix + 1, 0.5 * q_mass, true);
    } else if (!diverged) {
      self(self, depth + 1, 2 * prefix, 0.0, false);
      self(self, depth + 1, 2 * prefix + 1, 0.0, false);
    } else {
      const double p0 = levels[depth + 1][2 * prefix] / p_mass;
      self(self, depth + 1, 2 * prefix, q_mass * p0, true);
      self(self, depth + 1, 2 * prefix + 1, q_mass * (1.0 - p0), true);
    }
  };

  const std::uint32_t full = static_cast<std::uint32_t>((1ull << n) - 1);
  for (std::uint32_t y = 0; y <= full; ++y) {
    const double py = enumerator.prob_y(y);
    if (py == 0.0) continue;
    enumerator.levels_for(y, levels);
    // Scale conditional levels by P(y) so masses are joint over (y, u).
    for (auto& level : levels)
      for (auto& v : level) v *= py;
    walk(walk, 0, 0, py, false);
  }

  return TvReport{n, tv, bound};
}

std::string reports_to_csv(std::span<const ExperimentReport> reports,
                           bool include_timing) {
  std::string out =
      "N,s,t,rate,capacity,trials,successes,zero_prob_failures,violations,"
      "flip_mean,flip_stderr,seconds\n";
  for (const auto& r : reports) {
    out += std::to_string(r.n_cells);
    out += ',';
    out += dump_number(r.s);
    out += ',';
    out += dump_number(r.t);
    out += ',';
    out += dump_number(r.rate);
    out += ',';
    out += dump_number(r.capacity);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.successes);
    out += ',';
    out += std::to_string(r.zero_prob_failures);
    out += ',';
    out += std::to_string(r.violations);
    out += ',';
    out += dump_number(r.flip_mean);
    out += ',';
    out += dump_number(r.flip_stderr);
    out += ',';
    out += dump_number(include_timing ? r.seconds : 0.0);
    out += '\n';
  }
  return out;
}

std::string reports_to_json(std::span<const ExperimentReport> reports,
                            bool include_timing) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["N"] = r.n_cells;
    j["s"] = r.s;
    j["t"] = r.t;
    j["rate"] = r.rate;
    j["capacity"] = r.capacity;
    j["trials"] = r.trials;
    j["successes"] = r.successes;
    j["zero_prob_failures"] = r.zero_prob_failures;
    j["violations"] = r.violations;
    j["flip_mean"] = r.flip_mean;
    j["flip_stderr"] = r.flip_stderr;
    j["seconds"] = include_timing ? r.seconds : 0.0;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace wom
