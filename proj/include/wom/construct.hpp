#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <vector>

#include "wom/model.hpp"

namespace wom {

enum class Method { exact, monte_carlo };
enum class SelectMode { threshold, target_rate };

const char* method_name(Method m);
const char* select_mode_name(SelectMode m);

// Per-index polarization statistics over the transformed bits:
//   a_hat[i] ~ E | P(U_i = 0 | Y, U^{i-1}) - 1/2 |
//   h_hat[i] ~ H(U_i | Y, U^{i-1}) in bits
// Exact statistics have zero standard errors and samples = 0.
struct IndexStats {
  std::size_t n_cells = 0;
  double s = 0.0;
  double t = 0.0;
  Method method = Method::exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> a_hat;
  std::vector<double> a_se;
  std::vector<double> h_hat;
  std::vector<double> h_se;
};

// Full enumeration over (y, x); cost 4^N. Rejects n_cells > 10 or lengths
// that are not powers of two.
IndexStats exact_statistics(const SourceModel& model, std::size_t n_cells);

// Monte Carlo: `samples` iid draws (y, x), each scanned with the decisions
// forced to the transform of x. Deterministic given seed (trial substreams
// are mix_seed(seed, trial)).
IndexStats estimate_statistics(const SourceModel& model, std::size_t n_cells,
                               std::uint64_t samples, std::uint64_t seed);

// The index set carrying message bits: the near-uniform (high-entropy)
// positions, selected by half-deviation a_hat.
struct HighEntropySet {
  std::size_t n_cells = 0;
  double s = 0.0;
  double t = 0.0;
  Method method = Method::exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  SelectMode mode = SelectMode::target_rate;
  double threshold_or_rate = 0.0;
  std::vector<std::uint32_t> indices;  // strictly ascending, all < n_cells
  bool has_stats = false;              // aligned per-index stats below
  std::vector<double> a_hat;
  std::vector<double> a_se;
  std::vector<double> h_hat;
  std::vector<double> h_se;

  std::size_t message_length() const { return indices.size(); }
  double rate() const {
    return n_cells ? static_cast<double>(indices.size()) / n_cells : 0.0;
  }
};

// threshold mode: F = { i : a_hat[i] <= param }.
// target_rate mode: the ceil(param * N * capacity) indices with smallest
// a_hat, ties to the smaller index. Throws std::invalid_argument when the
// request exceeds N, naming the maximum achievable rate.
HighEntropySet select_high_entropy_set(const IndexStats& stats, SelectMode mode,
                                       double param);

// Single JSON document; see README for the schema. Round-trip exact.
void save_set(const HighEntropySet& set, const std::filesystem::path& path);
HighEntropySet load_set(const std::filesystem::path& path);  // throws std::runtime_error

// Rebuilds the model an IndexStats/HighEntropySet was computed for
// (s == 0 denotes the fresh-memory first-write model).
SourceModel model_for(double s, double t);

// In-memory construction cache for the multi-write simulator. Keys quantize
// s and t to multiples of 1/256; sets are built on demand at the quantized
// parameters, so a key always means exactly one set.
class SetCache {
 public:
  static double quantize(double v);

  const HighEntropySet& get_or_build(double s, double t, std::size_t n_cells,
                                     Method method, std::uint64_t samples,
                                     std::uint64_t seed, SelectMode mode,
                                     double param);

 private:
  struct Key {
    std::uint32_t s_q, t_q;
    std::uint64_t n, samples, seed;
    int method, mode;
    std::uint64_t param_bits;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::unique_ptr<HighEntropySet>> cache_;
};

}  // namespace wom
