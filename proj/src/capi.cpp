#include "womc.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "wom/codec.hpp"
#include "wom/construct.hpp"
#include "wom/model.hpp"
#include "wom/sim.hpp"
#include "wom/validate.hpp"

struct womc_model {
  wom::SourceModel impl;
};

struct womc_set {
  wom::HighEntropySet impl;
};

namespace {

thread_local std::string g_last_error;

womc_status fail(womc_status status, const char* what) {
  g_last_error = what ? what : "";
  return status;
}

// Exceptions crossing the C boundary become status codes.
template <class Fn>
womc_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::domain_error& e) {
    return fail(WOMC_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    const std::string_view what = e.what();
    if (what.find("limit") != std::string_view::npos)
      return fail(WOMC_ERR_LIMIT, e.what());
    return fail(WOMC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    const std::string_view what = e.what();
    if (what.find("cannot open") != std::string_view::npos ||
        what.find("cannot write") != std::string_view::npos ||
        what.find("write failed") != std::string_view::npos)
      return fail(WOMC_ERR_IO, e.what());
    return fail(WOMC_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(WOMC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(WOMC_ERR_INTERNAL, e.what());
  }
}

womc_status copy_string(const std::string& text, char** out) {
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (!buf) return fail(WOMC_ERR_INTERNAL, "out of memory");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  *out = buf;
  return WOMC_OK;
}

wom::Method to_method(womc_method m) {
  return m == WOMC_METHOD_EXACT ? wom::Method::exact : wom::Method::monte_carlo;
}

wom::SelectMode to_mode(womc_select_mode m) {
  return m == WOMC_SELECT_THRESHOLD ? wom::SelectMode::threshold
                                    : wom::SelectMode::target_rate;
}

womc_report to_c_report(const wom::ExperimentReport& r) {
  womc_report out{};
  out.n_cells = r.n_cells;
  out.s = r.s;
  out.t = r.t;
  out.rate = r.rate;
  out.capacity = r.capacity;
  out.trials = r.trials;
  out.successes = r.successes;
  out.zero_prob_failures = r.zero_prob_failures;
  out.violations = r.violations;
  out.flip_mean = r.flip_mean;
  out.flip_stderr = r.flip_stderr;
  out.seconds = r.seconds;
  out.decode_mismatches = r.decode_mismatches;
  return out;
}

wom::ExperimentReport from_c_report(const womc_report& r) {
  wom::ExperimentReport out;
  out.n_cells = r.n_cells;
  out.s = r.s;
  out.t = r.t;
  out.rate = r.rate;
  out.capacity = r.capacity;
  out.trials = r.trials;
  out.successes = r.successes;
  out.zero_prob_failures = r.zero_prob_failures;
  out.violations = r.violations;
  out.flip_mean = r.flip_mean;
  out.flip_stderr = r.flip_stderr;
  out.seconds = r.seconds;
  out.decode_mismatches = r.decode_mismatches;
  return out;
}

}  // namespace

extern "C" {

const char* womc_version(void) { return "1.0.0"; }

const char* womc_status_message(womc_status status) {
  switch (status) {
    case WOMC_OK: return "ok";
    case WOMC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WOMC_ERR_DOMAIN: return "domain error";
    case WOMC_ERR_IO: return "I/O error";
    case WOMC_ERR_PARSE: return "parse error";
    case WOMC_ERR_LIMIT: return "enumeration limit exceeded";
    case WOMC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* womc_last_error(void) { return g_last_error.c_str(); }

womc_status womc_model_create(double s, double t, womc_model** out) {
  if (!out) return fail(WOMC_ERR_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    *out = new womc_model{wom::SourceModel(s, t)};
    return WOMC_OK;
  });
}

void womc_model_destroy(womc_model* model) { delete model; }

womc_status womc_model_get_stats(const womc_model* model, womc_model_stats* out) {
  if (!model || !out) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const wom::ModelStats stats = wom::model_stats(model->impl);
    out->conditional_entropy = stats.conditional_entropy;
    out->capacity = stats.capacity;
    out->expected_flip_fraction = stats.expected_flip_fraction;
    return WOMC_OK;
  });
}

womc_status womc_entropy(double p, double* out) {
  if (!out) return fail(WOMC_ERR_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    *out = wom::entropy(p);
    return WOMC_OK;
  });
}

womc_status womc_sample_state(const womc_model* model, size_t n_cells,
                              uint64_t seed, uint8_t* out_bits) {
  if (!model || !out_bits) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const wom::BitVec y = wom::sample_state(model->impl, n_cells, seed);
    std::memcpy(out_bits, y.data(), y.size());
    return WOMC_OK;
  });
}

womc_status womc_construct(const womc_model* model, uint32_t log2_n,
                           const womc_construct_params* params, womc_set** out) {
  if (!model || !params || !out)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  if (log2_n > 24) return fail(WOMC_ERR_INVALID_ARGUMENT, "log2_n too large");
  return guarded([&] {
    const std::size_t n = std::size_t{1} << log2_n;
    wom::IndexStats stats =
        params->method == WOMC_METHOD_EXACT
            ? wom::exact_statistics(model->impl, n)
            : wom::estimate_statistics(model->impl, n, params->samples,
                                       params->seed);
    *out = new womc_set{wom::select_high_entropy_set(
        stats, to_mode(params->mode), params->threshold_or_rate)};
    return WOMC_OK;
  });
}

void womc_set_destroy(womc_set* set) { delete set; }

womc_status womc_set_get_info(const womc_set* set, womc_set_info* out) {
  if (!set || !out) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  const wom::HighEntropySet& s = set->impl;
  out->n_cells = s.n_cells;
  out->message_length = s.message_length();
  out->s = s.s;
  out->t = s.t;
  out->method = s.method == wom::Method::exact ? WOMC_METHOD_EXACT
                                               : WOMC_METHOD_MONTE_CARLO;
  out->mode = s.mode == wom::SelectMode::threshold ? WOMC_SELECT_THRESHOLD
                                                   : WOMC_SELECT_TARGET_RATE;
  out->threshold_or_rate = s.threshold_or_rate;
  out->samples = s.samples;
  out->seed = s.seed;
  out->has_stats = s.has_stats ? 1 : 0;
  return WOMC_OK;
}

womc_status womc_set_get_indices(const womc_set* set, uint32_t* buf,
                                 size_t buf_len) {
  if (!set || (!buf && buf_len)) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  if (buf_len < set->impl.indices.size())
    return fail(WOMC_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buf, set->impl.indices.data(),
              set->impl.indices.size() * sizeof(uint32_t));
  return WOMC_OK;
}

womc_status womc_set_save(const womc_set* set, const char* path) {
  if (!set || !path) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    wom::save_set(set->impl, path);
    return WOMC_OK;
  });
}

womc_status womc_set_load(const char* path, womc_set** out) {
  if (!path || !out) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new womc_set{wom::load_set(path)};
    return WOMC_OK;
  });
}

womc_status womc_encode(const womc_model* model, const womc_set* set,
                        const uint8_t* state, const uint8_t* message,
                        uint64_t seed, uint32_t max_attempts, int greedy,
                        uint8_t* codeword_out, womc_encode_result* result) {
  if (!model || !set || !state || !codeword_out || !result)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  if (!message && set->impl.message_length() > 0)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "message is null");
  return guarded([&] {
    const std::size_t n = set->impl.n_cells;
    const wom::BitVec y(state, state + n);
    const wom::BitVec v(message, message + set->impl.message_length());
    wom::EncodeOptions options;
    options.max_attempts = max_attempts;
    options.greedy = greedy != 0;
    const wom::EncodeOutcome outcome =
        wom::encode(model->impl, set->impl, y, v, seed, options);
    result->status = outcome.status == wom::EncodeStatus::ok
                         ? WOMC_ENCODE_OK
                         : outcome.status == wom::EncodeStatus::zero_probability
                               ? WOMC_ENCODE_ZERO_PROBABILITY
                               : WOMC_ENCODE_WRITE_VIOLATION;
    result->failure_index = outcome.failure_index;
    result->violation_count = outcome.violations.size();
    result->attempts_used = outcome.attempts_used;
    result->flips = outcome.flips;
    if (outcome.ok()) std::memcpy(codeword_out, outcome.codeword.data(), n);
    return WOMC_OK;
  });
}

womc_status womc_decode(const womc_set* set, const uint8_t* codeword,
                        uint8_t* message_out) {
  if (!set || !codeword || (!message_out && set->impl.message_length() > 0))
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const wom::BitVec x(codeword, codeword + set->impl.n_cells);
    const wom::BitVec v = wom::decode(x, set->impl);
    std::memcpy(message_out, v.data(), v.size());
    return WOMC_OK;
  });
}

womc_status womc_validate_write(const uint8_t* before, const uint8_t* after,
                                size_t n, size_t* violation_count) {
  if (!before || !after || !violation_count)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const wom::BitVec y(before, before + n);
    const wom::BitVec x(after, after + n);
    *violation_count = wom::validate_write(y, x).size();
    return WOMC_OK;
  });
}

womc_status womc_run_experiment(const womc_model* model, const womc_set* set,
                                uint64_t trials, uint64_t seed,
                                womc_report* out) {
  if (!model || !set || !out) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = to_c_report(
        wom::run_write_experiment(model->impl, set->impl, trials, seed));
    return WOMC_OK;
  });
}

womc_status womc_run_multiwrite(const double* t_schedule, size_t schedule_len,
                                uint32_t log2_n, uint64_t trials, uint64_t seed,
                                const womc_construct_params* params,
                                womc_report* out_reports) {
  if (!t_schedule || !params || !out_reports || schedule_len == 0)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  if (params->mode != WOMC_SELECT_TARGET_RATE)
    return fail(WOMC_ERR_INVALID_ARGUMENT,
                "multiwrite construction requires target-rate mode");
  if (log2_n > 24) return fail(WOMC_ERR_INVALID_ARGUMENT, "log2_n too large");
  return guarded([&] {
    wom::MultiwriteConfig config;
    config.method = to_method(params->method);
    config.samples = params->samples;
    config.target_rate = params->threshold_or_rate;
    const std::vector<double> schedule(t_schedule, t_schedule + schedule_len);
    const auto reports = wom::run_multiwrite(schedule, std::size_t{1} << log2_n,
                                             trials, seed, config);
    for (std::size_t i = 0; i < reports.size(); ++i)
      out_reports[i] = to_c_report(reports[i]);
    return WOMC_OK;
  });
}

womc_status womc_tv_exact(const womc_model* model, const womc_set* set,
                          womc_tv_report* out) {
  if (!model || !set || !out) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const wom::TvReport tv = wom::tv_distance_exact(model->impl, set->impl);
    out->n_cells = tv.n_cells;
    out->tv = tv.tv;
    out->bound = tv.bound;
    return WOMC_OK;
  });
}

womc_status womc_reports_to_csv(const womc_report* reports, size_t count,
                                int include_timing, char** out) {
  if ((!reports && count) || !out)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<wom::ExperimentReport> rs;
    rs.reserve(count);
    for (size_t i = 0; i < count; ++i) rs.push_back(from_c_report(reports[i]));
    return copy_string(wom::reports_to_csv(rs, include_timing != 0), out);
  });
}

womc_status womc_reports_to_json(const womc_report* reports, size_t count,
                                 int include_timing, char** out) {
  if ((!reports && count) || !out)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<wom::ExperimentReport> rs;
    rs.reserve(count);
    for (size_t i = 0; i < count; ++i) rs.push_back(from_c_report(reports[i]));
    return copy_string(wom::reports_to_json(rs, include_timing != 0), out);
  });
}

void womc_string_free(char* s) { std::free(s); }

womc_status womc_bits_read_file(const char* path, uint8_t** out_bits,
                                size_t* out_len) {
  if (!path || !out_bits || !out_len)
    return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const wom::BitVec bits = wom::read_bits_file(path);
    auto* buf = static_cast<uint8_t*>(std::malloc(bits.empty() ? 1 : bits.size()));
    if (!buf) return fail(WOMC_ERR_INTERNAL, "out of memory");
    std::memcpy(buf, bits.data(), bits.size());
    *out_bits = buf;
    *out_len = bits.size();
    return WOMC_OK;
  });
}

womc_status womc_bits_write_file(const char* path, const uint8_t* bits,
                                 size_t len) {
  if (!path || (!bits && len)) return fail(WOMC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    wom::write_bits_file(path, wom::BitVec(bits, bits + len));
    return WOMC_OK;
  });
}

void womc_bits_free(uint8_t* bits) { std::free(bits); }

womc_status womc_self_check(uint32_t max_log2_n, womc_check_callback callback,
                            void* user, int* all_passed) {
  if (!all_passed) return fail(WOMC_ERR_INVALID_ARGUMENT, "all_passed is null");
  return guarded([&] {
    const auto results = wom::run_validation(max_log2_n);
    int ok = 1;
    for (const auto& r : results) {
      if (!r.passed) ok = 0;
      if (callback) callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    }
    *all_passed = ok;
    return WOMC_OK;
  });
}

}  // extern "C"
