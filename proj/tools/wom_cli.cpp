// Command-line front end for the womc library. Everything observable is
// deterministic given the argument list: seeds default to fixed constants and
// wall-clock timing stays out of the output files unless --timing is passed.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "womc.h"

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct ModelHandle {
  womc_model* ptr = nullptr;
  ~ModelHandle() { womc_model_destroy(ptr); }
};

struct SetHandle {
  womc_set* ptr = nullptr;
  ~SetHandle() { womc_set_destroy(ptr); }
};

int report_error(const char* context, womc_status status) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", context,
               womc_status_message(status), womc_last_error());
  return 2;
}

bool parse_method(const std::string& name, womc_method* out) {
  if (name == "exact") {
    *out = WOMC_METHOD_EXACT;
    return true;
  }
  if (name == "monte_carlo") {
    *out = WOMC_METHOD_MONTE_CARLO;
    return true;
  }
  return false;
}

std::vector<std::uint32_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(static_cast<std::uint32_t>(std::stoul(text.substr(pos, next - pos))));
    pos = next + 1;
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

int write_text_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return 2;
  }
  out << text;
  return out ? 0 : 2;
}

struct ConstructArgs {
  std::uint32_t log2_n = 0;
  double s = 0.0, t = 0.0;
  std::string method = "monte_carlo";
  std::string mode = "rate";
  double target = 0.8;
  double threshold = 0.05;
  std::uint64_t samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::string out_path = "set.json";
};

int fill_params(const ConstructArgs& a, womc_construct_params* params) {
  if (!(a.s > 0.0 && a.s < 1.0)) {
    std::fprintf(stderr, "error: --s must lie strictly in (0,1)\n");
    return 2;
  }
  if (!(a.t > 0.0 && a.t < 1.0)) {
    std::fprintf(stderr, "error: --t must lie strictly in (0,1)\n");
    return 2;
  }
  if (a.log2_n > 24) {
    std::fprintf(stderr, "error: --n above 24 is not supported\n");
    return 2;
  }
  if (!parse_method(a.method, &params->method)) {
    std::fprintf(stderr, "error: --method must be exact or monte_carlo\n");
    return 2;
  }
  if (params->method == WOMC_METHOD_EXACT && (1u << a.log2_n) > 10) {
    std::fprintf(stderr, "error: exact construction handles N <= 10 (use --n <= 3)\n");
    return 2;
  }
  if (params->method == WOMC_METHOD_MONTE_CARLO && a.samples == 0) {
    std::fprintf(stderr, "error: --samples must be positive\n");
    return 2;
  }
  if (a.mode == "rate") {
    params->mode = WOMC_SELECT_TARGET_RATE;
    params->threshold_or_rate = a.target;
    if (!(a.target > 0.0)) {
      std::fprintf(stderr, "error: --target must be positive\n");
      return 2;
    }
  } else if (a.mode == "threshold") {
    params->mode = WOMC_SELECT_THRESHOLD;
    params->threshold_or_rate = a.threshold;
    if (!(a.threshold >= 0.0)) {
      std::fprintf(stderr, "error: --threshold must be nonnegative\n");
      return 2;
    }
  } else {
    std::fprintf(stderr, "error: --mode must be rate or threshold\n");
    return 2;
  }
  params->samples = a.samples;
  params->seed = a.seed;
  return 0;
}

int cmd_construct(const ConstructArgs& a) {
  womc_construct_params params{};
  if (int rc = fill_params(a, &params)) return rc;

  ModelHandle model;
  if (womc_status st = womc_model_create(a.s, a.t, &model.ptr))
    return report_error("model", st);
  SetHandle set;
  if (womc_status st = womc_construct(model.ptr, a.log2_n, &params, &set.ptr))
    return report_error("construct", st);
  if (womc_status st = womc_set_save(set.ptr, a.out_path.c_str()))
    return report_error("save", st);

  womc_set_info info{};
  womc_set_get_info(set.ptr, &info);
  womc_model_stats stats{};
  womc_model_get_stats(model.ptr, &stats);
  const double rate = static_cast<double>(info.message_length) / info.n_cells;
  std::printf("N=%zu |F|=%zu rate=%.9g capacity=%.9g rate/capacity=%.9g\n",
              info.n_cells, info.message_length, rate, stats.capacity,
              stats.capacity > 0.0 ? rate / stats.capacity : 0.0);
  return 0;
}

struct BitsBuffer {
  uint8_t* data = nullptr;
  size_t len = 0;
  ~BitsBuffer() { womc_bits_free(data); }
};

int load_set_and_model(const std::string& path, SetHandle* set, ModelHandle* model,
                       womc_set_info* info) {
  if (womc_status st = womc_set_load(path.c_str(), &set->ptr))
    return report_error(path.c_str(), st);
  womc_set_get_info(set->ptr, info);
  if (model) {
    if (womc_status st = womc_model_create(info->s, info->t, &model->ptr))
      return report_error("model from set file", st);
  }
  return 0;
}

int cmd_encode(const std::string& set_path, const std::string& state_path,
               const std::string& message_path, const std::string& out_path,
               std::uint64_t seed, std::uint32_t max_attempts, bool greedy) {
  if (max_attempts == 0) {
    std::fprintf(stderr, "error: --max-attempts must be positive\n");
    return 2;
  }
  SetHandle set;
  ModelHandle model;
  womc_set_info info{};
  if (int rc = load_set_and_model(set_path, &set, &model, &info)) return rc;

  BitsBuffer state, message;
  if (womc_status st = womc_bits_read_file(state_path.c_str(), &state.data, &state.len))
    return report_error(state_path.c_str(), st);
  if (womc_status st =
          womc_bits_read_file(message_path.c_str(), &message.data, &message.len))
    return report_error(message_path.c_str(), st);
  if (state.len != info.n_cells) {
    std::fprintf(stderr, "error: state has %zu bits, set expects N=%zu\n",
                 state.len, info.n_cells);
    return 2;
  }
  if (message.len != info.message_length) {
    std::fprintf(stderr, "error: message has %zu bits, set expects M=%zu\n",
                 message.len, info.message_length);
    return 2;
  }

  std::vector<uint8_t> codeword(info.n_cells);
  womc_encode_result result{};
  if (womc_status st = womc_encode(model.ptr, set.ptr, state.data, message.data,
                                   seed, max_attempts, greedy ? 1 : 0,
                                   codeword.data(), &result))
    return report_error("encode", st);

  if (result.status == WOMC_ENCODE_ZERO_PROBABILITY) {
    std::printf("encode failed: kind=zero_probability index=%zu attempts=%" PRIu32 "\n",
                result.failure_index, result.attempts_used);
    return 3;
  }
  if (result.status == WOMC_ENCODE_WRITE_VIOLATION) {
    std::printf("encode failed: kind=write_violation violations=%zu attempts=%" PRIu32 "\n",
                result.violation_count, result.attempts_used);
    return 3;
  }
  if (womc_status st = womc_bits_write_file(out_path.c_str(), codeword.data(),
                                            codeword.size()))
    return report_error(out_path.c_str(), st);
  std::printf("ok attempts=%" PRIu32 " flips=%zu\n", result.attempts_used,
              result.flips);
  return 0;
}

int cmd_decode(const std::string& set_path, const std::string& in_path,
               const std::string& out_path) {
  SetHandle set;
  womc_set_info info{};
  if (int rc = load_set_and_model(set_path, &set, nullptr, &info)) return rc;

  BitsBuffer codeword;
  if (womc_status st =
          womc_bits_read_file(in_path.c_str(), &codeword.data, &codeword.len))
    return report_error(in_path.c_str(), st);
  if (codeword.len != info.n_cells) {
    std::fprintf(stderr, "error: codeword has %zu bits, set expects N=%zu\n",
                 codeword.len, info.n_cells);
    return 2;
  }
  std::vector<uint8_t> message(info.message_length);
  if (womc_status st = womc_decode(set.ptr, codeword.data, message.data()))
    return report_error("decode", st);
  if (womc_status st = womc_bits_write_file(out_path.c_str(), message.data(),
                                            message.size()))
    return report_error(out_path.c_str(), st);
  std::printf("ok bits=%zu\n", message.size());
  return 0;
}

int emit_reports(const std::vector<womc_report>& reports, const std::string& csv_path,
                 const std::string& json_path, bool timing) {
  char* csv = nullptr;
  if (womc_status st = womc_reports_to_csv(reports.data(), reports.size(),
                                           timing ? 1 : 0, &csv))
    return report_error("csv", st);
  std::unique_ptr<char, void (*)(char*)> csv_guard(csv, womc_string_free);
  if (csv_path.empty()) {
    std::fputs(csv, stdout);
  } else if (int rc = write_text_file(csv_path, csv)) {
    return rc;
  }
  if (!json_path.empty()) {
    char* json = nullptr;
    if (womc_status st = womc_reports_to_json(reports.data(), reports.size(),
                                              timing ? 1 : 0, &json))
      return report_error("json", st);
    std::unique_ptr<char, void (*)(char*)> json_guard(json, womc_string_free);
    if (int rc = write_text_file(json_path, json)) return rc;
  }
  return 0;
}

int cmd_bench(const std::string& n_list, ConstructArgs cons, std::uint64_t trials,
              std::uint64_t seed, const std::string& csv_path,
              const std::string& json_path, bool timing) {
  std::vector<std::uint32_t> sizes;
  try {
    sizes = parse_uint_list(n_list);
  } catch (const std::exception&) {
    std::fprintf(stderr, "error: --n-list must be comma-separated log2 sizes\n");
    return 2;
  }
  if (sizes.empty()) {
    std::fprintf(stderr, "error: --n-list is empty\n");
    return 2;
  }

  // Validate every size before any construction work starts.
  for (std::uint32_t log2_n : sizes) {
    cons.log2_n = log2_n;
    womc_construct_params params{};
    if (int rc = fill_params(cons, &params)) return rc;
  }

  std::vector<womc_report> reports;
  for (std::uint32_t log2_n : sizes) {
    cons.log2_n = log2_n;
    womc_construct_params params{};
    fill_params(cons, &params);
    ModelHandle model;
    if (womc_status st = womc_model_create(cons.s, cons.t, &model.ptr))
      return report_error("model", st);
    SetHandle set;
    if (womc_status st = womc_construct(model.ptr, log2_n, &params, &set.ptr))
      return report_error("construct", st);
    womc_report report{};
    if (womc_status st =
            womc_run_experiment(model.ptr, set.ptr, trials, seed, &report))
      return report_error("experiment", st);
    std::fprintf(stderr, "bench n=%" PRIu32 ": %" PRIu64 " trials in %.3fs\n",
                 log2_n, trials, report.seconds);
    reports.push_back(report);
  }
  return emit_reports(reports, csv_path, json_path, timing);
}

int cmd_multiwrite(const std::string& t_list, std::uint32_t log2_n,
                   std::uint64_t trials, std::uint64_t seed, womc_method method,
                   std::uint64_t samples, double target,
                   const std::string& csv_path, const std::string& json_path,
                   bool timing) {
  std::vector<double> schedule;
  try {
    schedule = parse_double_list(t_list);
  } catch (const std::exception&) {
    std::fprintf(stderr, "error: --t-list must be comma-separated reals\n");
    return 2;
  }
  if (schedule.empty()) {
    std::fprintf(stderr, "error: --t-list is empty\n");
    return 2;
  }
  for (double t : schedule) {
    if (!(t > 0.0 && t < 1.0)) {
      std::fprintf(stderr, "error: schedule entries must lie strictly in (0,1)\n");
      return 2;
    }
  }
  if (log2_n > 24) {
    std::fprintf(stderr, "error: --n above 24 is not supported\n");
    return 2;
  }
  if (!(target > 0.0)) {
    std::fprintf(stderr, "error: --target must be positive\n");
    return 2;
  }

  womc_construct_params params{};
  params.method = method;
  params.mode = WOMC_SELECT_TARGET_RATE;
  params.threshold_or_rate = target;
  params.samples = samples;
  params.seed = 0;  // per-write construction seeds derive from --seed inside

  std::vector<womc_report> reports(schedule.size());
  if (womc_status st =
          womc_run_multiwrite(schedule.data(), schedule.size(), log2_n, trials,
                              seed, &params, reports.data()))
    return report_error("multiwrite", st);
  for (std::size_t k = 0; k < reports.size(); ++k)
    std::fprintf(stderr, "write %zu: rate=%.6g capacity=%.6g in %.3fs\n", k + 1,
                 reports[k].rate, reports[k].capacity, reports[k].seconds);
  return emit_reports(reports, csv_path, json_path, timing);
}

struct CheckPrinter {
  int failures = 0;
};

void print_check(const char* name, int passed, const char* detail, void* user) {
  auto* printer = static_cast<CheckPrinter*>(user);
  if (!passed) ++printer->failures;
  std::printf("[%s] %s: %s\n", passed ? "ok" : "FAIL", name, detail);
}

int cmd_validate(std::uint32_t max_log2_n) {
  CheckPrinter printer;
  int all_passed = 0;
  if (womc_status st =
          womc_self_check(max_log2_n, print_check, &printer, &all_passed))
    return report_error("validate", st);
  return all_passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"write-once-memory rewrite codec and simulator"};
  app.require_subcommand(1);

  // construct
  ConstructArgs cons;
  auto* construct = app.add_subcommand("construct", "build and save an index set");
  construct->add_option("--n", cons.log2_n, "log2 of the block size")->required();
  construct->add_option("--s", cons.s, "zero fraction of the cell states")->required();
  construct->add_option("--t", cons.t, "conditional zero probability")->required();
  construct->add_option("--method", cons.method, "exact or monte_carlo");
  construct->add_option("--mode", cons.mode, "rate or threshold");
  construct->add_option("--target", cons.target, "target rate as a fraction of capacity");
  construct->add_option("--threshold", cons.threshold, "half-deviation threshold");
  construct->add_option("--samples", cons.samples, "Monte Carlo samples");
  construct->add_option("--seed", cons.seed, "construction seed");
  construct->add_option("--out", cons.out_path, "set file to write");

  // encode
  std::string enc_set, enc_state, enc_message, enc_out;
  std::uint64_t enc_seed = kDefaultSeed;
  std::uint32_t enc_attempts = 8;
  bool enc_greedy = false;
  auto* encode = app.add_subcommand("encode", "encode a message onto a memory state");
  encode->add_option("--set", enc_set, "set file")->required();
  encode->add_option("--state", enc_state, "current memory state file")->required();
  encode->add_option("--message", enc_message, "message bits file")->required();
  encode->add_option("--out", enc_out, "codeword file to write")->required();
  encode->add_option("--seed", enc_seed, "encoder seed");
  encode->add_option("--max-attempts", enc_attempts, "retry budget");
  encode->add_flag("--greedy", enc_greedy, "argmax instead of sampling (extension)");

  // decode
  std::string dec_set, dec_in, dec_out;
  auto* decode = app.add_subcommand("decode", "recover the message from a codeword");
  decode->add_option("--set", dec_set, "set file")->required();
  decode->add_option("--in", dec_in, "codeword file")->required();
  decode->add_option("--out", dec_out, "message file to write")->required();

  // bench
  std::string bench_n_list;
  ConstructArgs bench_cons;
  bench_cons.s = 0.5;
  bench_cons.t = 0.5;
  std::uint64_t bench_trials = 1000, bench_seed = kDefaultSeed;
  std::string bench_csv, bench_json;
  bool bench_timing = false;
  auto* bench = app.add_subcommand("bench", "write-cycle experiments over block sizes");
  bench->add_option("--n-list", bench_n_list, "comma-separated log2 sizes")->required();
  bench->add_option("--s", bench_cons.s, "zero fraction of the cell states");
  bench->add_option("--t", bench_cons.t, "conditional zero probability");
  bench->add_option("--trials", bench_trials, "trials per size");
  bench->add_option("--seed", bench_seed, "experiment seed");
  bench->add_option("--method", bench_cons.method, "exact or monte_carlo");
  bench->add_option("--samples", bench_cons.samples, "Monte Carlo samples");
  bench->add_option("--mode", bench_cons.mode, "rate or threshold");
  bench->add_option("--target", bench_cons.target, "target rate fraction");
  bench->add_option("--threshold", bench_cons.threshold, "half-deviation threshold");
  bench->add_option("--csv", bench_csv, "CSV output file (default: stdout)");
  bench->add_option("--json", bench_json, "JSON mirror output file");
  bench->add_flag("--timing", bench_timing, "record wall clock in outputs");

  // multiwrite
  std::string mw_t_list;
  std::uint32_t mw_log2_n = 0;
  std::uint64_t mw_trials = 200, mw_seed = kDefaultSeed, mw_samples = 100000;
  double mw_target = 0.8;
  std::string mw_method = "monte_carlo", mw_csv, mw_json;
  bool mw_timing = false;
  auto* multiwrite = app.add_subcommand("multiwrite", "chained writes on one memory");
  multiwrite->add_option("--t-list", mw_t_list, "comma-separated t per write")->required();
  multiwrite->add_option("--n", mw_log2_n, "log2 of the block size")->required();
  multiwrite->add_option("--trials", mw_trials, "independent memories");
  multiwrite->add_option("--seed", mw_seed, "experiment seed");
  multiwrite->add_option("--method", mw_method, "exact or monte_carlo");
  multiwrite->add_option("--samples", mw_samples, "Monte Carlo samples per set");
  multiwrite->add_option("--target", mw_target, "target rate fraction");
  multiwrite->add_option("--csv", mw_csv, "CSV output file (default: stdout)");
  multiwrite->add_option("--json", mw_json, "JSON mirror output file");
  multiwrite->add_flag("--timing", mw_timing, "record wall clock in outputs");

  // validate
  std::uint32_t val_max_n = 3;
  auto* validate = app.add_subcommand("validate", "run the oracle-backed self checks");
  validate->add_option("--max-n", val_max_n, "largest log2 size to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand(construct)) return cmd_construct(cons);
  if (app.got_subcommand(encode))
    return cmd_encode(enc_set, enc_state, enc_message, enc_out, enc_seed,
                      enc_attempts, enc_greedy);
  if (app.got_subcommand(decode)) return cmd_decode(dec_set, dec_in, dec_out);
  if (app.got_subcommand(bench))
    return cmd_bench(bench_n_list, bench_cons, bench_trials, bench_seed,
                     bench_csv, bench_json, bench_timing);
  if (app.got_subcommand(multiwrite)) {
    womc_method method;
    if (!parse_method(mw_method, &method)) {
      std::fprintf(stderr, "error: --method must be exact or monte_carlo\n");
      return 2;
    }
    return cmd_multiwrite(mw_t_list, mw_log2_n, mw_trials, mw_seed, method,
                          mw_samples, mw_target, mw_csv, mw_json, mw_timing);
  }
  if (app.got_subcommand(validate)) return cmd_validate(val_max_n);
  return 2;
}
