// Command-line front end: run boosting experiments, verify traces, emit
// report CSVs, and generate random test corpora.  Everything goes through
// the C API; this translation unit never touches library internals.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optiboost/optiboost.h"

namespace {

std::string g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

int complain(ob_status) {
  std::fprintf(stderr, "error: %s\n", ob_last_error());
  return 1;
}

struct PoolChoice {
  std::string source;  // "stumps" or a matrix path
};

ob_status make_pool(const PoolChoice& choice, const ob_dataset* data,
                    ob_pool** out) {
  if (choice.source == "stumps") {
    return ob_pool_enumerate_stumps(data, out);
  }
  return ob_pool_load_matrix(choice.source.c_str(), data, out);
}

/// Deleter-style guards so early returns cannot leak handles.
struct Handles {
  ob_dataset* data = nullptr;
  ob_pool* pool = nullptr;
  ob_run* run = nullptr;
  ob_report* report = nullptr;
  ob_verification* verification = nullptr;
  ~Handles() {
    ob_report_free(report);
    ob_run_free(run);
    ob_verification_free(verification);
    ob_pool_free(pool);
    ob_dataset_free(data);
  }
};

int cmd_run(const std::string& data_path, const PoolChoice& pool_choice,
            const ob_run_config& config, const std::string& out_dir) {
  Handles h;
  if (ob_status s = ob_dataset_load(data_path.c_str(), nullptr, &h.data); s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = make_pool(pool_choice, h.data, &h.pool); s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = ob_boost_run(h.data, h.pool, &config, &h.run); s != OB_OK) {
    return complain(s);
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: IoError: cannot create %s\n", out_dir.c_str());
    return 1;
  }
  const std::string trace_path = out_dir + "/trace.jsonl";
  if (ob_status s = ob_run_write_trace(h.run, trace_path.c_str()); s != OB_OK) {
    return complain(s);
  }

  size_t iterations = ob_run_iterations(h.run);
  ob_halt_reason halt = ob_run_halt_reason(h.run);
  const char* halt_name = halt == OB_HALT_T_MAX                  ? "t_max"
                          : halt == OB_HALT_WEAK_LEARNING_VIOLATION
                              ? "weak_learning_violation"
                              : "perfect_hypothesis";
  std::printf("trace: %s\n", trace_path.c_str());
  std::printf("iterations: %zu\n", iterations);
  std::printf("halt: %s\n", halt_name);

  if (iterations > 0) {
    if (ob_status s = ob_run_analyze(h.run, config.sv_window, config.sv_delta,
                                     config.sv_weight_floor, &h.report);
        s != OB_OK) {
      return complain(s);
    }
    if (ob_status s = ob_run_write_report_csvs(h.run, h.report, out_dir.c_str());
        s != OB_OK) {
      return complain(s);
    }
    std::printf("A: %s\n", g17(ob_report_coeff_sum(h.report)).c_str());
    std::printf("theta: %s\n", g17(ob_report_theta(h.report)).c_str());
    std::printf("ratio: %s\n", g17(ob_report_ratio(h.report)).c_str());
    std::printf("support_vectors_margin: %zu\n",
                ob_report_support_vector_count(h.report));
    std::printf("support_vectors_weight: %zu\n",
                ob_report_weight_support_vector_count(h.report));
  }

  switch (halt) {
    case OB_HALT_T_MAX: return 0;
    case OB_HALT_WEAK_LEARNING_VIOLATION: return 2;
    case OB_HALT_PERFECT_HYPOTHESIS: return 3;
  }
  return 0;
}

int cmd_verify(const std::string& trace_path, const std::string& data_path,
               const PoolChoice& pool_choice, const std::vector<size_t>& lags,
               const std::string& out_path, bool certify, double certify_tol,
               size_t sv_window, double sv_delta) {
  Handles h;
  if (ob_status s = ob_dataset_load(data_path.c_str(), nullptr, &h.data); s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = make_pool(pool_choice, h.data, &h.pool); s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = ob_verify_trace(trace_path.c_str(), h.data, h.pool, lags.data(),
                                    lags.size(), &h.verification);
      s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = ob_verification_write_json(h.verification, out_path.c_str());
      s != OB_OK) {
    return complain(s);
  }
  size_t count = ob_verification_check_count(h.verification);
  for (size_t k = 0; k < count; ++k) {
    std::printf("%-40s %-8s worst=%s\n",
                ob_verification_check_name(h.verification, k),
                ob_verification_check_status(h.verification, k),
                g17(ob_verification_check_violation(h.verification, k)).c_str());
  }
  std::printf("report: %s\n", out_path.c_str());

  bool failed = ob_verification_all_passed(h.verification) == 0;
  if (certify) {
    if (ob_status s = ob_replay_trace(trace_path.c_str(), h.data, h.pool, &h.run);
        s != OB_OK) {
      return complain(s);
    }
    int outcome = 0;
    double worst = 0.0;
    if (ob_status s = ob_run_certify(h.run, certify_tol, sv_window, sv_delta,
                                     &outcome, &worst);
        s != OB_OK) {
      return complain(s);
    }
    const char* text = outcome == 1 ? "pass" : outcome == 2 ? "skipped" : "fail";
    std::printf("convergence_certificate: %s (worst=%s)\n", text, g17(worst).c_str());
    failed = failed || outcome == 0;
  }
  return failed ? 1 : 0;
}

int cmd_report(const std::string& trace_path, const std::string& data_path,
               const PoolChoice& pool_choice, const std::string& out_dir,
               size_t sv_window, double sv_delta, double sv_eps) {
  Handles h;
  if (ob_status s = ob_dataset_load(data_path.c_str(), nullptr, &h.data); s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = make_pool(pool_choice, h.data, &h.pool); s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = ob_replay_trace(trace_path.c_str(), h.data, h.pool, &h.run);
      s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = ob_run_analyze(h.run, sv_window, sv_delta, sv_eps, &h.report);
      s != OB_OK) {
    return complain(s);
  }
  if (ob_status s = ob_run_write_report_csvs(h.run, h.report, out_dir.c_str());
      s != OB_OK) {
    return complain(s);
  }
  std::printf("wrote per_example.csv, per_iteration.csv, per_dichotomy.csv under %s\n",
              out_dir.c_str());
  return 0;
}

int cmd_gen(const std::string& out_dir, size_t n, size_t d, size_t m,
            uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: IoError: cannot create %s\n", out_dir.c_str());
    return 1;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> real(0.0, 1.0);

  std::vector<double> features(n * d);
  for (double& x : features) {
    x = real(rng);
  }
  std::vector<int> labels(n);
  for (int& y : labels) {
    y = real(rng) < 0.5 ? 1 : -1;
  }
  labels[0] = 1;  // guarantee both classes appear
  labels[1] = -1;

  Handles h;
  if (ob_status s = ob_dataset_create(features.data(), labels.data(), n, d, &h.data);
      s != OB_OK) {
    return complain(s);
  }
  const std::string data_path = out_dir + "/data.csv";
  if (ob_status s = ob_dataset_write_csv(h.data, data_path.c_str()); s != OB_OK) {
    return complain(s);
  }
  std::printf("dataset: %s (n=%zu, d=%zu)\n", data_path.c_str(), n, d);

  if (m > 0) {
    // Rows are sampled in mistake space with a bias toward correctness so
    // the pool tends to stay weakly learnable; raw = label * mistake.
    const std::string pool_path = out_dir + "/pool.csv";
    std::ofstream file(pool_path);
    if (!file) {
      std::fprintf(stderr, "error: IoError: cannot write %s\n", pool_path.c_str());
      return 1;
    }
    for (size_t j = 0; j < m; ++j) {
      std::vector<int> mistake(n);
      bool all_correct = true;
      for (size_t i = 0; i < n; ++i) {
        mistake[i] = real(rng) < 0.72 ? 1 : -1;
        all_correct = all_correct && mistake[i] == 1;
      }
      if (all_correct) {
        mistake[rng() % n] = -1;
      }
      for (size_t i = 0; i < n; ++i) {
        file << (i > 0 ? "," : "") << labels[i] * mistake[i];
      }
      file << "\n";
    }
    if (!file) {
      std::fprintf(stderr, "error: IoError: write failed for %s\n", pool_path.c_str());
      return 1;
    }
    std::printf("pool: %s (m=%zu)\n", pool_path.c_str(), m);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal AdaBoost over explicit dichotomy pools: exact edge "
               "maximization, deterministic traces, margin analytics, and "
               "trace verification"};
  app.require_subcommand(1);

  std::string data_path;
  std::string hypotheses = "stumps";
  std::string trace_path;
  std::string out_location;
  ob_run_config config{};
  config.t_max = 10000;
  config.sv_window = 100;
  config.sv_delta = 1e-3;
  std::vector<size_t> lags = {1, 10, 100};
  bool certify = false;
  double certify_tol = 1e-3;
  size_t gen_n = 20;
  size_t gen_d = 2;
  size_t gen_m = 0;
  uint64_t seed = 1;

  CLI::App* run = app.add_subcommand(
      "run", "Boost a dataset against a hypothesis pool; write trace and reports");
  run->add_option("--data", data_path, "training CSV (label in last column)")
      ->required();
  run->add_option("--hypotheses", hypotheses,
                  "'stumps' or a path to a +1/-1 dichotomy matrix CSV");
  run->add_option("--iters", config.t_max, "iteration budget t_max");
  run->add_option("--out", out_location, "output directory")->default_val("out");
  run->add_flag("--emit-weights", [&config](int64_t count) {
    config.emit_weights = count > 0 ? 1 : 0;
  }, "serialize the weight vector every iteration");
  run->add_option("--sv-window", config.sv_window,
                  "checkpoints a support vector must hold the minimum margin");
  run->add_option("--sv-delta", config.sv_delta,
                  "normalized-margin tolerance for support-vector detection");
  run->add_option("--sv-eps", config.sv_weight_floor,
                  "weight floor for the weight-criterion detector (default 1e-6/n)");
  run->add_option("--checkpoint-every", config.checkpoint_every,
                  "fixed checkpoint stride (default: adaptive cadence)");

  CLI::App* verify = app.add_subcommand(
      "verify", "Replay a trace against its inputs and check every identity");
  verify->add_option("--trace", trace_path, "trace JSONL to verify")->required();
  verify->add_option("--data", data_path, "training CSV the trace was made from")
      ->required();
  verify->add_option("--hypotheses", hypotheses,
                     "'stumps' or a path to a +1/-1 dichotomy matrix CSV");
  verify->add_option("--lags", lags, "Cauchy-gap lags")->delimiter(',');
  verify->add_option("--out", out_location, "certification JSON path")
      ->default_val("certification.json");
  verify->add_flag("--certify", certify,
                   "also certify finite-time margin convergence");
  verify->add_option("--certify-tol", certify_tol,
                     "max normalized-margin movement across the trailing window");
  verify->add_option("--sv-window", config.sv_window,
                     "trailing checkpoints for the certificate");
  verify->add_option("--sv-delta", config.sv_delta,
                     "margin tolerance for the certificate's candidate set");

  CLI::App* report = app.add_subcommand(
      "report", "Replay a trace and emit the per-example / per-iteration / "
                "per-dichotomy CSVs");
  report->add_option("--trace", trace_path, "trace JSONL to analyze")->required();
  report->add_option("--data", data_path, "training CSV the trace was made from")
      ->required();
  report->add_option("--hypotheses", hypotheses,
                     "'stumps' or a path to a +1/-1 dichotomy matrix CSV");
  report->add_option("--out", out_location, "output directory")
      ->default_val("report");
  report->add_option("--sv-window", config.sv_window,
                     "checkpoints a support vector must hold the minimum margin");
  report->add_option("--sv-delta", config.sv_delta,
                     "normalized-margin tolerance for support-vector detection");
  report->add_option("--sv-eps", config.sv_weight_floor,
                     "weight floor for the weight-criterion detector");

  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a random dataset (and optional dichotomy matrix) for "
             "test corpora; runs themselves are deterministic");
  gen->add_option("--out", out_location, "output directory")->default_val("corpus");
  gen->add_option("--gen-n", gen_n, "examples to generate");
  gen->add_option("--gen-d", gen_d, "features to generate");
  gen->add_option("--gen-m", gen_m, "dichotomy rows to generate (0: no matrix)");
  gen->add_option("--seed", seed, "RNG seed for corpus generation");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return cmd_run(data_path, PoolChoice{hypotheses}, config, out_location);
  }
  if (verify->parsed()) {
    return cmd_verify(trace_path, data_path, PoolChoice{hypotheses}, lags,
                      out_location, certify, certify_tol, config.sv_window,
                      config.sv_delta);
  }
  if (report->parsed()) {
    return cmd_report(trace_path, data_path, PoolChoice{hypotheses}, out_location,
                      config.sv_window, config.sv_delta, config.sv_weight_floor);
  }
  if (gen->parsed()) {
    return cmd_gen(out_location, gen_n, gen_d, gen_m, seed);
  }
  return 1;
}
