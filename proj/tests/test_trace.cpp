#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <string>

#include "core/booster.hpp"
#include "core/errors.hpp"
#include "core/trace.hpp"

#include "testutil.hpp"

using namespace optiboost;

namespace {

ErrorCode code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

Trace sample_trace(bool emit_weights) {
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  RunConfig config;
  config.t_max = 4;
  config.emit_weights = emit_weights;
  config.checkpoint_every = 2;
  return run_boosting(data, pool, config).trace;
}

/// Rewrites one line of a JSONL string (0-based), or deletes it when
/// replacement is empty and remove is true.
std::string edit_line(const std::string& text, size_t line_index,
                      const std::string& replacement, bool remove = false) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    lines.push_back(text.substr(start, end - start));
    start = end == std::string::npos ? text.size() : end + 1;
  }
  if (remove) {
    lines.erase(lines.begin() + static_cast<long>(line_index));
  } else {
    lines[line_index] = replacement;
  }
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("serialization is deterministic and round-trips every field") {
  testutil::TempDir dir;
  Trace trace = sample_trace(true);
  CHECK(trace_to_jsonl(trace) == trace_to_jsonl(trace));

  write_trace(trace, dir.file("t.jsonl"));
  Trace back = read_trace(dir.file("t.jsonl"));
  CHECK(back.n == trace.n);
  CHECK(back.m == trace.m);
  CHECK(back.dataset_digest == trace.dataset_digest);
  CHECK(back.config.t_max == trace.config.t_max);
  CHECK(back.config.emit_weights == trace.config.emit_weights);
  CHECK(back.config.checkpoint_every == trace.config.checkpoint_every);
  CHECK(back.halt == trace.halt);
  REQUIRE(back.records.size() == trace.records.size());
  for (size_t t = 0; t < trace.records.size(); ++t) {
    CHECK(back.records[t].t == trace.records[t].t);
    CHECK(back.records[t].selected == trace.records[t].selected);
    CHECK(back.records[t].edge == trace.records[t].edge);  // bitwise via %.17g
    CHECK(back.records[t].alpha == trace.records[t].alpha);
    CHECK(back.records[t].log_partition == trace.records[t].log_partition);
  }
  REQUIRE(back.weights.size() == trace.weights.size());
  for (size_t t = 0; t < trace.weights.size(); ++t) {
    CHECK(back.weights[t] == trace.weights[t]);
  }

  write_trace(back, dir.file("u.jsonl"));
  CHECK(testutil::read_file(dir.file("t.jsonl")) ==
        testutil::read_file(dir.file("u.jsonl")));
}

TEST_CASE("halt reasons round-trip by name") {
  CHECK(std::string(halt_reason_name(HaltReason::t_max_reached)) == "t_max");
  CHECK(std::string(halt_reason_name(HaltReason::weak_learning_violation)) ==
        "weak_learning_violation");
  CHECK(std::string(halt_reason_name(HaltReason::perfect_hypothesis)) ==
        "perfect_hypothesis");
  testutil::TempDir dir;
  Trace trace = sample_trace(false);
  trace.halt = HaltReason::perfect_hypothesis;
  write_trace(trace, dir.file("t.jsonl"));
  CHECK(read_trace(dir.file("t.jsonl")).halt == HaltReason::perfect_hypothesis);
}

TEST_CASE("structural damage is reported as a truncated trace") {
  testutil::TempDir dir;
  Trace trace = sample_trace(true);
  std::string text = trace_to_jsonl(trace);
  auto damaged = [&](const std::string& content) {
    testutil::write_file(dir.file("bad.jsonl"), content);
    return code_of([&] { read_trace(dir.file("bad.jsonl")); });
  };

  CHECK(damaged("") == ErrorCode::truncated_trace);
  CHECK(damaged("{\"n\":3}\n") == ErrorCode::truncated_trace);
  CHECK(damaged("not json\n") == ErrorCode::truncated_trace);
  // Missing halt line.
  CHECK(damaged(edit_line(text, 5, "", true)) == ErrorCode::truncated_trace);
  // Missing record: iterations no longer consecutive.
  CHECK(damaged(edit_line(text, 2, "", true)) == ErrorCode::truncated_trace);
  // Halt line duplicated in the middle.
  CHECK(damaged(edit_line(text, 2, "{\"halt\":\"t_max\"}")) ==
        ErrorCode::truncated_trace);
  // Unknown halt name.
  CHECK(damaged(edit_line(text, 5, "{\"halt\":\"done\"}")) ==
        ErrorCode::truncated_trace);
  // Integer field carrying a fraction.
  CHECK(damaged(edit_line(
            text, 1,
            "{\"t\":0.5,\"j\":0,\"edge\":0.25,\"alpha\":0.25,\"logZ\":-0.03,"
            "\"weights\":[0.25,0.25,0.5]}")) == ErrorCode::truncated_trace);
  // Non-finite real.
  CHECK(damaged(edit_line(
            text, 1,
            "{\"t\":0,\"j\":0,\"edge\":1e999,\"alpha\":0.25,\"logZ\":-0.03,"
            "\"weights\":[0.25,0.25,0.5]}")) == ErrorCode::truncated_trace);
  // Wrong weight vector length.
  CHECK(damaged(edit_line(
            text, 1,
            "{\"t\":0,\"j\":0,\"edge\":0.25,\"alpha\":0.25,\"logZ\":-0.03,"
            "\"weights\":[0.5,0.5]}")) == ErrorCode::truncated_trace);
  // Selected row out of range for the header's m.
  CHECK(damaged(edit_line(
            text, 1,
            "{\"t\":0,\"j\":9,\"edge\":0.25,\"alpha\":0.25,\"logZ\":-0.03,"
            "\"weights\":[0.25,0.25,0.5]}")) == ErrorCode::truncated_trace);

  CHECK(code_of([&] { read_trace(dir.file("missing.jsonl")); }) == ErrorCode::io);
}

TEST_CASE("weights presence must agree with the header flag") {
  testutil::TempDir dir;
  Trace with = sample_trace(true);
  std::string text = trace_to_jsonl(with);
  // Strip weights from one record while the header still promises them.
  std::string stripped = edit_line(
      text, 1, "{\"t\":0,\"j\":0,\"edge\":0.25,\"alpha\":0.25,\"logZ\":-0.03}");
  testutil::write_file(dir.file("bad.jsonl"), stripped);
  CHECK(code_of([&] { read_trace(dir.file("bad.jsonl")); }) ==
        ErrorCode::truncated_trace);

  Trace without = sample_trace(false);
  std::string bare = trace_to_jsonl(without);
  std::string extra = edit_line(
      bare, 1,
      "{\"t\":0,\"j\":0,\"edge\":0.25,\"alpha\":0.25,\"logZ\":-0.03,"
      "\"weights\":[0.25,0.25,0.5]}");
  testutil::write_file(dir.file("bad2.jsonl"), extra);
  CHECK(code_of([&] { read_trace(dir.file("bad2.jsonl")); }) ==
        ErrorCode::truncated_trace);
}

TEST_CASE("trace header serializes only run-shaping config") {
  Trace trace = sample_trace(false);
  std::string text = trace_to_jsonl(trace);
  std::string header = text.substr(0, text.find('\n'));
  CHECK(header.find("\"t_max\":4") != std::string::npos);
  CHECK(header.find("\"emit_weights\":false") != std::string::npos);
  CHECK(header.find("\"checkpoint_every\":2") != std::string::npos);
  CHECK(header.find("sv_") == std::string::npos);
  CHECK(header.find("\"dataset_digest\":\"") != std::string::npos);
}
