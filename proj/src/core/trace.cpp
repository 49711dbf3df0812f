#include "core/trace.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace optiboost {

namespace {

using nlohmann::json;

[[noreturn]] void damaged(const std::string& path, size_t line_number,
                          const std::string& what) {
  fail(ErrorCode::truncated_trace,
       path + ": line " + std::to_string(line_number) + ": " + what);
}

size_t strict_unsigned(const json& value) {
  if (!value.is_number_unsigned()) {
    throw std::runtime_error("expected a nonnegative integer");
  }
  return value.get<size_t>();
}

double finite_real(const json& value) {
  double out = value.get<double>();
  if (!std::isfinite(out)) {
    throw std::runtime_error("non-finite real");
  }
  return out;
}

}  // namespace

const char* halt_reason_name(HaltReason reason) {
  switch (reason) {
    case HaltReason::t_max_reached: return "t_max";
    case HaltReason::weak_learning_violation: return "weak_learning_violation";
    case HaltReason::perfect_hypothesis: return "perfect_hypothesis";
  }
  return "unknown";
}

std::string trace_to_jsonl(const Trace& trace) {
  std::string out;
  out += "{\"n\":" + std::to_string(trace.n);
  out += ",\"m\":" + std::to_string(trace.m);
  out += ",\"dataset_digest\":\"" + trace.dataset_digest + "\"";
  out += ",\"config\":{\"t_max\":" + std::to_string(trace.config.t_max);
  out += ",\"emit_weights\":";
  out += trace.config.emit_weights ? "true" : "false";
  out += ",\"checkpoint_every\":" + std::to_string(trace.config.checkpoint_every);
  out += "}}\n";

  for (size_t k = 0; k < trace.records.size(); ++k) {
    const IterationRecord& rec = trace.records[k];
    out += "{\"t\":" + std::to_string(rec.t);
    out += ",\"j\":" + std::to_string(rec.selected);
    out += ",\"edge\":" + format_g17(rec.edge);
    out += ",\"alpha\":" + format_g17(rec.alpha);
    out += ",\"logZ\":" + format_g17(rec.log_partition);
    if (trace.config.emit_weights) {
      out += ",\"weights\":[";
      const auto& w = trace.weights[k];
      for (size_t i = 0; i < w.size(); ++i) {
        if (i > 0) {
          out += ',';
        }
        out += format_g17(w[i]);
      }
      out += "]";
    }
    out += "}\n";
  }

  out += std::string("{\"halt\":\"") + halt_reason_name(trace.halt) + "\"}\n";
  return out;
}

void write_trace(const Trace& trace, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    fail(ErrorCode::io, "cannot write " + path);
  }
  file << trace_to_jsonl(trace);
  if (!file) {
    fail(ErrorCode::io, "write failed for " + path);
  }
}

Trace read_trace(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    fail(ErrorCode::io, "cannot open " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      lines.push_back(line);
    }
  }
  if (lines.empty()) {
    fail(ErrorCode::truncated_trace, path + ": empty file");
  }

  Trace trace;
  try {
    json header = json::parse(lines[0]);
    trace.n = strict_unsigned(header.at("n"));
    trace.m = strict_unsigned(header.at("m"));
    trace.dataset_digest = header.at("dataset_digest").get<std::string>();
    const json& config = header.at("config");
    trace.config.t_max = strict_unsigned(config.at("t_max"));
    trace.config.emit_weights = config.at("emit_weights").get<bool>();
    trace.config.checkpoint_every = strict_unsigned(config.at("checkpoint_every"));
  } catch (const std::exception& e) {
    damaged(path, 1, std::string("bad header: ") + e.what());
  }

  bool halted = false;
  for (size_t k = 1; k < lines.size(); ++k) {
    if (halted) {
      damaged(path, k + 1, "content after the halt line");
    }
    json object;
    try {
      object = json::parse(lines[k]);
    } catch (const std::exception& e) {
      damaged(path, k + 1, std::string("bad JSON: ") + e.what());
    }
    if (object.contains("halt")) {
      std::string reason;
      try {
        reason = object.at("halt").get<std::string>();
      } catch (const std::exception& e) {
        damaged(path, k + 1, std::string("bad halt line: ") + e.what());
      }
      if (reason == "t_max") {
        trace.halt = HaltReason::t_max_reached;
      } else if (reason == "weak_learning_violation") {
        trace.halt = HaltReason::weak_learning_violation;
      } else if (reason == "perfect_hypothesis") {
        trace.halt = HaltReason::perfect_hypothesis;
      } else {
        damaged(path, k + 1, "unknown halt reason '" + reason + "'");
      }
      halted = true;
      continue;
    }
    IterationRecord rec;
    try {
      rec.t = strict_unsigned(object.at("t"));
      rec.selected = strict_unsigned(object.at("j"));
      rec.edge = finite_real(object.at("edge"));
      rec.alpha = finite_real(object.at("alpha"));
      rec.log_partition = finite_real(object.at("logZ"));
      if (trace.config.emit_weights != object.contains("weights")) {
        damaged(path, k + 1, "weights presence disagrees with the header config");
      }
      if (trace.config.emit_weights) {
        std::vector<double> w;
        for (const json& cell : object.at("weights")) {
          w.push_back(finite_real(cell));
        }
        if (w.size() != trace.n) {
          damaged(path, k + 1, "weights array length differs from n");
        }
        trace.weights.push_back(std::move(w));
      }
    } catch (const std::exception& e) {
      damaged(path, k + 1, std::string("bad record: ") + e.what());
    }
    if (rec.t != trace.records.size()) {
      damaged(path, k + 1,
              "iteration " + std::to_string(rec.t) + " out of sequence");
    }
    if (rec.selected >= trace.m) {
      damaged(path, k + 1, "selected row " + std::to_string(rec.selected) +
                               " outside the pool of " + std::to_string(trace.m));
    }
    trace.records.push_back(rec);
  }
  if (!halted) {
    fail(ErrorCode::truncated_trace, path + ": missing halt line");
  }
  return trace;
}

}  // namespace optiboost
