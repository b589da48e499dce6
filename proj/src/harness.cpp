#include "flowkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "flowkit/render.hpp"

namespace flowkit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string base64_encode(const std::string& bytes) {
  static const char alphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                 static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(alphabet[(v >> 18) & 63]);
    out.push_back(alphabet[(v >> 12) & 63]);
    out.push_back(alphabet[(v >> 6) & 63]);
    out.push_back(alphabet[v & 63]);
    i += 3;
  }
  std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(alphabet[(v >> 18) & 63]);
    out.push_back(alphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (rest == 2) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(alphabet[(v >> 18) & 63]);
    out.push_back(alphabet[(v >> 12) & 63]);
    out.push_back(alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

ParseError line_error(const std::string& path, std::size_t line, ParseError::Code code,
                      const std::string& reason) {
  ParseError error;
  error.code = code;
  error.path = path + ":" + std::to_string(line);
  error.reason = reason;
  return error;
}

Sample sample_from_json(const json& obj, const std::string& path, std::size_t line) {
  Sample sample;
  if (obj.contains("reference")) {
    if (!obj.contains("id") || !obj["id"].is_string())
      throw line_error(path, line, ParseError::Code::schema_violation, "missing sample id");
    sample.id = obj["id"].get<std::string>();
    ParseResult parsed = parse_flow(obj["reference"].dump());
    if (const ParseError* error = std::get_if<ParseError>(&parsed)) {
      ParseError out = *error;
      out.path = "sample " + sample.id + ": " + out.path;
      throw out;
    }
    sample.reference = std::get<Flow>(parsed);
  } else {
    // flow object with the sample fields inline
    if (!obj.contains("id") || !obj["id"].is_string())
      throw line_error(path, line, ParseError::Code::schema_violation, "missing sample id");
    sample.id = obj["id"].get<std::string>();
    ParseResult parsed = parse_flow(obj.dump());
    if (const ParseError* error = std::get_if<ParseError>(&parsed)) {
      ParseError out = *error;
      out.path = "sample " + sample.id + ": " + out.path;
      throw out;
    }
    sample.reference = std::get<Flow>(parsed);
  }
  if (obj.contains("image_path") && obj["image_path"].is_string())
    sample.image_path = obj["image_path"].get<std::string>();
  if (obj.contains("source_type") && obj["source_type"].is_string())
    sample.source_type = source_type_from_string(obj["source_type"].get<std::string>());
  bool has_width = obj.contains("width") && obj["width"].is_number();
  bool has_height = obj.contains("height") && obj["height"].is_number();
  if (has_width != has_height)
    throw line_error(path, line, ParseError::Code::schema_violation,
                     "width and height must be present together");
  if (has_width) {
    sample.width = obj["width"].get<int>();
    sample.height = obj["height"].get<int>();
  }
  if (obj.contains("pattern") && obj["pattern"].is_string())
    sample.pattern = obj["pattern"].get<std::string>();
  return sample;
}

ordered_json metrics_json(const MetricMeans& means) {
  return ordered_json{{"flow_sim_with_inputs", means.flow_sim_with_inputs},
                      {"flow_sim_no_inputs", means.flow_sim_no_inputs},
                      {"tree_bleu_with_inputs", means.tree_bleu_with_inputs},
                      {"tree_bleu_no_inputs", means.tree_bleu_no_inputs},
                      {"trigger_match", means.trigger_match},
                      {"component_match", means.component_match}};
}

ordered_json metrics_json(const MetricResult& result) {
  return ordered_json{{"flow_sim_with_inputs", result.flow_sim_with_inputs},
                      {"flow_sim_no_inputs", result.flow_sim_no_inputs},
                      {"tree_bleu_with_inputs", result.tree_bleu_with_inputs},
                      {"tree_bleu_no_inputs", result.tree_bleu_no_inputs},
                      {"trigger_match", result.trigger_match},
                      {"component_match", result.component_match}};
}

MetricMeans means_from_json(const json& obj) {
  MetricMeans means;
  means.flow_sim_with_inputs = obj.at("flow_sim_with_inputs").get<double>();
  means.flow_sim_no_inputs = obj.at("flow_sim_no_inputs").get<double>();
  means.tree_bleu_with_inputs = obj.at("tree_bleu_with_inputs").get<double>();
  means.tree_bleu_no_inputs = obj.at("tree_bleu_no_inputs").get<double>();
  means.trigger_match = obj.at("trigger_match").get<double>();
  means.component_match = obj.at("component_match").get<double>();
  return means;
}

ordered_json group_json(const GroupAggregate& group) {
  return ordered_json{{"count", group.count}, {"metrics", metrics_json(group.mean)}};
}

GroupAggregate group_from_json(const json& obj) {
  GroupAggregate group;
  group.count = obj.at("count").get<std::size_t>();
  group.mean = means_from_json(obj.at("metrics"));
  return group;
}

// Streaming accumulator so group means come out as exact sums over counts.
struct Accumulator {
  std::size_t count = 0;
  MetricMeans sum;

  void add(const MetricResult& result) {
    ++count;
    sum.flow_sim_with_inputs += result.flow_sim_with_inputs;
    sum.flow_sim_no_inputs += result.flow_sim_no_inputs;
    sum.tree_bleu_with_inputs += result.tree_bleu_with_inputs;
    sum.tree_bleu_no_inputs += result.tree_bleu_no_inputs;
    sum.trigger_match += result.trigger_match;
    sum.component_match += result.component_match;
  }

  GroupAggregate finalize() const {
    GroupAggregate group;
    group.count = count;
    if (count == 0) return group;
    double n = static_cast<double>(count);
    group.mean.flow_sim_with_inputs = sum.flow_sim_with_inputs / n;
    group.mean.flow_sim_no_inputs = sum.flow_sim_no_inputs / n;
    group.mean.tree_bleu_with_inputs = sum.tree_bleu_with_inputs / n;
    group.mean.tree_bleu_no_inputs = sum.tree_bleu_no_inputs / n;
    group.mean.trigger_match = sum.trigger_match / n;
    group.mean.component_match = sum.component_match / n;
    return group;
  }
};

void markdown_row(std::ostringstream& out, const std::string& name,
                  const GroupAggregate& group) {
  char cell[16];
  out << "| " << name << " | " << group.count;
  const double values[] = {group.mean.flow_sim_with_inputs, group.mean.flow_sim_no_inputs,
                           group.mean.tree_bleu_with_inputs, group.mean.tree_bleu_no_inputs,
                           group.mean.trigger_match, group.mean.component_match};
  for (double value : values) {
    std::snprintf(cell, sizeof(cell), "%.3f", value);
    out << " | " << cell;
  }
  out << " |\n";
}

std::string extract_message_text(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) return body;
  if (parsed.contains("choices") && parsed["choices"].is_array() &&
      !parsed["choices"].empty()) {
    const json& first = parsed["choices"][0];
    if (first.contains("message") && first["message"].contains("content") &&
        first["message"]["content"].is_string())
      return first["message"]["content"].get<std::string>();
    if (first.contains("text") && first["text"].is_string())
      return first["text"].get<std::string>();
  }
  if (parsed.contains("content") && parsed["content"].is_string())
    return parsed["content"].get<std::string>();
  if (parsed.contains("text") && parsed["text"].is_string())
    return parsed["text"].get<std::string>();
  return body;
}

json request_body(const ModelEndpointConfig& config, const std::string& image_b64) {
  json image_part = {{"type", "image_url"},
                     {"image_url", {{"url", "data:image/png;base64," + image_b64}}}};
  std::string prompt =
      config.prompt_template.empty() ? default_prompt_template() : config.prompt_template;
  json content = json::array();
  std::size_t slot = prompt.find("{{image}}");
  if (slot == std::string::npos) {
    content.push_back(image_part);
    content.push_back({{"type", "text"}, {"text", prompt}});
  } else {
    std::string before = prompt.substr(0, slot);
    std::string after = prompt.substr(slot + 9);
    if (!before.empty()) content.push_back({{"type", "text"}, {"text", before}});
    content.push_back(image_part);
    if (!after.empty()) content.push_back({{"type", "text"}, {"text", after}});
  }
  json body = {{"messages", json::array({{{"role", "user"}, {"content", content}}})}};
  if (!config.model.empty()) body["model"] = config.model;
  return body;
}

Prediction failure_prediction(const std::string& sample_id, const std::string& reason) {
  ParseError error;
  error.code = ParseError::Code::no_json_found;
  error.path = "$";
  error.reason = reason;
  return Prediction{sample_id, "", error};
}

}  // namespace

std::vector<Sample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Sample> samples;
  std::map<std::string, std::size_t> seen;  // id -> first line
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object())
      throw line_error(path, line_number, ParseError::Code::malformed_json,
                       "line is not a JSON object");
    Sample sample = sample_from_json(obj, path, line_number);
    auto [it, inserted] = seen.emplace(sample.id, line_number);
    if (!inserted)
      throw line_error(path, line_number, ParseError::Code::schema_violation,
                       "duplicate sample id \"" + sample.id + "\" (first seen on line " +
                           std::to_string(it->second) + ")");
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Prediction> predictions;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("sample_id") ||
        !obj["sample_id"].is_string() || !obj.contains("raw_output") ||
        !obj["raw_output"].is_string())
      throw line_error(path, line_number, ParseError::Code::schema_violation,
                       "expected {\"sample_id\", \"raw_output\"}");
    Prediction prediction;
    prediction.sample_id = obj["sample_id"].get<std::string>();
    prediction.raw_output = obj["raw_output"].get<std::string>();
    prediction.parsed = extract_flow_from_model_output(prediction.raw_output);
    predictions.push_back(std::move(prediction));
  }
  return predictions;
}

std::vector<Prediction> fetch_predictions(const std::vector<Sample>& samples,
                                          const ModelEndpointConfig& config) {
  if (config.base_url.empty()) throw ConfigError("endpoint base_url is empty");
  if (config.timeout_seconds <= 0) throw ConfigError("timeout must be positive");
  if (config.max_retries < 0) throw ConfigError("max retries must be >= 0");
  const char* token = std::getenv(config.auth_env.c_str());
  if (token == nullptr || *token == '\0')
    throw ConfigError("auth token environment variable " + config.auth_env + " is not set");
  std::string auth = std::string("Bearer ") + token;
  if (samples.empty()) return {};

  auto fetch_one = [&](const Sample& sample) -> Prediction {
    if (!sample.image_path) return failure_prediction(sample.id, "sample has no image_path");
    std::string image;
    try {
      image = read_file(*sample.image_path);
    } catch (const IoError& error) {
      return failure_prediction(sample.id, error.what());
    }
    std::string body = request_body(config, base64_encode(image)).dump();

    httplib::Client client(config.base_url);
    auto seconds = static_cast<time_t>(config.timeout_seconds);
    auto micros = static_cast<time_t>((config.timeout_seconds - seconds) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    client.set_default_headers({{"Authorization", auth}});

    std::string last_failure = "no response";
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      httplib::Result result = client.Post(config.path, body, "application/json");
      if (!result) {
        last_failure = "connection error: " + httplib::to_string(result.error());
        continue;
      }
      if (result->status < 200 || result->status >= 300) {
        last_failure = "http status " + std::to_string(result->status);
        continue;
      }
      std::string raw = extract_message_text(result->body);
      return Prediction{sample.id, raw, extract_flow_from_model_output(raw)};
    }
    return failure_prediction(sample.id, last_failure);
  };

  std::vector<Prediction> predictions(samples.size());
  std::size_t workers = std::min<std::size_t>(
      samples.size(), static_cast<std::size_t>(std::max(config.max_in_flight, 1)));
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= samples.size()) break;
        predictions[i] = fetch_one(samples[i]);
      }
    });
  }
  for (auto& thread : pool) thread.join();
  return predictions;
}

EvalReport score(const std::vector<Sample>& samples,
                 const std::vector<Prediction>& predictions, const TreeWeights& weights,
                 bool exclude_missing) {
  std::map<std::string, const Sample*> by_id;
  for (const auto& sample : samples) by_id[sample.id] = &sample;
  std::map<std::string, const Prediction*> by_sample;
  for (const auto& prediction : predictions) {
    if (!by_id.count(prediction.sample_id))
      throw UnknownSampleId("prediction references unknown sample id \"" +
                            prediction.sample_id + "\"");
    by_sample[prediction.sample_id] = &prediction;
  }

  EvalReport report;
  Accumulator overall;
  std::map<std::string, Accumulator> by_source, by_orientation, by_resolution, by_pattern;
  for (const auto& sample : samples) {
    auto it = by_sample.find(sample.id);
    if (it == by_sample.end() && exclude_missing) continue;
    MetricResult result;  // all-zero when the prediction is missing
    if (it != by_sample.end())
      result = evaluate_pair(it->second->parsed, sample.reference, weights);
    report.per_sample.emplace_back(sample.id, result);
    overall.add(result);
    by_source[to_string(sample.source_type)].add(result);
    if (sample.width && sample.height) {
      by_orientation[to_string(classify_orientation(*sample.width, *sample.height))].add(result);
      by_resolution[to_string(classify_resolution(*sample.width, *sample.height))].add(result);
    }
    if (sample.pattern) by_pattern[*sample.pattern].add(result);
  }

  report.overall = overall.finalize();
  for (const auto& [name, acc] : by_source) report.by_source_type[name] = acc.finalize();
  for (const auto& [name, acc] : by_orientation) report.by_orientation[name] = acc.finalize();
  for (const auto& [name, acc] : by_resolution) report.by_resolution[name] = acc.finalize();
  for (const auto& [name, acc] : by_pattern) report.by_pattern[name] = acc.finalize();
  return report;
}

std::string emit_report(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    ordered_json obj;
    obj["overall"] = group_json(report.overall);
    auto emit_groups = [](const std::map<std::string, GroupAggregate>& groups) {
      ordered_json out = ordered_json::object();
      for (const auto& [name, group] : groups) out[name] = group_json(group);
      return out;
    };
    obj["by_source_type"] = emit_groups(report.by_source_type);
    obj["by_orientation"] = emit_groups(report.by_orientation);
    obj["by_resolution"] = emit_groups(report.by_resolution);
    obj["by_pattern"] = emit_groups(report.by_pattern);
    ordered_json rows = ordered_json::array();
    for (const auto& [id, result] : report.per_sample)
      rows.push_back(ordered_json{{"sample_id", id}, {"metrics", metrics_json(result)}});
    obj["per_sample"] = rows;
    return obj.dump(2);
  }

  std::ostringstream out;
  out << "| Group | Samples | FlowSim w/ inputs | FlowSim no inputs | TreeBLEU w/ inputs | "
         "TreeBLEU no inputs | Trigger match | Component match |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  if (report.overall.count > 0) markdown_row(out, "overall", report.overall);
  for (const auto& [name, group] : report.by_source_type)
    markdown_row(out, "source: " + name, group);
  for (const auto& [name, group] : report.by_orientation)
    markdown_row(out, "orientation: " + name, group);
  for (const auto& [name, group] : report.by_resolution)
    markdown_row(out, "resolution: " + name, group);
  for (const auto& [name, group] : report.by_pattern)
    markdown_row(out, "pattern: " + name, group);
  return out.str();
}

EvalReport parse_report(const std::string& json_text) {
  json obj = json::parse(json_text);
  EvalReport report;
  report.overall = group_from_json(obj.at("overall"));
  auto read_groups = [](const json& groups) {
    std::map<std::string, GroupAggregate> out;
    for (auto it = groups.begin(); it != groups.end(); ++it)
      out[it.key()] = group_from_json(it.value());
    return out;
  };
  report.by_source_type = read_groups(obj.at("by_source_type"));
  report.by_orientation = read_groups(obj.at("by_orientation"));
  report.by_resolution = read_groups(obj.at("by_resolution"));
  report.by_pattern = read_groups(obj.at("by_pattern"));
  for (const json& row : obj.at("per_sample")) {
    MetricMeans means = means_from_json(row.at("metrics"));
    MetricResult result;
    result.flow_sim_with_inputs = means.flow_sim_with_inputs;
    result.flow_sim_no_inputs = means.flow_sim_no_inputs;
    result.tree_bleu_with_inputs = means.tree_bleu_with_inputs;
    result.tree_bleu_no_inputs = means.tree_bleu_no_inputs;
    result.trigger_match = static_cast<int>(means.trigger_match);
    result.component_match = means.component_match;
    report.per_sample.emplace_back(row.at("sample_id").get<std::string>(), result);
  }
  return report;
}

ModelEndpointConfig load_endpoint_config(const std::string& path) {
  std::string text = read_file(path);
  json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object())
    throw ConfigError("endpoint config " + path + " is not a JSON object");
  ModelEndpointConfig config;
  if (!obj.contains("base_url") || !obj["base_url"].is_string())
    throw ConfigError("endpoint config needs a base_url string");
  config.base_url = obj["base_url"].get<std::string>();
  if (obj.contains("path")) config.path = obj["path"].get<std::string>();
  if (obj.contains("model")) config.model = obj["model"].get<std::string>();
  if (obj.contains("auth_env")) config.auth_env = obj["auth_env"].get<std::string>();
  if (obj.contains("prompt_template"))
    config.prompt_template = obj["prompt_template"].get<std::string>();
  if (obj.contains("prompt_file"))
    config.prompt_template = read_file(obj["prompt_file"].get<std::string>());
  if (obj.contains("timeout_seconds"))
    config.timeout_seconds = obj["timeout_seconds"].get<double>();
  if (obj.contains("max_retries")) config.max_retries = obj["max_retries"].get<int>();
  if (obj.contains("max_in_flight")) config.max_in_flight = obj["max_in_flight"].get<int>();
  if (config.timeout_seconds <= 0) throw ConfigError("timeout must be positive");
  if (config.max_retries < 0) throw ConfigError("max retries must be >= 0");
  return config;
}

std::string default_prompt_template() {
  // Keep in sync with assets/prompt.txt.
  return "Convert this workflow diagram into its flow JSON representation. "
         "Respond with only the flow JSON and no surrounding text.\n\n{{image}}";
}

std::string to_string(SourceType source_type) {
  switch (source_type) {
    case SourceType::synthetic: return "synthetic";
    case SourceType::manual: return "manual";
    case SourceType::digital: return "digital";
    case SourceType::whiteboard: return "whiteboard";
    case SourceType::user_interface: return "user_interface";
    case SourceType::other: return "other";
  }
  return "other";
}

SourceType source_type_from_string(const std::string& text) {
  if (text == "synthetic") return SourceType::synthetic;
  if (text == "manual") return SourceType::manual;
  if (text == "digital") return SourceType::digital;
  if (text == "whiteboard") return SourceType::whiteboard;
  if (text == "user_interface") return SourceType::user_interface;
  return SourceType::other;
}

}  // namespace flowkit
