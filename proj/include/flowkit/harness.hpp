#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flowkit/flow.hpp"
#include "flowkit/metrics.hpp"

// Batch evaluation pipeline: load reference datasets and candidate
// predictions (from files or a remote model endpoint), score every pair and
// aggregate by source type, orientation, resolution and pattern.

namespace flowkit {

enum class SourceType { synthetic, manual, digital, whiteboard, user_interface, other };

struct Sample {
  std::string id;
  Flow reference;
  std::optional<std::string> image_path;
  SourceType source_type = SourceType::synthetic;
  std::optional<int> width;   // present together with height or not at all
  std::optional<int> height;
  std::optional<std::string> pattern;

  bool operator==(const Sample&) const = default;
};

struct Prediction {
  std::string sample_id;
  std::string raw_output;
  ParseResult parsed;
};

// Arithmetic means of each metric over one group of samples.
struct MetricMeans {
  double flow_sim_with_inputs = 0.0;
  double flow_sim_no_inputs = 0.0;
  double tree_bleu_with_inputs = 0.0;
  double tree_bleu_no_inputs = 0.0;
  double trigger_match = 0.0;
  double component_match = 0.0;

  bool operator==(const MetricMeans&) const = default;
};

struct GroupAggregate {
  std::size_t count = 0;
  MetricMeans mean;

  bool operator==(const GroupAggregate&) const = default;
};

struct EvalReport {
  std::vector<std::pair<std::string, MetricResult>> per_sample;
  GroupAggregate overall;
  std::map<std::string, GroupAggregate> by_source_type;
  std::map<std::string, GroupAggregate> by_orientation;  // only samples with dimensions
  std::map<std::string, GroupAggregate> by_resolution;   // only samples with dimensions
  std::map<std::string, GroupAggregate> by_pattern;      // only samples with a pattern

  bool operator==(const EvalReport&) const = default;
};

struct ModelEndpointConfig {
  std::string base_url;                         // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string auth_env = "MODEL_API_TOKEN";     // name of the env var holding the token
  std::string prompt_template;                  // "{{image}}" marks the image slot
  double timeout_seconds = 60.0;
  int max_retries = 2;
  int max_in_flight = 4;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownSampleId : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { json, markdown_table };

// JSONL, one sample per line. Two shapes are accepted: {"id", "reference":
// {...}, ...} and a flow object carrying "id"/"pattern" fields inline.
// ParseError (with the offending line in its path) is thrown as an exception.
std::vector<Sample> load_dataset(const std::string& path);

// JSONL of {"sample_id", "raw_output"}; each raw output is run through
// extract_flow_from_model_output.
std::vector<Prediction> load_predictions(const std::string& path);

// One request per sample (base64 image + prompt). Failures after retries
// become ParseError predictions; nothing is dropped. Requests run with a
// bounded number in flight and results keep the input sample order.
std::vector<Prediction> fetch_predictions(const std::vector<Sample>& samples,
                                          const ModelEndpointConfig& config);

// Missing predictions score zero unless exclude_missing drops those samples
// (diagnostic mode). Predictions for unknown sample ids are an error.
EvalReport score(const std::vector<Sample>& samples,
                 const std::vector<Prediction>& predictions,
                 const TreeWeights& weights = TreeWeights{}, bool exclude_missing = false);

std::string emit_report(const EvalReport& report, ReportFormat format);

// Inverse of emit_report(report, json).
EvalReport parse_report(const std::string& json_text);

ModelEndpointConfig load_endpoint_config(const std::string& path);

std::string default_prompt_template();

std::string to_string(SourceType source_type);
SourceType source_type_from_string(const std::string& text);

}  // namespace flowkit
