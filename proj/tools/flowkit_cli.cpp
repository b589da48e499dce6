#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flowkit/flow.hpp"
#include "flowkit/harness.hpp"
#include "flowkit/render.hpp"
#include "flowkit/rng.hpp"
#include "flowkit/synth.hpp"

namespace {

using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw flowkit::IoError("cannot write " + path);
  out << text;
}

struct FlowRecord {
  std::string id;
  flowkit::Flow flow;
};

std::vector<FlowRecord> read_flow_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw flowkit::IoError("cannot open " + path);
  std::vector<FlowRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    flowkit::ParseResult parsed = flowkit::parse_flow(line);
    if (const auto* error = std::get_if<flowkit::ParseError>(&parsed)) {
      throw flowkit::IoError(path + ":" + std::to_string(line_number) + ": " +
                             error->message());
    }
    FlowRecord record;
    record.flow = std::get<flowkit::Flow>(parsed);
    ordered_json obj = ordered_json::parse(line);
    if (obj.contains("id") && obj["id"].is_string()) {
      record.id = obj["id"].get<std::string>();
    } else {
      record.id = flowkit::content_id(record.flow);
    }
    records.push_back(std::move(record));
  }
  return records;
}

int run_generate(const std::string& pattern_name, std::size_t count, std::uint64_t seed,
                 const std::string& out_path) {
  flowkit::Catalog catalog = flowkit::default_catalog();
  std::vector<flowkit::PatternSpec> registry = flowkit::default_registry();
  if (pattern_name != "mixed")
    registry = {flowkit::pattern_by_name(registry, pattern_name)};
  std::vector<flowkit::GeneratedFlow> flows =
      flowkit::generate_labeled_dataset(registry, catalog, count, seed);

  std::ostringstream out;
  for (const auto& item : flows) {
    ordered_json line;
    line["id"] = flowkit::content_id(item.flow);
    line["pattern"] = item.pattern;
    line.update(ordered_json::parse(flowkit::serialize_flow(item.flow)));
    out << line.dump() << "\n";
  }
  write_text(out_path, out.str());
  std::cerr << "wrote " << flows.size() << " flows to " << out_path << "\n";
  return 0;
}

int run_split(const std::string& in_path, const std::string& ratios_text, std::uint64_t seed,
              const std::string& out_path) {
  std::array<double, 3> ratios{};
  {
    std::stringstream stream(ratios_text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(stream, part, ',') && i < 3) ratios[i++] = std::stod(part);
    if (i != 3) throw flowkit::ConfigError("--ratios needs three comma-separated values");
  }
  std::vector<FlowRecord> records = read_flow_jsonl(in_path);
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& record : records) ids.push_back(record.id);
  flowkit::SplitManifest manifest = flowkit::split_ids(ids, ratios, seed);
  write_text(out_path, flowkit::manifest_to_json(manifest) + "\n");
  std::cerr << "split " << ids.size() << " flows into " << manifest.train.size() << "/"
            << manifest.valid.size() << "/" << manifest.test.size() << "\n";
  return 0;
}

int run_render(const std::string& in_path, const std::string& out_dir, std::uint64_t seed,
               bool raster) {
  std::vector<FlowRecord> records = read_flow_jsonl(in_path);
  std::filesystem::create_directories(out_dir);
  bool have_dot = raster && std::system("dot -V > /dev/null 2>&1") == 0;
  if (raster && !have_dot)
    std::cerr << "graphviz dot binary not found, skipping rasterization\n";
  flowkit::Rng base(seed);
  for (const auto& record : records) {
    flowkit::RenderStyle style = flowkit::sample_style(base.stream(record.id).next());
    std::filesystem::path dot_path = std::filesystem::path(out_dir) / (record.id + ".dot");
    write_text(dot_path.string(), flowkit::to_dot(record.flow, style));
    if (have_dot) {
      std::filesystem::path png_path = std::filesystem::path(out_dir) / (record.id + ".png");
      std::string command =
          "dot -Tpng '" + dot_path.string() + "' -o '" + png_path.string() + "'";
      if (std::system(command.c_str()) != 0)
        std::cerr << "rasterization failed for " << dot_path.string() << "\n";
    }
  }
  std::cerr << "rendered " << records.size() << " flows into " << out_dir << "\n";
  return 0;
}

int run_evaluate(const std::string& dataset_path, const std::string& predictions_path,
                 const std::string& endpoint_path, const std::string& report_path,
                 const std::string& format, bool exclude_missing) {
  std::vector<flowkit::Sample> samples = flowkit::load_dataset(dataset_path);
  std::vector<flowkit::Prediction> predictions;
  if (!predictions_path.empty()) {
    predictions = flowkit::load_predictions(predictions_path);
  } else {
    flowkit::ModelEndpointConfig config = flowkit::load_endpoint_config(endpoint_path);
    predictions = flowkit::fetch_predictions(samples, config);
  }
  flowkit::EvalReport report =
      flowkit::score(samples, predictions, flowkit::TreeWeights{}, exclude_missing);
  flowkit::ReportFormat report_format =
      format == "md" ? flowkit::ReportFormat::markdown_table : flowkit::ReportFormat::json;
  std::string text = flowkit::emit_report(report, report_format);
  if (!text.empty() && text.back() != '\n') text += "\n";
  write_text(report_path, text);
  std::cerr << "scored " << report.per_sample.size() << " samples, report at " << report_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workflow toolkit: generate, split, render and evaluate flows"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Generate synthetic flows as JSONL");
  std::string gen_pattern = "mixed";
  std::size_t gen_count = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate->add_option("--pattern", gen_pattern, "Pattern name or \"mixed\"");
  generate->add_option("--count", gen_count, "Number of flows")->required();
  generate->add_option("--seed", gen_seed, "RNG seed");
  generate->add_option("--out", gen_out, "Output JSONL path")->required();

  auto* split = app.add_subcommand("split", "Partition flows into train/valid/test");
  std::string split_in, split_out;
  std::string split_ratios = "0.86,0.07,0.07";
  std::uint64_t split_seed = 0;
  split->add_option("--in", split_in, "Input JSONL path")->required();
  split->add_option("--ratios", split_ratios, "Three comma-separated ratios");
  split->add_option("--seed", split_seed, "RNG seed");
  split->add_option("--out", split_out, "Output manifest path")->required();

  auto* render = app.add_subcommand("render", "Emit Graphviz DOT files per flow");
  std::string render_in, render_out_dir;
  std::uint64_t render_seed = 0;
  bool render_raster = false;
  render->add_option("--in", render_in, "Input JSONL path")->required();
  render->add_option("--out-dir", render_out_dir, "Output directory")->required();
  render->add_option("--seed", render_seed, "RNG seed for style sampling");
  render->add_flag("--raster", render_raster, "Also write PNGs when graphviz is available");

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against a dataset");
  std::string eval_dataset, eval_predictions, eval_endpoint, eval_report;
  std::string eval_format = "json";
  bool eval_exclude_missing = false;
  evaluate->add_option("--dataset", eval_dataset, "Reference dataset JSONL")->required();
  auto* predictions_option =
      evaluate->add_option("--predictions", eval_predictions, "Predictions JSONL");
  auto* endpoint_option =
      evaluate->add_option("--endpoint", eval_endpoint, "Model endpoint config JSON");
  predictions_option->excludes(endpoint_option);
  evaluate->add_option("--report", eval_report, "Report output path")->required();
  evaluate->add_option("--format", eval_format, "json or md")
      ->check(CLI::IsMember({"json", "md"}));
  evaluate->add_flag("--exclude-missing", eval_exclude_missing,
                     "Drop samples without predictions instead of scoring them zero");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return run_generate(gen_pattern, gen_count, gen_seed, gen_out);
    if (*split) return run_split(split_in, split_ratios, split_seed, split_out);
    if (*render) return run_render(render_in, render_out_dir, render_seed, render_raster);
    if (*evaluate) {
      if (eval_predictions.empty() && eval_endpoint.empty())
        throw flowkit::ConfigError("evaluate needs --predictions or --endpoint");
      return run_evaluate(eval_dataset, eval_predictions, eval_endpoint, eval_report,
                          eval_format, eval_exclude_missing);
    }
  } catch (const flowkit::ParseError& error) {
    std::cerr << "error: " << error.message() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
