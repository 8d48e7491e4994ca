// Copyright 2026 the bin2vec authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bin2vec/comparison.hpp"
#include "bin2vec/encoder.hpp"
#include "bin2vec/errors.hpp"
#include "bin2vec/formats.hpp"
#include "bin2vec/ingest.hpp"
#include "bin2vec/pe_inspect.hpp"
#include "bin2vec/report.hpp"
#include "bin2vec/view_builder.hpp"

namespace {

using namespace bin2vec;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  const std::string text = read_text_file(path);
  return {text.begin(), text.end()};
}

// All file outputs are atomic: write a sibling temp file, then rename.
void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::IoError,
                  "cannot open '" + temp.string() + "' for writing");
    }
    out << content;
    if (!out.good()) {
      throw Error(ErrorKind::IoError, "short write to '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    throw Error(ErrorKind::IoError,
                "cannot rename '" + temp.string() + "' to '" + path +
                    "': " + ec.message());
  }
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    atomic_write(out_path, content);
  }
}

std::string file_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  return buf;
}

// Artifact ids come from input files; keep report file names flat.
std::string filename_safe(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return out;
}

struct EncoderOptions {
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::size_t dimension = 384;
  std::size_t hashes_per_token = 4;
  std::size_t ngram_n = 2;
  std::string encoder = "hashing";
  std::string vectors_path;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Hashing seed (BIN2VEC_SEED overrides the default)")
        ->each([this](const std::string&) { seed_given = true; });
    cmd->add_option("--dim", dimension, "Embedding dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--hashes-per-token", hashes_per_token,
                    "Hash probes per token")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--ngram", ngram_n, "Mnemonic n-gram length")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--encoder", encoder, "Token encoder: hashing or external")
        ->check(CLI::IsMember({"hashing", "external"}));
    cmd->add_option("--vectors", vectors_path,
                    "Token vector table for --encoder external");
  }

  std::uint64_t effective_seed() const {
    if (seed_given) return seed;
    if (const char* env = std::getenv("BIN2VEC_SEED")) {
      try {
        return std::stoull(env);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError,
                    "BIN2VEC_SEED is not an unsigned integer");
      }
    }
    return seed;
  }

  Encoder build_encoder() const {
    EncoderConfig config;
    config.seed = effective_seed();
    config.dimension = dimension;
    config.hashes_per_token = hashes_per_token;
    if (encoder == "hashing") {
      config.encoder_id = "hashing-v1";
      return Encoder(config);
    }
    if (vectors_path.empty()) {
      throw Error(ErrorKind::ConfigError,
                  "--encoder external requires --vectors FILE");
    }
    const std::string name = file_stem(vectors_path);
    config.encoder_id = "external:" + name;
    VectorProvider provider =
        VectorProvider::load(read_text_file(vectors_path), name, config);
    return Encoder(config, std::move(provider));
  }
};

struct ScoringOptions {
  std::string weights_spec;
  std::string std_population = "batch";
  std::size_t pca_k = 0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--weights", weights_spec,
                    "Per-view weights, e.g. functions=1,imports=2 "
                    "(unlisted views keep weight 0.2)");
    cmd->add_option("--std-population", std_population,
                    "Population for standardization stats: pair or batch")
        ->check(CLI::IsMember({"pair", "batch"}));
    cmd->add_option("--pca-k", pca_k,
                    "Enable the PCA-reduced trace variant with k components")
        ->check(CLI::PositiveNumber);
  }

  WeightVector parse_weights() const {
    WeightVector weights = WeightVector::uniform();
    if (weights_spec.empty()) return weights;
    std::stringstream stream(weights_spec);
    std::string item;
    while (std::getline(stream, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorKind::ConfigError,
                    "weight '" + item + "' is not of the form view=value");
      }
      const std::string name = item.substr(0, eq);
      double value = 0.0;
      try {
        value = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError,
                    "weight value in '" + item + "' is not a number");
      }
      ViewKind view;
      try {
        view = view_from_name(name);
      } catch (const Error&) {
        throw Error(ErrorKind::ConfigError, "unknown view '" + name + "'");
      }
      if (!(value > 0.0)) {
        throw Error(ErrorKind::ConfigError,
                    "weight for '" + name + "' must be positive");
      }
      weights.weights[view] = value;
      weights.normalized = false;
    }
    weights.validate();
    return weights;
  }
};

int cmd_inspect(const std::string& file) {
  const std::vector<std::uint8_t> bytes = read_binary_file(file);
  const PEIdentity identity = detect_bitness(bytes, file_stem(file));
  nlohmann::ordered_json out;
  out["artifact_id"] = identity.artifact_id;
  out["bitness"] = std::string(bitness_name(identity.bitness));
  out["machine_code"] = identity.machine_code;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_ingest(const std::string& static_path, const std::string& trace_path,
               const std::string& binary_path, const std::string& bitness_flag,
               const std::string& out_path) {
  const StaticExport static_export =
      parse_static_export(read_text_file(static_path), static_path);

  PEIdentity identity;
  if (!binary_path.empty()) {
    identity = detect_bitness(read_binary_file(binary_path),
                              static_export.artifact_id);
  } else if (!bitness_flag.empty()) {
    identity.artifact_id = static_export.artifact_id;
    identity.bitness = bitness_from_name(bitness_flag);
    identity.optional_header_magic =
        identity.bitness == Bitness::PE32 ? 0x10B : 0x20B;
  } else {
    throw Error(ErrorKind::ConfigError,
                "provide --binary FILE or --bitness pe32|pe32+");
  }

  std::vector<TraceEvent> trace;
  if (!trace_path.empty()) {
    trace = parse_trace_log(read_text_file(trace_path), identity.bitness,
                            trace_path);
  }

  const ArtifactBundle bundle =
      merge_artifact(identity, static_export, std::move(trace));
  write_or_print(out_path, bundle_to_json(bundle));
  return 0;
}

int cmd_embed(const std::string& bundle_path, const std::string& out_path,
              const EncoderOptions& options) {
  const ArtifactBundle bundle = bundle_from_json(read_text_file(bundle_path));
  const Encoder encoder = options.build_encoder();
  ArtifactViews views = build_views(bundle, encoder, options.ngram_n);
  if (!options.vectors_path.empty() && options.encoder == "external") {
    views.vectors_file = options.vectors_path;
  }
  write_or_print(out_path, views_to_json(views));
  return 0;
}

RunConfigEcho make_echo(const ArtifactViews& views, const ScoringOptions& scoring,
                        const WeightVector& weights) {
  RunConfigEcho echo;
  echo.encoder_id = views.config.encoder_id;
  echo.seed = views.config.seed;
  echo.dimension = views.config.dimension;
  echo.hashes_per_token = views.config.hashes_per_token;
  echo.ngram_n = views.ngram_n;
  echo.vectors_file = views.vectors_file;
  echo.std_population = std_population_from_name(scoring.std_population);
  if (scoring.pca_k > 0) echo.pca_k = scoring.pca_k;
  echo.weights = weights;
  echo.layout_version = views.layout_version;
  return echo;
}

int cmd_compare(const std::string& a_path, const std::string& b_path,
                const std::string& out_path, const ScoringOptions& scoring) {
  ArtifactViews a = views_from_json(read_text_file(a_path));
  ArtifactViews b = views_from_json(read_text_file(b_path));
  check_comparable(a, b);

  const StdPopulation population =
      std_population_from_name(scoring.std_population);
  const std::vector<const ArtifactViews*> run = {&a, &b};
  const StandardizationStats stats = fit_function_numeric_stats(run, population);
  finalize_views(a, &stats);
  finalize_views(b, &stats);
  if (scoring.pca_k > 0) {
    const PCAModel model = fit_trace_pca(run, scoring.pca_k);
    apply_trace_pca(a, model);
    apply_trace_pca(b, model);
  }

  const WeightVector weights = scoring.parse_weights();
  const SimilarityBreakdown breakdown =
      compare_artifacts(a, b, weights, population);
  const ReportDocument report =
      render_report(breakdown, a, b, make_echo(a, scoring, weights));
  write_or_print(out_path, report_to_json(report));
  return 0;
}

int cmd_batch(const std::vector<std::string>& view_paths,
              const std::string& out_dir, const ScoringOptions& scoring,
              std::size_t jobs) {
  if (view_paths.size() < 2) {
    throw Error(ErrorKind::ConfigError, "batch needs at least two view files");
  }
  std::vector<ArtifactViews> all;
  all.reserve(view_paths.size());
  for (const std::string& path : view_paths) {
    all.push_back(views_from_json(read_text_file(path)));
  }
  std::sort(all.begin(), all.end(),
            [](const ArtifactViews& x, const ArtifactViews& y) {
              return x.artifact_id < y.artifact_id;
            });
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i].artifact_id == all[i + 1].artifact_id) {
      throw Error(ErrorKind::ConfigError,
                  "duplicate artifact_id '" + all[i].artifact_id +
                      "' in batch");
    }
    check_comparable(all[i], all[i + 1]);
  }

  const StdPopulation population =
      std_population_from_name(scoring.std_population);
  std::vector<const ArtifactViews*> run;
  for (const ArtifactViews& views : all) run.push_back(&views);

  // Two-pass: statistics and the shared PCA model come from the whole batch
  // before any pair is scored.
  StandardizationStats batch_stats = fit_function_numeric_stats(run, population);
  std::optional<PCAModel> pca_model;
  if (scoring.pca_k > 0) pca_model = fit_trace_pca(run, scoring.pca_k);

  if (population == StdPopulation::Batch) {
    for (ArtifactViews& views : all) {
      finalize_views(views, &batch_stats);
      if (pca_model) apply_trace_pca(views, *pca_model);
    }
  }

  struct Pair {
    std::size_t a;
    std::size_t b;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) pairs.push_back({i, j});
  }

  const WeightVector weights = scoring.parse_weights();
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> summaries(pairs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t index = next.fetch_add(1);
      if (index >= pairs.size()) return;
      try {
        const Pair& pair = pairs[index];
        SimilarityBreakdown breakdown;
        ReportDocument report;
        if (population == StdPopulation::Pair) {
          // Pairwise statistics: finalize copies against this pair only.
          ArtifactViews a = all[pair.a];
          ArtifactViews b = all[pair.b];
          const std::vector<const ArtifactViews*> pair_run = {&a, &b};
          const StandardizationStats stats =
              fit_function_numeric_stats(pair_run, population);
          finalize_views(a, &stats);
          finalize_views(b, &stats);
          if (pca_model) {
            apply_trace_pca(a, *pca_model);
            apply_trace_pca(b, *pca_model);
          }
          breakdown = compare_artifacts(a, b, weights, population);
          report = render_report(breakdown, a, b, make_echo(a, scoring, weights));
        } else {
          const ArtifactViews& a = all[pair.a];
          const ArtifactViews& b = all[pair.b];
          breakdown = compare_artifacts(a, b, weights, population);
          report = render_report(breakdown, a, b, make_echo(a, scoring, weights));
        }
        const std::string file_name = filename_safe(breakdown.artifact_a) +
                                      "__" + filename_safe(breakdown.artifact_b) +
                                      ".report.json";
        atomic_write((std::filesystem::path(out_dir) / file_name).string(),
                     report_to_json(report));
        summaries[index] = breakdown.artifact_a + " " + breakdown.artifact_b +
                           " " + format_score(breakdown.global_cosine);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const std::size_t worker_count = std::max<std::size_t>(1, jobs);
  std::vector<std::thread> threads;
  threads.reserve(worker_count);
  for (std::size_t t = 0; t < worker_count; ++t) threads.emplace_back(worker);
  for (std::thread& thread : threads) thread.join();
  if (first_error) std::rethrow_exception(first_error);

  for (const std::string& line : summaries) std::cout << line << "\n";
  return 0;
}

int cmd_report(const std::string& report_path, const std::string& charts_out) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(read_text_file(report_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaViolation,
                std::string("invalid JSON: ") + e.what(), "$");
  }
  if (!doc.is_object() || !doc.contains("format") ||
      doc["format"] != formats::kReportV1) {
    throw Error(ErrorKind::SchemaViolation,
                "not a " + std::string(formats::kReportV1) + " document",
                "$.format");
  }
  if (!doc.contains("charts") || !doc["charts"].is_array()) {
    throw Error(ErrorKind::SchemaViolation, "missing charts array", "$.charts");
  }
  nlohmann::ordered_json out;
  out["format"] = "bin2vec-charts-v1";
  out["artifact_a"] = doc.value("artifact_a", "");
  out["artifact_b"] = doc.value("artifact_b", "");
  out["charts"] = doc["charts"];
  write_or_print(charts_out, out.dump(2) + "\n");
  return 0;
}

std::string version_text() {
  std::string out = "bin2vec ";
  out += formats::kToolVersion;
  out += "\nformats:";
  out += " static=";
  out += formats::kStaticV1;
  out += " trace=";
  out += formats::kTraceV1;
  out += " bundle=";
  out += formats::kBundleV1;
  out += " views=";
  out += formats::kViewsV1;
  out += " vectors=";
  out += formats::kVectorsV1;
  out += " report=";
  out += formats::kReportV1;
  out += " fields=";
  out += formats::kFieldLayoutV1;
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Multi-view binary similarity: embed PE artifacts into "
               "auditable per-view vectors and score pairs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_text());

  // inspect
  std::string inspect_file;
  CLI::App* inspect = app.add_subcommand(
      "inspect", "Classify a PE file as PE32 or PE32+ from its headers");
  inspect->add_option("file", inspect_file, "PE file")->required();

  // ingest
  std::string static_path, trace_path, binary_path, bitness_flag, ingest_out;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "Merge a static export and a trace log into one bundle");
  ingest->add_option("--static", static_path, "bin2vec-static-v1 JSON file")
      ->required();
  ingest->add_option("--trace", trace_path, "bin2vec-trace-v1 JSON-lines file");
  ingest->add_option("--binary", binary_path,
                     "PE file used to detect the architecture");
  ingest->add_option("--bitness", bitness_flag,
                     "Architecture when no --binary is available (pe32|pe32+)");
  ingest->add_option("--out", ingest_out, "Output bundle path (default stdout)");

  // embed
  std::string bundle_path, embed_out;
  EncoderOptions encoder_options;
  CLI::App* embed = app.add_subcommand(
      "embed", "Build the five view embeddings from a bundle");
  embed->add_option("bundle", bundle_path, "bin2vec-bundle-v1 file")->required();
  embed->add_option("--out", embed_out, "Output views path (default stdout)");
  encoder_options.add_flags(embed);

  // compare
  std::string compare_a, compare_b, compare_out;
  ScoringOptions compare_scoring;
  CLI::App* compare = app.add_subcommand(
      "compare", "Score two view files and emit the full report");
  compare->add_option("a_views", compare_a, "views file A")->required();
  compare->add_option("b_views", compare_b, "views file B")->required();
  compare->add_option("--out", compare_out, "Output report path (default stdout)");
  compare_scoring.add_flags(compare);

  // batch
  std::vector<std::string> batch_paths;
  std::string batch_out_dir;
  std::size_t batch_jobs = 1;
  ScoringOptions batch_scoring;
  CLI::App* batch = app.add_subcommand(
      "batch", "Score every pair among N view files (lexical id order)");
  batch->add_option("views", batch_paths, "views files")->required();
  batch->add_option("--out-dir", batch_out_dir, "Directory for per-pair reports")
      ->required();
  batch->add_option("--jobs", batch_jobs, "Worker threads (output bytes do not depend on this)")
      ->check(CLI::PositiveNumber);
  batch_scoring.add_flags(batch);

  // report
  std::string report_path, charts_out;
  CLI::App* report = app.add_subcommand(
      "report", "Extract chart-ready series from a report");
  report->add_option("report", report_path, "bin2vec-report-v1 file")->required();
  report->add_option("--charts-out", charts_out,
                     "Output charts path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/usage text
    return code == 0 ? 0 : 1;
  }

  if (inspect->parsed()) return cmd_inspect(inspect_file);
  if (ingest->parsed()) {
    return cmd_ingest(static_path, trace_path, binary_path, bitness_flag,
                      ingest_out);
  }
  if (embed->parsed()) return cmd_embed(bundle_path, embed_out, encoder_options);
  if (compare->parsed()) {
    return cmd_compare(compare_a, compare_b, compare_out, compare_scoring);
  }
  if (batch->parsed()) {
    return cmd_batch(batch_paths, batch_out_dir, batch_scoring, batch_jobs);
  }
  if (report->parsed()) return cmd_report(report_path, charts_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bin2vec::Error& e) {
    std::cerr << e.to_json() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json inner;
    inner["type"] = "InternalError";
    inner["reason"] = e.what();
    nlohmann::ordered_json doc;
    doc["error"] = inner;
    std::cerr << doc.dump() << "\n";
    return 2;
  }
}
