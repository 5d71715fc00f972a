// fusum: one-sentence-per-topic abstractive meeting summaries by dependency
// graph fusion and exact 0-1 ILP subtree selection.
//
//   fusum stats build CORPUS.conllu OUT_PREFIX
//   fusum summarize SEGMENTS.conllu MANIFEST.tsv STATS_PREFIX [-o DIR]
//   fusum solve MODEL_DUMP [-o SOLUTION]
//   fusum evaluate CANDIDATES_DIR REFERENCES_DIR

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fusum/corpus.h"
#include "fusum/ilp_model.h"
#include "fusum/ilp_solver.h"
#include "fusum/pipeline.h"

namespace {

namespace fs = std::filesystem;

// Builds the effective configuration: defaults, then --config, then
// FUSUM_* environment variables, then per-key flags.
fusum::PipelineConfig resolve_config(const std::string &config_path,
                                     const std::map<std::string, std::string> &flags) {
  fusum::PipelineConfig config;
  if (!config_path.empty()) config.LoadFile(config_path);
  config.LoadEnvironment();
  for (const auto &[key, value] : flags) {
    if (!value.empty()) config.Set(key, value);
  }
  config.Validate();
  return config;
}

void write_output(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    fusum::write_file(path, content);
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Abstractive meeting summarization by dependency graph fusion"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "Flat key=value configuration file");
  std::map<std::string, std::string> flags;
  for (const std::string &key : fusum::PipelineConfig::Keys()) {
    flags[key];
    app.add_option("--" + key, flags[key], "Override the '" + key + "' setting");
  }

  auto *stats_cmd = app.add_subcommand("stats", "Background corpus statistics");
  stats_cmd->require_subcommand(1);
  auto *stats_build = stats_cmd->add_subcommand("build", "Count label and word statistics");
  std::string corpus_path, out_prefix;
  stats_build->add_option("corpus", corpus_path, "CoNLL-U background corpus")->required();
  stats_build->add_option("out_prefix", out_prefix, "Output prefix for the TSV caches")
      ->required();

  auto *summarize_cmd = app.add_subcommand("summarize", "Summarize topic segments");
  std::string segments_path, manifest_path, stats_prefix, out_dir = ".", dump_dir;
  summarize_cmd->add_option("segments", segments_path, "CoNLL-U utterances")->required();
  summarize_cmd->add_option("manifest", manifest_path, "segment_id<TAB>utterance_id manifest")
      ->required();
  summarize_cmd->add_option("stats_prefix", stats_prefix, "Prefix given to 'stats build'")
      ->required();
  summarize_cmd->add_option("-o,--out-dir", out_dir, "Directory for summary.txt and trace.jsonl");
  summarize_cmd->add_option("--dump-dir", dump_dir,
                            "Also write <segment>.graph and <segment>.model debug dumps here");

  auto *solve_cmd = app.add_subcommand("solve", "Solve a model debug dump");
  std::string model_path, solution_path;
  solve_cmd->add_option("model", model_path, "Model dump (VAR/CON lines)")->required();
  solve_cmd->add_option("-o,--output", solution_path, "Solution file (default stdout)");

  auto *evaluate_cmd = app.add_subcommand("evaluate", "ROUGE-2 and ROUGE-SU4 scores");
  std::string candidates_dir, references_dir, scores_path;
  evaluate_cmd->add_option("candidates", candidates_dir, "Directory of system summaries")
      ->required();
  evaluate_cmd->add_option("references", references_dir,
                           "Directory of references with matching file names")
      ->required();
  evaluate_cmd->add_option("-o,--output", scores_path, "TSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const fusum::PipelineConfig config = resolve_config(config_path, flags);

    if (stats_build->parsed()) {
      const auto sentences = fusum::parse_conllu(fusum::read_file(corpus_path), config.pos_column);
      const auto corpus = fusum::BackgroundCorpus::FromUtterances(sentences);
      fusum::write_stats(fusum::build_stats(corpus), out_prefix);
      std::cerr << "stats: " << corpus.sentences.size() << " sentences, "
                << corpus.token_count << " tokens\n";
    } else if (summarize_cmd->parsed()) {
      const auto utterances =
          fusum::parse_conllu(fusum::read_file(segments_path), config.pos_column);
      const auto segments =
          fusum::load_segment_manifest(fusum::read_file(manifest_path), utterances);
      const fusum::StatsCaches stats = fusum::load_stats(stats_prefix);
      const fusum::SummaryRun run = fusum::summarize_all(segments, stats, config);
      fs::create_directories(out_dir);
      fusum::write_file((fs::path(out_dir) / "summary.txt").string(), run.summary_text);
      fusum::write_file((fs::path(out_dir) / "trace.jsonl").string(), run.trace_jsonl);
      if (!dump_dir.empty()) {
        fs::create_directories(dump_dir);
        for (const auto &seg : run.segments) {
          const fs::path base = fs::path(dump_dir) / seg.sentence.segment_id;
          fusum::write_file(base.string() + ".graph", seg.graph_dump);
          fusum::write_file(base.string() + ".model", seg.model_dump);
        }
      }
    } else if (solve_cmd->parsed()) {
      const fusum::ILPModel model = fusum::ILPModel::Parse(fusum::read_file(model_path));
      const fusum::Solution solution = fusum::solve(
          model, fusum::arc_view(model),
          fusum::SolverOptions{config.node_cap});
      write_output(solution_path, solution.Serialize());
    } else if (evaluate_cmd->parsed()) {
      fusum::RougeOptions options;
      options.stem = config.stem;
      options.remove_stopwords = config.stopwords;
      options.multi_reference = config.multi_ref;
      write_output(scores_path,
                   fusum::evaluate_directories(candidates_dir, references_dir, options));
    }
  } catch (const std::exception &e) {
    std::cerr << "fusum: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
