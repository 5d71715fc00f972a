#include "fusum/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <thread>

namespace fusum {

namespace {

namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error("config " + std::string(key) + ": expected an integer, got '" +
                std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = to_lower(value);
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw Error("config " + std::string(key) + ": expected on/off, got '" + std::string(value) +
              "'");
}

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<fs::path> sorted_files(const fs::path &dir) {
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

const std::vector<std::string> &PipelineConfig::Keys() {
  static const std::vector<std::string> keys = {
      "max_nodes", "min_nodes", "unique_labels", "lexicon",  "chains",
      "anaphora",  "max_span",  "pos_column",    "multi_ref", "stem",
      "stopwords", "node_cap",  "jobs"};
  return keys;
}

void PipelineConfig::Set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "max_nodes") {
    model.max_nodes = parse_number<int>(key, value);
  } else if (key == "min_nodes") {
    model.min_nodes = parse_number<int>(key, value);
  } else if (key == "unique_labels") {
    model.unique_label_set.clear();
    for (std::string_view label : split(value, ',')) {
      label = trim(label);
      if (!label.empty()) model.unique_label_set.insert(std::string(label));
    }
  } else if (key == "lexicon") {
    lexicon_path = std::string(value);
  } else if (key == "chains") {
    chains_path = std::string(value);
  } else if (key == "anaphora") {
    anaphora = parse_bool(key, value);
  } else if (key == "max_span") {
    max_span = parse_number<int>(key, value);
  } else if (key == "pos_column") {
    const std::string v = to_lower(value);
    if (v == "upos") pos_column = PosColumn::kUpos;
    else if (v == "xpos") pos_column = PosColumn::kXpos;
    else throw Error("config pos_column: expected UPOS or XPOS, got '" + std::string(value) + "'");
  } else if (key == "multi_ref") {
    const std::string v = to_lower(value);
    if (v == "mean") multi_ref = MultiReference::kMean;
    else if (v == "max") multi_ref = MultiReference::kMax;
    else throw Error("config multi_ref: expected mean or max, got '" + std::string(value) + "'");
  } else if (key == "stem") {
    stem = parse_bool(key, value);
  } else if (key == "stopwords") {
    stopwords = parse_bool(key, value);
  } else if (key == "node_cap") {
    node_cap = parse_number<long>(key, value);
  } else if (key == "jobs") {
    jobs = parse_number<int>(key, value);
  } else {
    throw Error("unknown config key '" + std::string(key) + "'");
  }
}

void PipelineConfig::LoadFile(const std::string &path) {
  const std::string text = read_file(path);
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(path + ": expected key=value", line_no);
    }
    Set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void PipelineConfig::LoadEnvironment() {
  for (const std::string &key : Keys()) {
    std::string name = "FUSUM_";
    for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char *value = std::getenv(name.c_str())) Set(key, value);
  }
}

void PipelineConfig::Validate() const {
  model.Validate();
  if (max_span < 1) throw Error("max_span must be >= 1");
  if (node_cap < 1) throw Error("node_cap must be >= 1");
  if (jobs < 1) throw Error("jobs must be >= 1");
}

std::string labels_path(const std::string &prefix) { return prefix + ".labels.tsv"; }
std::string frequencies_path(const std::string &prefix) { return prefix + ".freq.tsv"; }

StatsCaches build_stats(const BackgroundCorpus &corpus) {
  return StatsCaches{count_label_stats(corpus), build_frequency_model(corpus)};
}

void write_stats(const StatsCaches &stats, const std::string &prefix) {
  write_file(labels_path(prefix), stats.labels.Serialize());
  write_file(frequencies_path(prefix), stats.frequencies.Serialize());
}

StatsCaches load_stats(const std::string &prefix) {
  StatsCaches stats;
  try {
    stats.labels = LabelStats::Parse(read_file(labels_path(prefix)));
  } catch (const ParseError &e) {
    throw Error(labels_path(prefix) + ": " + e.what());
  }
  try {
    stats.frequencies = FrequencyModel::Parse(read_file(frequencies_path(prefix)));
  } catch (const ParseError &e) {
    throw Error(frequencies_path(prefix) + ": " + e.what());
  }
  return stats;
}

SegmentResult summarize_segment(const TopicSegment &segment, const StatsCaches &stats,
                                const PipelineConfig &config, const PronounLexicon &lexicon,
                                const CorefChains *chains) {
  try {
    const TopicSegment resolved =
        config.anaphora ? resolve_segment(segment, lexicon, config.max_span, chains) : segment;
    const FusionGraph graph = build_fusion_graph(resolved);
    const ILPModel model =
        build_model(graph, stats.labels, stats.frequencies, resolved, config.model);
    const Solution solution =
        solve(model, arc_view(graph), SolverOptions{config.node_cap});
    if (solution.status != SolveStatus::kOptimal) {
      throw SolverError("model is infeasible");
    }
    const SelectedTree tree = extract_tree(solution, graph);
    SegmentResult result;
    result.sentence.segment_id = segment.id;
    result.sentence.ordered_tokens = order_nodes(tree, graph);
    result.sentence.text = render(result.sentence.ordered_tokens);
    result.sentence.objective = solution.objective;
    result.graph_dump = graph.Serialize();
    result.model_dump = model.Serialize();

    nlohmann::json selected = nlohmann::json::array();
    for (int id : tree.edges) {
      const FusionEdge &e = graph.edge(id);
      selected.push_back({{"id", id},
                          {"governor", graph.node(e.governor).key.word},
                          {"dependent", graph.node(e.dependent).key.word},
                          {"label", e.label},
                          {"weight", model.variables[id].weight}});
    }
    nlohmann::json ordering = nlohmann::json::array();
    for (const OrderedToken &t : result.sentence.ordered_tokens) {
      ordering.push_back({{"node", t.node},
                          {"surface", t.occurrence.surface},
                          {"utterance", t.occurrence.utterance_position},
                          {"token", t.occurrence.token_index},
                          {"key", t.key}});
    }
    int resolved_tokens = 0;
    for (const Utterance &u : resolved.utterances) resolved_tokens += u.size();
    result.trace = {{"segment", segment.id},
                    {"utterances", segment.size()},
                    {"tokens", resolved_tokens},
                    {"graph_nodes", graph.nodes().size()},
                    {"lexical_nodes", graph.lexical_node_count()},
                    {"merged_content_nodes", graph.merged_content_node_count()},
                    {"dropped_self_loops", graph.dropped_self_loops()},
                    {"variables", model.size()},
                    {"constraints", model.constraints.size()},
                    {"objective", solution.objective},
                    {"cuts_added", solution.cuts_added},
                    {"nodes_explored", solution.nodes_explored},
                    {"selected_edges", std::move(selected)},
                    {"ordering", std::move(ordering)},
                    {"summary", result.sentence.text}};
    return result;
  } catch (const std::exception &e) {
    throw Error("segment " + segment.id + ": " + e.what());
  }
}

SummaryRun summarize_all(const std::vector<TopicSegment> &segments, const StatsCaches &stats,
                         const PipelineConfig &config) {
  config.Validate();
  PronounLexicon lexicon = config.lexicon_path.empty()
                               ? PronounLexicon::Default()
                               : PronounLexicon::Parse(read_file(config.lexicon_path));
  std::optional<CorefChains> chains;
  if (!config.chains_path.empty()) chains = CorefChains::Parse(read_file(config.chains_path));
  const CorefChains *chains_ptr = chains ? &*chains : nullptr;

  const size_t n = segments.size();
  std::vector<std::optional<SegmentResult>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < n; i = next++) {
      try {
        results[i] = summarize_segment(segments[i], stats, config, lexicon, chains_ptr);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(std::max<size_t>(n, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SummaryRun run;
  for (size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    run.summary_text += results[i]->sentence.text + "\n";
    run.trace_jsonl += results[i]->trace.dump() + "\n";
    run.segments.push_back(std::move(*results[i]));
  }
  return run;
}

std::string evaluate_directories(const std::string &candidates_dir,
                                 const std::string &references_dir,
                                 const RougeOptions &options) {
  if (!fs::is_directory(candidates_dir)) throw Error("not a directory: " + candidates_dir);
  if (!fs::is_directory(references_dir)) throw Error("not a directory: " + references_dir);

  struct Totals {
    double recall = 0, precision = 0, f1 = 0;
  };
  Totals r2_total, su4_total;
  std::string out;
  int docs = 0;
  auto row = [&](const std::string &doc, const char *metric, const RougeScore &s) {
    out += doc + "\t" + metric + "\t" + format_score(s.recall) + "\t" +
           format_score(s.precision) + "\t" + format_score(s.f1) + "\n";
  };

  for (const fs::path &candidate : sorted_files(candidates_dir)) {
    const std::string doc = candidate.filename().string();
    const fs::path ref_path = fs::path(references_dir) / doc;
    std::vector<std::vector<std::string>> references;
    if (fs::is_directory(ref_path)) {
      for (const fs::path &ref : sorted_files(ref_path)) {
        references.push_back(preprocess_tokens(tokenize_for_rouge(read_file(ref.string())), options));
      }
    } else if (fs::is_regular_file(ref_path)) {
      references.push_back(preprocess_tokens(tokenize_for_rouge(read_file(ref_path.string())), options));
    }
    if (references.empty()) throw Error("missing reference for " + doc);

    const auto cand = preprocess_tokens(tokenize_for_rouge(read_file(candidate.string())), options);
    const RougeScore r2 = rouge_n(cand, references, 2, options.multi_reference);
    const RougeScore su4 = rouge_su(cand, references, 4, options.multi_reference);
    row(doc, "ROUGE-2", r2);
    row(doc, "ROUGE-SU4", su4);
    r2_total.recall += r2.recall;
    r2_total.precision += r2.precision;
    r2_total.f1 += r2.f1;
    su4_total.recall += su4.recall;
    su4_total.precision += su4.precision;
    su4_total.f1 += su4.f1;
    ++docs;
  }
  if (docs == 0) throw Error("no candidate files in " + candidates_dir);
  row("MEAN", "ROUGE-2",
      RougeScore{r2_total.recall / docs, r2_total.precision / docs, r2_total.f1 / docs});
  row("MEAN", "ROUGE-SU4",
      RougeScore{su4_total.recall / docs, su4_total.precision / docs, su4_total.f1 / docs});
  return out;
}

}  // namespace fusum
