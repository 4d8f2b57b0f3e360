#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairpm/annotated_table.hpp"
#include "fairpm/conformance.hpp"
#include "fairpm/csv_log.hpp"
#include "fairpm/decision_tree.hpp"
#include "fairpm/enrichment.hpp"
#include "fairpm/error.hpp"
#include "fairpm/fairness.hpp"
#include "fairpm/harness.hpp"
#include "fairpm/petri_net.hpp"
#include "fairpm/specification.hpp"
#include "fairpm/synthetic.hpp"
#include "fairpm/xes.hpp"

namespace fairpm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in && !in.eof()) throw Error("cannot read '" + path + "'");
  return ss.str();
}

std::string format_real(double x) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, end);
}

// Outputs are buffered and only written once the whole command succeeded:
// each file goes to a temporary sibling first and is renamed into place.
class OutputSet {
 public:
  void add(fs::path path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

  void commit() {
    std::vector<fs::path> temps;
    try {
      for (const auto& [path, content] : files_) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".tmp";
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
      }
      for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], files_[i].first);
    } catch (...) {
      std::error_code ec;
      for (const auto& t : temps) fs::remove(t, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

struct InputFlags {
  std::string log;
  std::string net;
  std::string alignments;
  std::string spec;
  std::string config;
  bool synthesize_timestamps = false;
};

struct EnrichFlags {
  std::string delay_mode;
  double delay_value = 0.0;
  std::string deadline;
  double window_hours = 0.0;
  CLI::Option* delay_value_opt = nullptr;
  CLI::Option* window_opt = nullptr;
};

struct ModelFlags {
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::string relabel_mode;
  double granularity = 1e-3;
  double train_fraction = 0.6;
  std::size_t min_leaf = 2;
  std::size_t max_depth = 20;
  bool absolute = false;
  CLI::Option* epsilon_opt = nullptr;
};

void add_log_flags(CLI::App* app, InputFlags& in) {
  app->add_option("--log", in.log, "Event log (.xes, or .csv with case,activity,timestamp columns)")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--net", in.net, "Petri net (PNML) for token-replay conformance")->check(CLI::ExistingFile);
  app->add_option("--alignments", in.alignments, "Precomputed alignment CSV (case_id,deviation,model_moves,log_moves)")
      ->check(CLI::ExistingFile);
  app->add_flag("--synthesize-timestamps", in.synthesize_timestamps,
                "Give events without time:timestamp the previous event's time");
}

void add_enrich_flags(CLI::App* app, EnrichFlags& e) {
  app->add_option("--delay-mode", e.delay_mode, "Delay threshold mode: fraction (of the longest case) or absolute")
      ->check(CLI::IsMember({"fraction", "absolute"}));
  e.delay_value_opt =
      app->add_option("--delay-value", e.delay_value, "Delay threshold: a fraction, or milliseconds when absolute");
  app->add_option("--deadline-attribute", e.deadline, "Trace attribute holding a deadline timestamp");
  e.window_opt = app->add_option("--workload-window-hours", e.window_hours, "Workload window length in hours");
}

void add_model_flags(CLI::App* app, ModelFlags& m) {
  app->add_option("--seed", m.seed, "Seed for every random choice (default 0)");
  m.epsilon_opt = app->add_option("--epsilon", m.epsilon, "Acceptable discrimination, overrides the specification file")
                      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--relabel-mode", m.relabel_mode, "both, neg_to_pos or pos_to_neg; overrides the specification file")
      ->check(CLI::IsMember({"both", "neg_to_pos", "pos_to_neg"}));
  app->add_option("--granularity", m.granularity, "Disc unit of the relabeling DP")
      ->check(CLI::Range(1e-9, 1.0));
  app->add_option("--train-fraction", m.train_fraction, "Share of instances used for training")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--min-leaf", m.min_leaf, "Minimum instances per leaf")->check(CLI::PositiveNumber);
  app->add_option("--max-depth", m.max_depth, "Maximum tree depth")->check(CLI::PositiveNumber);
  app->add_flag("--absolute", m.absolute, "Constrain |disc| instead of disc");
}

EnrichmentConfig enrichment_from_json(const json& j) {
  if (!j.is_object()) throw Error("enrichment config must be a JSON object");
  EnrichmentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "delay_mode") {
      auto mode = value.get<std::string>();
      if (mode == "fraction") {
        c.delay_mode = DelayThresholdMode::kFractionOfMaxDuration;
      } else if (mode == "absolute") {
        c.delay_mode = DelayThresholdMode::kAbsoluteMillis;
      } else {
        throw Error("enrichment config: delay_mode must be 'fraction' or 'absolute'");
      }
    } else if (key == "delay_value") {
      c.delay_value = value.get<double>();
    } else if (key == "deadline_attribute") {
      if (!value.is_null()) c.deadline_attribute = value.get<std::string>();
    } else if (key == "workload_window_millis") {
      c.workload_window_millis = value.get<std::int64_t>();
    } else {
      throw Error("enrichment config: unknown key '" + key + "'");
    }
  }
  return c;
}

json enrichment_to_json(const EnrichmentConfig& c) {
  return {
      {"delay_mode", c.delay_mode == DelayThresholdMode::kAbsoluteMillis ? "absolute" : "fraction"},
      {"delay_value", c.delay_value},
      {"deadline_attribute", c.deadline_attribute ? json(*c.deadline_attribute) : json(nullptr)},
      {"workload_window_millis", c.workload_window_millis},
  };
}

void apply_enrich_flags(EnrichmentConfig& c, const EnrichFlags& e) {
  if (!e.delay_mode.empty()) {
    c.delay_mode =
        e.delay_mode == "absolute" ? DelayThresholdMode::kAbsoluteMillis : DelayThresholdMode::kFractionOfMaxDuration;
  }
  if (e.delay_value_opt->count() > 0) c.delay_value = e.delay_value;
  if (!e.deadline.empty()) c.deadline_attribute = e.deadline;
  if (e.window_opt->count() > 0) {
    c.workload_window_millis = static_cast<std::int64_t>(std::llround(e.window_hours * 3'600'000.0));
  }
  c.validate();
}

EventLog load_log(const InputFlags& in) {
  std::string text = read_file(in.log);
  if (fs::path(in.log).extension() == ".csv") return parse_csv_log(text);
  return parse_xes(text, XesReadOptions{in.synthesize_timestamps});
}

struct Conformance {
  std::optional<ConformanceResults> results;
  std::string source;  // "token_replay", "alignments" or empty
};

Conformance load_conformance(const InputFlags& in, const EventLog& log) {
  if (!in.net.empty() && !in.alignments.empty()) throw Error("use either --net or --alignments, not both");
  Conformance c;
  if (!in.net.empty()) {
    PetriNet net = parse_pnml(read_file(in.net));
    c.results = replay_log(net, log, default_label_map(net));
    c.source = "token_replay";
  } else if (!in.alignments.empty()) {
    c.results = import_alignment_results(read_file(in.alignments));
    c.source = "alignments";
  }
  return c;
}

// Everything a modelling command needs, parsed before any output exists.
struct Prepared {
  SituationSpecification spec;
  EnrichmentConfig enrichment;
  EventLog log;
  Conformance conformance;
  json spec_json;
};

Prepared prepare(const InputFlags& in, const EnrichFlags& ef, const ModelFlags* mf) {
  json spec_json;
  try {
    spec_json = json::parse(read_file(in.spec));
  } catch (const json::parse_error& e) {
    throw Error("spec '" + in.spec + "': " + e.what());
  }
  SituationSpecification spec = parse_specification(spec_json.dump());
  EnrichmentConfig enrichment;
  if (spec_json.contains("enrichment")) enrichment = enrichment_from_json(spec_json["enrichment"]);
  apply_enrich_flags(enrichment, ef);
  if (mf) {
    if (mf->epsilon_opt->count() > 0) spec.epsilon = mf->epsilon;
    if (!mf->relabel_mode.empty()) spec.relabel_mode = parse_relabel_mode(mf->relabel_mode);
    spec.validate();
  }
  EventLog raw = load_log(in);
  Conformance conf = load_conformance(in, raw);
  EventLog log = enrich_all(raw, enrichment);
  if (conf.results) log = enrich_conformance(log, *conf.results);
  return {std::move(spec), enrichment, std::move(log), std::move(conf), std::move(spec_json)};
}

std::vector<std::string> conformance_notes(const Conformance& c) {
  std::vector<std::string> notes;
  if (c.source == "token_replay") {
    notes.push_back(
        "trace:numberModelMove counts missing tokens from token replay, a proxy for alignment model moves");
  }
  return notes;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  auto number = [&](std::string_view s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("invalid number '" + std::string(s) + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    // start:stop:step, stop included
    std::vector<double> parts;
    std::string_view rest = text;
    while (true) {
      auto pos = rest.find(':');
      parts.push_back(number(rest.substr(0, pos)));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (parts.size() != 3 || !(parts[2] > 0)) throw Error("range must be start:stop:step with a positive step");
    for (long i = 0;; ++i) {
      double v = parts[0] + static_cast<double>(i) * parts[2];
      if (v > parts[1] + 1e-9) break;
      out.push_back(static_cast<double>(std::llround(v * 1e9)) / 1e9);
    }
  } else {
    std::string_view rest = text;
    while (!rest.empty()) {
      auto pos = rest.find(',');
      out.push_back(number(rest.substr(0, pos)));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
  }
  if (out.empty()) throw Error("empty list '" + text + "'");
  return out;
}

ExperimentParams experiment_params(const ModelFlags& m) {
  ExperimentParams p;
  p.tree.min_instances_per_leaf = m.min_leaf;
  p.tree.max_depth = m.max_depth;
  p.granularity = m.granularity;
  p.constraint = m.absolute ? DiscConstraint::kAbsolute : DiscConstraint::kSigned;
  p.train_fraction = m.train_fraction;
  return p;
}

json config_json(const InputFlags& in, const Prepared& prep, const ModelFlags& m) {
  return {
      {"log", in.log},
      {"net", in.net.empty() ? json(nullptr) : json(in.net)},
      {"alignments", in.alignments.empty() ? json(nullptr) : json(in.alignments)},
      {"spec", in.spec},
      {"seed", m.seed},
      {"epsilon", prep.spec.epsilon},
      {"relabel_mode", to_string(prep.spec.relabel_mode)},
      {"constraint", m.absolute ? "absolute" : "signed"},
      {"granularity", m.granularity},
      {"train_fraction", m.train_fraction},
      {"min_leaf", m.min_leaf},
      {"max_depth", m.max_depth},
      {"enrichment", enrichment_to_json(prep.enrichment)},
      {"specification", json::parse(specification_to_json(prep.spec))},
  };
}

// --- enrich -----------------------------------------------------------------

int cmd_enrich(const InputFlags& in, const EnrichFlags& ef, const std::string& out_path, bool want_conformance,
               std::ostream& out) {
  EnrichmentConfig config;
  if (!in.config.empty()) {
    json j;
    try {
      j = json::parse(read_file(in.config));
    } catch (const json::parse_error& e) {
      throw Error("config '" + in.config + "': " + e.what());
    }
    config = enrichment_from_json(j.contains("enrichment") ? j["enrichment"] : j);
  }
  apply_enrich_flags(config, ef);
  if (want_conformance && in.net.empty() && in.alignments.empty()) {
    throw Error("conformance attributes need a model or precomputed results: pass --net <pnml> or --alignments <csv>");
  }
  EventLog raw = load_log(in);
  Conformance conf = load_conformance(in, raw);
  EventLog log = enrich_all(raw, config);
  if (conf.results) log = enrich_conformance(log, *conf.results);

  OutputSet outputs;
  outputs.add(out_path, serialize_xes(log));
  outputs.commit();

  std::vector<std::string_view> trace_attrs = {attr::kTraceDuration, attr::kTraceDelay};
  if (conf.results) {
    trace_attrs.insert(trace_attrs.end(), {attr::kTraceDeviation, attr::kTraceModelMoves, attr::kTraceLogMoves});
  }
  const std::vector<std::string_view> event_attrs = {attr::kPrevActivity, attr::kNextActivity,
                                                     attr::kTotalWorkload, attr::kResourceWorkload};
  out << "wrote " << out_path << " (" << log.size() << " traces, " << log.event_count() << " events)\n";
  for (auto name : trace_attrs) {
    std::size_t missing = 0;
    for (const auto& t : log.traces()) missing += !t.attributes.contains(name);
    out << "  " << name << ": missing in " << missing << "/" << log.size() << " traces\n";
  }
  for (auto name : event_attrs) {
    std::size_t missing = 0;
    for (const auto& t : log.traces()) {
      for (const auto& e : t.events) missing += !e.attributes.contains(name);
    }
    out << "  " << name << ": missing in " << missing << "/" << log.event_count() << " events\n";
  }
  for (const auto& note : conformance_notes(conf)) out << "  note: " << note << "\n";
  return 0;
}

// --- extract ----------------------------------------------------------------

int cmd_extract(const InputFlags& in, const EnrichFlags& ef, const std::string& out_path, std::ostream& out) {
  Prepared prep = prepare(in, ef, nullptr);
  AnnotatedTable table = build_annotated_table(prep.log, prep.spec);
  std::ostringstream csv;
  write_table_csv(table, csv);
  OutputSet outputs;
  outputs.add(out_path, csv.str());
  outputs.commit();
  auto c = table.counts();
  out << "wrote " << out_path << ": " << table.size() << " instances (" << c.favorable << " favorable, "
      << c.deprived << " deprived), " << table.dropped() << " dropped\n";
  return 0;
}

// --- analyze ----------------------------------------------------------------

int cmd_analyze(const InputFlags& in, const EnrichFlags& ef, const ModelFlags& mf, const std::string& out_dir,
                std::ostream& out) {
  Prepared prep = prepare(in, ef, &mf);
  AnnotatedTable table = build_annotated_table(prep.log, prep.spec);
  ExperimentParams params = experiment_params(mf);
  auto [train, test] = split_table(table, params.train_fraction, mf.seed);

  DecisionTree standard = grow_tree(train, params.tree);
  RelabelOptions options{prep.spec.epsilon, params.granularity, params.constraint};
  RelabelProblem problem = make_relabel_problem(standard, train, prep.spec.relabel_mode, options);
  RelabelPlan plan = select_relabeling(problem, options);
  DecisionTree fair = apply_relabeling(standard, plan);

  DiscReport fair_train = disc_classifier(fair, train);
  json warnings = json::array();
  if (!plan.feasible) {
    warnings.push_back("no relabeling under mode " + std::string(to_string(prep.spec.relabel_mode)) +
                       " reaches epsilon on the training data; the plan minimizes discrimination instead");
  }
  if (plan.reverse_discrimination) {
    warnings.push_back("fair tree discriminates against the favorable group on the training data (disc < -epsilon)");
  }
  json features = json::array();
  for (const auto& f : table.schema().features()) features.push_back(f.name());

  json report = {
      {"config", config_json(in, prep, mf)},
      {"table",
       {{"instances", table.size()},
        {"dropped", table.dropped()},
        {"train", train.size()},
        {"test", test.size()},
        {"features", features}}},
      {"disc",
       {{"data", to_json(disc_data(table))},
        {"data_train", to_json(disc_data(train))},
        {"standard_train", to_json(disc_classifier(standard, train))},
        {"fair_train", to_json(fair_train)},
        {"standard_test", to_json(disc_classifier(standard, test))},
        {"fair_test", to_json(disc_classifier(fair, test))}}},
      {"accuracy",
       {{"standard_train", to_double(problem.base_accuracy)},
        {"fair_train", accuracy(fair, train)},
        {"standard_test", accuracy(standard, test)},
        {"fair_test", accuracy(fair, test)}}},
      {"plan", to_json(plan)},
      {"feasible", plan.feasible},
      {"reverse_discrimination", plan.reverse_discrimination},
      {"warnings", warnings},
      {"notes", conformance_notes(prep.conformance)},
      {"trees",
       {{"leaves", standard.leaf_count()}, {"depth", standard.depth()}, {"relabeled", plan.leaf_ids()}}},
  };

  fs::path dir(out_dir);
  OutputSet outputs;
  outputs.add(dir / "standard.dot", export_dot(standard));
  outputs.add(dir / "fair.dot", export_dot(fair, fair.relabeled()));
  outputs.add(dir / "report.json", report.dump(2) + "\n");
  outputs.commit();

  out << "disc data " << format_real(disc_data(table).value()) << ", standard " << format_real(problem.base_disc.convert_to<double>())
      << ", fair " << format_real(fair_train.value()) << " (training); " << plan.chosen.size() << " leaves relabeled"
      << (plan.feasible ? "" : ", infeasible") << "\n";
  for (const auto& w : warnings) out << "warning: " << w.get<std::string>() << "\n";
  out << "wrote " << (dir / "report.json").string() << "\n";
  return 0;
}

// --- sweep ------------------------------------------------------------------

struct SweepFlags {
  std::string levels = "0.1:0.5:0.1";
  std::size_t repeats = 5;
  std::string epsilons;
  double level = -1.0;
  CLI::Option* level_opt = nullptr;
};

int cmd_sweep(const InputFlags& in, const EnrichFlags& ef, const ModelFlags& mf, const SweepFlags& sf,
              const std::string& out_dir, std::ostream& out) {
  Prepared prep = prepare(in, ef, &mf);
  AnnotatedTable table = build_annotated_table(prep.log, prep.spec);
  ExperimentParams params = experiment_params(mf);
  fs::path dir(out_dir);
  OutputSet outputs;
  json config = config_json(in, prep, mf);

  std::vector<ExperimentRow> rows;
  std::string report_name;
  if (!sf.epsilons.empty()) {
    std::vector<double> epsilons = parse_levels(sf.epsilons);
    AnnotatedTable base = table;
    if (sf.level_opt->count() > 0) base = inject_discrimination(table, sf.level, mf.seed).table;
    auto observer = [&](const ExperimentRow& r, const DecisionTree& s, const DecisionTree& f) {
      std::string stem = "epsilon_" + format_real(r.epsilon) + "_seed_" + std::to_string(r.seed);
      outputs.add(dir / (stem + "_standard.dot"), export_dot(s));
      outputs.add(dir / (stem + "_fair.dot"), export_dot(f, f.relabeled()));
    };
    rows = run_epsilon_sweep(base, prep.spec, epsilons, mf.seed, params, observer);
    std::ostringstream csv;
    write_epsilon_report(rows, csv);
    report_name = "epsilon_report.csv";
    outputs.add(dir / report_name, csv.str());
    config["epsilons"] = epsilons;
    config["level"] = sf.level_opt->count() > 0 ? json(sf.level) : json(nullptr);
  } else {
    InjectionSpec injection{parse_levels(sf.levels), mf.seed, sf.repeats};
    auto observer = [&](const ExperimentRow& r, const DecisionTree& s, const DecisionTree& f) {
      outputs.add(dir / dot_filename(r.level, r.seed, false), export_dot(s));
      outputs.add(dir / dot_filename(r.level, r.seed, true), export_dot(f, f.relabeled()));
    };
    rows = run_sweep(table, prep.spec, injection, params, observer);
    std::ostringstream csv;
    write_report(rows, csv);
    report_name = "report.csv";
    outputs.add(dir / report_name, csv.str());
    config["levels"] = injection.levels;
    config["repeats"] = injection.repeats;
  }
  config["notes"] = {"disc_data is measured on the full (injected) table; tree metrics on the held-out split"};
  outputs.add(dir / "config.json", config.dump(2) + "\n");
  outputs.commit();
  out << "wrote " << rows.size() << " rows to " << (dir / report_name).string() << "\n";
  return 0;
}

// --- synth ------------------------------------------------------------------

int cmd_synth(const SyntheticLogOptions& options, const std::string& out_path, const std::string& spec_out,
              std::ostream& out) {
  EventLog log = generate_synthetic_log(options);
  OutputSet outputs;
  outputs.add(out_path, serialize_xes(log));
  if (!spec_out.empty()) {
    json spec = json::parse(specification_to_json(synthetic_specification()));
    spec["enrichment"] = enrichment_to_json(synthetic_enrichment_config());
    outputs.add(spec_out, spec.dump(2) + "\n");
  }
  outputs.commit();
  out << "wrote " << out_path << " (" << log.size() << " traces)\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fairness-aware decision trees for process-mining situation tables", "fairpm"};
  app.require_subcommand(1);

  struct Flags {
    InputFlags in;
    EnrichFlags ef;
    ModelFlags mf;
    std::string out;
  };
  Flags enrich_f, extract_f, analyze_f, sweep_f;
  SweepFlags sf;
  bool want_conformance = false;
  SyntheticLogOptions synth;
  std::string synth_out, spec_out;

  auto* enrich = app.add_subcommand("enrich", "Add duration, delay, neighbour, workload and conformance attributes");
  add_log_flags(enrich, enrich_f.in);
  add_enrich_flags(enrich, enrich_f.ef);
  enrich->add_option("--config", enrich_f.in.config, "Enrichment config JSON")->check(CLI::ExistingFile);
  enrich->add_flag("--conformance", want_conformance, "Require conformance attributes");
  enrich->add_option("--out", enrich_f.out, "Enriched XES output")->required();

  auto add_modelling = [&](const char* name, const char* description, Flags& f, bool model, const char* out_help) {
    auto* sub = app.add_subcommand(name, description);
    add_log_flags(sub, f.in);
    add_enrich_flags(sub, f.ef);
    if (model) add_model_flags(sub, f.mf);
    sub->add_option("--spec", f.in.spec, "Situation specification JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, out_help)->required();
    return sub;
  };
  auto* extract = add_modelling("extract", "Write the annotated situation table as CSV", extract_f, false,
                                "Table CSV output");
  auto* analyze = add_modelling("analyze", "Grow the standard and the fair decision tree", analyze_f, true,
                                "Output directory");
  auto* sweep = add_modelling("sweep", "Inject discrimination and compare trees across levels or epsilons", sweep_f,
                              true, "Output directory");
  sweep->add_option("--levels", sf.levels, "Injected levels: comma list or start:stop:step")->capture_default_str();
  sweep->add_option("--repeats", sf.repeats, "Repeats per level (seeds seed..seed+repeats-1)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--epsilons", sf.epsilons, "Epsilon list or range; switches to an epsilon sweep");
  sf.level_opt = sweep->add_option("--level", sf.level, "Level injected before an epsilon sweep")
                     ->check(CLI::Range(0.0, 1.0));

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic claim-handling log");
  synth_cmd->add_option("--out", synth_out, "XES output")->required();
  synth_cmd->add_option("--spec-out", spec_out, "Also write a matching specification JSON");
  synth_cmd->add_option("--traces", synth.traces, "Number of traces")->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "Seed (default 0)");
  synth_cmd->add_option("--proxy-strength", synth.proxy_strength, "Correlation of the Check resource with the group")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--deprived-share", synth.deprived_share, "Share of deprived cases")
      ->check(CLI::Range(0.0, 1.0));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (enrich->parsed()) return cmd_enrich(enrich_f.in, enrich_f.ef, enrich_f.out, want_conformance, out);
    if (extract->parsed()) return cmd_extract(extract_f.in, extract_f.ef, extract_f.out, out);
    if (analyze->parsed()) return cmd_analyze(analyze_f.in, analyze_f.ef, analyze_f.mf, analyze_f.out, out);
    if (sweep->parsed()) return cmd_sweep(sweep_f.in, sweep_f.ef, sweep_f.mf, sf, sweep_f.out, out);
    if (synth_cmd->parsed()) return cmd_synth(synth, synth_out, spec_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace fairpm::cli
