#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "effcost/analysis.hpp"
#include "effcost/errors.hpp"
#include "effcost/records_csv.hpp"
#include "effcost/report.hpp"
#include "effcost/spec_json.hpp"
#include "effcost/svg.hpp"

namespace effcost::cli {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(fmt::format("cannot write '{}'", path));
  out << body;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

HardwareModel resolve_hardware(const std::string& ref) {
  namespace fs = std::filesystem;
  if (ends_with(ref, ".json") || fs::is_regular_file(ref)) {
    return hardware_from_json(json::parse(read_file(ref)));
  }
  if (const char* dir = std::getenv(kHardwareDirEnv); dir != nullptr && *dir != '\0') {
    const fs::path candidate = fs::path(dir) / (ref + ".json");
    if (fs::is_regular_file(candidate)) {
      return hardware_from_json(json::parse(read_file(candidate.string())));
    }
  }
  if (auto preset = find_preset(ref)) return *preset;
  std::vector<std::string> names;
  for (const auto& hw : hardware_presets()) names.push_back(hw.name);
  throw ParseError(fmt::format("unknown hardware preset '{}' (built-in: {})", ref, fmt::join(names, ", ")));
}

HardwareModel resolve_hardware(const HardwareRef& ref) {
  if (const auto* name = std::get_if<std::string>(&ref)) return resolve_hardware(*name);
  return std::get<HardwareModel>(ref);
}

// Text table with left-aligned columns separated by two spaces.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string render_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ",";
      out += row[c];
    }
    out += "\n";
  }
  return out;
}

void emit_error(std::ostream& err, std::string_view kind, std::string_view message,
                std::optional<std::size_t> byte = std::nullopt,
                const std::vector<std::string>& missing = {}) {
  json j = {{"error", kind}, {"message", message}};
  if (byte) j["byte"] = *byte;
  if (!missing.empty()) j["missing"] = missing;
  err << j.dump() << "\n";
}

// Builder flags shared by profile, validate and spec.
struct BuilderFlags {
  std::string family;
  std::optional<std::string> name, boundary, arrangement, image;
  std::optional<Count> patch, depth, model_dim, heads, ffn_dim, qkv_dim, classes;
  std::optional<Count> ut_steps, moe_experts, moe_k, moe_every;
  std::optional<Count> layers, vocab, input_length, output_length;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "Builder family: vit or lm");
    app->add_option("--name", name, "Model name");
    app->add_option("--patch", patch, "ViT patch size");
    app->add_option("--depth", depth, "ViT depth (blocks)");
    app->add_option("--model-dim", model_dim, "Model (embedding) width");
    app->add_option("--heads", heads, "Attention heads");
    app->add_option("--ffn-dim", ffn_dim, "Feed-forward hidden width");
    app->add_option("--qkv-dim", qkv_dim, "Attention QKV width (default: model dim)");
    app->add_option("--classes", classes, "Classifier classes (ViT)");
    app->add_option("--image", image, "Image extents HxWxC (ViT), e.g. 224x224x3");
    app->add_option("--boundary", boundary, "Patch boundary rule: exact, pad or crop");
    app->add_option("--ut-steps", ut_steps, "Universal Transformer: shared steps");
    app->add_option("--moe-experts", moe_experts, "MoE: experts per MoE layer");
    app->add_option("--moe-k", moe_k, "MoE: experts per token");
    app->add_option("--moe-every", moe_every, "MoE: every m-th block gets a MoE FFN");
    app->add_option("--arrangement", arrangement, "LM: decoder_only or encoder_decoder");
    app->add_option("--layers", layers, "LM: layers per stack");
    app->add_option("--vocab", vocab, "LM: vocabulary size");
    app->add_option("--input-length", input_length, "LM: input tokens");
    app->add_option("--output-length", output_length, "LM: output tokens");
  }

  [[nodiscard]] BuilderRef to_ref() const {
    json a = {{"family", family}};
    auto put = [&](const char* key, const auto& v) {
      if (v) a[key] = *v;
    };
    put("name", name);
    put("boundary", boundary);
    put("arrangement", arrangement);
    put("patch", patch);
    put("depth", depth);
    put("model_dim", model_dim);
    put("num_heads", heads);
    put("ffn_dim", ffn_dim);
    put("qkv_dim", qkv_dim);
    put("classes", classes);
    put("universal_steps", ut_steps);
    put("layers_per_stack", layers);
    put("vocab", vocab);
    put("input_length", input_length);
    put("output_length", output_length);
    if (image) {
      Count h = 0, w = 0, c = 0;
      char x1 = 0, x2 = 0;
      std::istringstream ss(*image);
      if (!(ss >> h >> x1 >> w >> x2 >> c) || x1 != 'x' || x2 != 'x' || !ss.eof()) {
        throw ParseError(fmt::format("--image expects HxWxC, got '{}'", *image));
      }
      a["image"] = {h, w, c};
    }
    if (moe_experts || moe_k || moe_every) {
      json m = json::object();
      if (moe_experts) m["num_experts"] = *moe_experts;
      if (moe_k) m["experts_per_token"] = *moe_k;
      if (moe_every) m["moe_every"] = *moe_every;
      a["moe"] = m;
    }
    return BuilderRef{a};
  }
};

SpecFile load_spec(const std::string& path, const BuilderFlags& flags) {
  if (!path.empty() && !flags.family.empty()) {
    throw ParseError("give either a spec file or --family builder flags, not both");
  }
  if (!path.empty()) return parse_spec_file(read_file(path));
  if (flags.family.empty()) throw ParseError("need a spec file or --family builder flags");
  SpecFile f;
  f.arch = flags.to_ref();
  return f;
}

// ---------------------------------------------------------------------------
// profile

struct ProfileArgs {
  std::string spec_path;
  BuilderFlags builder;
  std::optional<std::string> hw;
  std::optional<Count> batch;
  std::optional<std::string> optimizer;
  std::optional<double> setup_sec;
  Count steady_batches = 1;
  std::string output = "json";
};

ProfileRequest make_request(const SpecFile& f, const std::optional<std::string>& hw_flag,
                            std::optional<Count> batch_flag, const std::optional<std::string>& optimizer) {
  ProfileRequest req;
  req.batch = batch_flag.value_or(f.batch.value_or(1));
  req.optimizer = optimizer ? parse_optimizer(*optimizer) : f.optimizer.value_or(OptimizerKind::kAdam);
  if (hw_flag) req.hardware = resolve_hardware(*hw_flag);
  else if (f.hardware) req.hardware = resolve_hardware(*f.hardware);
  req.energy = f.energy;
  req.pricing = f.pricing;
  req.quality = f.quality;
  return req;
}

int cmd_profile(const ProfileArgs& a, std::ostream& out, std::ostream& err) {
  const SpecFile f = load_spec(a.spec_path, a.builder);
  const ArchSpec spec = resolve_arch(f);
  ProfileRequest req = make_request(f, a.hw, a.batch, a.optimizer);
  if (a.setup_sec) req.bubble = BubbleModel{*a.setup_sec, a.steady_batches};
  if (!req.hardware) err << "warning: no hardware model given; latency and throughput omitted\n";

  const CostProfile p = profile(spec, req);
  if (a.output == "json") {
    out << to_json(p).dump(2) << "\n";
    return kOk;
  }
  const auto ind = p.indicators();
  if (a.output == "csv") {
    std::vector<std::string> header{"name", "batch"}, row{p.name, std::to_string(p.batch)};
    for (const auto& [k, v] : ind) {
      header.push_back(k);
      row.push_back(format_sig6(v));
    }
    out << render_csv({header, row});
    return kOk;
  }
  std::vector<std::vector<std::string>> rows{{"indicator", "value", "unit"}};
  const std::map<std::string, std::string> units{
      {"params", "count"}, {"flops", "multiply-adds + elementwise ops"}, {"activation", "elements"},
      {"mac", "bytes"}, {"memory", "bytes (training peak)"}, {"latency", "s"},
      {"throughput", "examples/s"}, {"carbon", "kg CO2e"}, {"cost", "currency"}};
  for (const auto& [k, v] : ind) rows.push_back({k, format_sig6(v), units.at(k)});
  rows.push_back({"gflops", format_sig6(p.flops.gflops()), "1e9 flops"});
  rows.push_back({"inference_memory", format_sig6(static_cast<double>(p.inference.peak_inference_bytes)), "bytes"});
  out << p.name << " (batch " << p.batch << ")\n" << render_table(rows);
  return kOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::vector<std::string> inputs;
  std::string indicators;
  std::optional<std::string> hw;
  std::optional<Count> batch;
  std::string output = "table";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<ModelRecord> load_models(const CompareArgs& a) {
  // Each input yields one or more records; specs are profiled concurrently
  // and merged back in input order.
  std::vector<std::future<std::vector<ModelRecord>>> jobs;
  for (const auto& path : a.inputs) {
    std::string text = read_file(path);
    if (ends_with(path, ".csv")) {
      jobs.push_back(std::async(std::launch::deferred, [text = std::move(text)] {
        return parse_records_csv(text).records;
      }));
      continue;
    }
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(fmt::format("{}: malformed JSON at byte {}: {}", path, e.byte, e.what()), e.byte);
    }
    if (j.is_object() && j.contains("schema_version")) {
      SpecFile f = parse_spec_file(text);
      jobs.push_back(std::async(std::launch::async, [f = std::move(f), &a] {
        const ArchSpec spec = resolve_arch(f);
        return std::vector<ModelRecord>{profile(spec, make_request(f, a.hw, a.batch, std::nullopt)).to_record()};
      }));
    } else {
      jobs.push_back(std::async(std::launch::deferred, [j = std::move(j)] {
        return std::vector<ModelRecord>{record_from_profile_json(j)};
      }));
    }
  }
  std::vector<ModelRecord> records;
  for (auto& job : jobs) {
    auto part = job.get();
    records.insert(records.end(), part.begin(), part.end());
  }
  return records;
}

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream&) {
  std::vector<ModelRecord> records = load_models(a);
  if (records.size() < 2) {
    throw InsufficientDataError(fmt::format("compare needs >= 2 models, have {}", records.size()));
  }
  std::vector<std::string> keys = split_list(a.indicators);
  if (keys.empty()) {
    std::set<std::string> all;
    for (const auto& r : records) for (const auto& [k, v] : r.indicators) all.insert(k);
    keys.assign(all.begin(), all.end());
  }
  for (auto& r : records) {
    std::map<std::string, double> kept;
    for (const auto& k : keys) {
      if (auto it = r.indicators.find(k); it != r.indicators.end()) kept.insert(*it);
    }
    r.indicators = std::move(kept);
  }

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto cx = oriented_cost(records[x], keys.front());
    const auto cy = oriented_cost(records[y], keys.front());
    if (cx && cy) return *cx < *cy;
    return cx.has_value() && !cy.has_value();
  });

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"name", "quality"};
  header.insert(header.end(), keys.begin(), keys.end());
  rows.push_back(header);
  for (std::size_t i : order) {
    std::vector<std::string> row{records[i].name, format_sig6(records[i].quality)};
    for (const auto& k : keys) {
      const auto it = records[i].indicators.find(k);
      row.push_back(it == records[i].indicators.end() ? "" : format_sig6(it->second));
    }
    rows.push_back(std::move(row));
  }

  const MisnomerReport report = misnomer_report(records);
  if (report.pairs.empty()) {
    throw InsufficientDataError("no indicator pair is carried by >= 2 models");
  }

  if (a.output == "csv") {
    out << render_csv(rows);
    return kOk;
  }
  if (a.output == "json") {
    json table = json::array();
    for (std::size_t i : order) {
      json row = {{"name", records[i].name}, {"quality", records[i].quality}};
      json ind = json::object();
      for (const auto& [k, v] : records[i].indicators) ind[k] = v;
      row["indicators"] = ind;
      table.push_back(row);
    }
    json pairs = json::array();
    for (const auto& p : report.pairs) {
      json inv = json::array();
      for (const auto& ip : p.inverted_pairs) inv.push_back({ip.model_a, ip.model_b});
      pairs.push_back({{"indicators", {p.indicator_a, p.indicator_b}},
                       {"kendall_tau_b", p.tau},
                       {"defined", p.defined},
                       {"n", p.counts.n},
                       {"concordant", p.counts.concordant},
                       {"discordant", p.counts.discordant},
                       {"inverted_pairs", inv}});
    }
    json instability = json::array();
    for (const auto& s : report.pareto_instability) {
      instability.push_back({{"model", s.model}, {"frontier_under", s.frontier_under},
                             {"dominated_under", s.dominated_under}});
    }
    json coverage = json::array();
    for (const auto& c : report.coverage_warnings) coverage.push_back({{"model", c.model}, {"indicator", c.indicator}});
    out << json{{"method", report.method},
                {"models", table},
                {"pairs", pairs},
                {"pareto_instability", instability},
                {"coverage_warnings", coverage}}
               .dump(2)
        << "\n";
    return kOk;
  }

  out << render_table(rows) << "\n";
  out << "rank agreement (" << report.method << ")\n";
  for (const auto& p : report.pairs) {
    out << fmt::format("  {} vs {}: tau={}{} over {} models, {} inverted pair(s)\n", p.indicator_a,
                       p.indicator_b, format_sig6(p.tau), p.defined ? "" : " (all tied)", p.counts.n,
                       p.inverted_pairs.size());
    for (const auto& ip : p.inverted_pairs) {
      out << fmt::format("    {} / {}: ordering reverses between {} and {}\n", ip.model_a, ip.model_b,
                         ip.indicator_1, ip.indicator_2);
    }
  }
  for (const auto& [x, y] : report.skipped_pairs) {
    out << fmt::format("  {} vs {}: skipped, fewer than 2 models carry both\n", x, y);
  }
  out << "pareto instability\n";
  if (report.pareto_instability.empty()) out << "  none\n";
  for (const auto& s : report.pareto_instability) {
    out << fmt::format("  {}: frontier under {}; dominated under {}\n", s.model,
                       fmt::join(s.frontier_under, ", "), fmt::join(s.dominated_under, ", "));
  }
  if (!report.coverage_warnings.empty()) {
    out << "coverage warnings\n";
    for (const auto& c : report.coverage_warnings) {
      out << fmt::format("  {} lacks {}\n", c.model, c.indicator);
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// pareto

struct ParetoArgs {
  std::string records;
  std::string quality = "quality";
  std::string cost;
  std::optional<std::string> svg;
  std::string output = "table";
};

void require_column(const RecordsTable& t, const std::string& key) {
  if (key == "quality") return;
  if (std::find(t.indicator_columns.begin(), t.indicator_columns.end(), key) == t.indicator_columns.end()) {
    throw CoverageError(fmt::format("column '{}' not found in records header", key), {key});
  }
}

int cmd_pareto(const ParetoArgs& a, std::ostream& out, std::ostream&) {
  const RecordsTable table = parse_records_csv(read_file(a.records));
  require_column(table, a.quality);
  require_column(table, a.cost);
  const auto frontier = pareto_indices(table.records, a.quality, a.cost);
  if (a.svg) write_file(*a.svg, render_pareto_svg(table.records, frontier, a.quality, a.cost));

  auto value = [&](const ModelRecord& r, const std::string& k) {
    return k == "quality" ? r.quality : r.indicators.at(k);
  };
  if (a.output == "json") {
    json rows = json::array();
    for (std::size_t i : frontier) {
      const auto& r = table.records[i];
      rows.push_back({{"name", r.name}, {a.quality, value(r, a.quality)}, {a.cost, value(r, a.cost)}});
    }
    out << json{{"quality", a.quality}, {"cost", a.cost}, {"records", table.records.size()}, {"frontier", rows}}
               .dump(2)
        << "\n";
    return kOk;
  }
  std::vector<std::vector<std::string>> rows{{"name", a.quality, a.cost}};
  for (std::size_t i : frontier) {
    const auto& r = table.records[i];
    rows.push_back({r.name, format_sig6(value(r, a.quality)), format_sig6(value(r, a.cost))});
  }
  if (a.output == "csv") {
    out << render_csv(rows);
  } else {
    out << render_table(rows);
    out << fmt::format("frontier: {} of {} records\n", frontier.size(), table.records.size());
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// matched

struct MatchedArgs {
  std::string records;
  std::string indicator;
  double tolerance = 0.1;
};

int cmd_matched(const MatchedArgs& a, std::ostream& out, std::ostream&) {
  const RecordsTable table = parse_records_csv(read_file(a.records));
  require_column(table, a.indicator);
  const auto groups = matched_sets(table.records, a.indicator, a.tolerance);
  out << fmt::format("{}-matched groups (within {} of group minimum): {}\n", a.indicator,
                     format_sig6(a.tolerance), groups.size());
  for (const auto& g : groups) {
    out << fmt::format("  [{} .. {}] {}\n", format_sig6(g.min_value), format_sig6(g.max_value),
                       fmt::join(g.names, ", "));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// validate / spec / presets

int cmd_validate(const std::string& path, const BuilderFlags& flags, std::ostream& out) {
  const SpecFile f = load_spec(path, flags);
  const ArchSpec spec = resolve_arch(f);
  const ValidationResult v = validate(spec);
  json violations = json::array();
  for (const auto& x : v.violations) violations.push_back({{"path", x.path}, {"message", x.message}});
  out << json{{"name", spec.name}, {"ok", v.ok()}, {"violations", violations}}.dump(2) << "\n";
  return v.ok() ? kOk : kInputError;
}

int cmd_spec(const std::string& path, const BuilderFlags& flags, std::ostream& out) {
  SpecFile f = load_spec(path, flags);
  f.arch = resolve_arch(f);
  out << to_json(f).dump(2) << "\n";
  return kOk;
}

int cmd_presets(std::ostream& out) {
  json arr = json::array();
  for (const auto& hw : hardware_presets()) arr.push_back(to_json(hw));
  out << arr.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"effcost: static cost indicators and cross-indicator ranking analysis for neural architectures"};
  app.name("effcost");
  app.require_subcommand(1);

  ProfileArgs profile_args;
  auto* profile_cmd = app.add_subcommand("profile", "Compute every cost indicator for one architecture");
  profile_cmd->add_option("spec", profile_args.spec_path, "Spec JSON file");
  profile_args.builder.attach(profile_cmd);
  profile_cmd->add_option("--hw", profile_args.hw, "Hardware preset name or JSON file");
  profile_cmd->add_option("--batch", profile_args.batch, "Batch size");
  profile_cmd->add_option("--optimizer", profile_args.optimizer, "sgd, momentum, adam or sam");
  profile_cmd->add_option("--bubble-setup", profile_args.setup_sec, "Pipeline idle seconds per run");
  profile_cmd->add_option("--bubble-batches", profile_args.steady_batches, "Batches per pipeline run");
  profile_cmd->add_option("--output", profile_args.output, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  CompareArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "Rank models under several indicators and report disagreements");
  compare_cmd->add_option("inputs", compare_args.inputs, "Spec JSON, profile JSON or records CSV files")->required();
  compare_cmd->add_option("--indicators", compare_args.indicators, "Comma-separated indicator ids");
  compare_cmd->add_option("--hw", compare_args.hw, "Hardware for spec inputs");
  compare_cmd->add_option("--batch", compare_args.batch, "Batch for spec inputs");
  compare_cmd->add_option("--output", compare_args.output, "table, json or csv")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  ParetoArgs pareto_args;
  auto* pareto_cmd = app.add_subcommand("pareto", "Quality-vs-cost Pareto frontier of a records CSV");
  pareto_cmd->add_option("records", pareto_args.records, "Records CSV")->required();
  pareto_cmd->add_option("--quality", pareto_args.quality, "Quality column (higher is better)");
  pareto_cmd->add_option("--cost", pareto_args.cost, "Cost column")->required();
  pareto_cmd->add_option("--svg", pareto_args.svg, "Write an SVG scatter with the frontier");
  pareto_cmd->add_option("--output", pareto_args.output, "table, json or csv")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  MatchedArgs matched_args;
  auto* matched_cmd = app.add_subcommand("matched", "Groups of models matched on one indicator");
  matched_cmd->add_option("records", matched_args.records, "Records CSV")->required();
  matched_cmd->add_option("--indicator", matched_args.indicator, "Indicator column")->required();
  matched_cmd->add_option("--tol", matched_args.tolerance, "Relative tolerance in (0, 1)");

  std::string validate_path;
  BuilderFlags validate_flags;
  auto* validate_cmd = app.add_subcommand("validate", "Check a spec and list every violation");
  validate_cmd->add_option("spec", validate_path, "Spec JSON file");
  validate_flags.attach(validate_cmd);

  std::string spec_path;
  BuilderFlags spec_flags;
  auto* spec_cmd = app.add_subcommand("spec", "Emit the canonical spec file for a builder or spec");
  spec_cmd->add_option("spec", spec_path, "Spec JSON file");
  spec_flags.attach(spec_cmd);

  auto* presets_cmd = app.add_subcommand("presets", "List built-in hardware presets");

  std::vector<std::string> argv_store{"effcost"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return kInputError;
  }

  try {
    if (profile_cmd->parsed()) return cmd_profile(profile_args, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare_args, out, err);
    if (pareto_cmd->parsed()) return cmd_pareto(pareto_args, out, err);
    if (matched_cmd->parsed()) return cmd_matched(matched_args, out, err);
    if (validate_cmd->parsed()) return cmd_validate(validate_path, validate_flags, out);
    if (spec_cmd->parsed()) return cmd_spec(spec_path, spec_flags, out);
    if (presets_cmd->parsed()) return cmd_presets(out);
  } catch (const ParseError& e) {
    std::optional<std::size_t> byte;
    if (e.offset() != ParseError::npos) byte = e.offset();
    emit_error(err, "parse_error", e.what(), byte);
    return kInputError;
  } catch (const CoverageError& e) {
    emit_error(err, "coverage_error", e.what(), std::nullopt, e.offenders());
    return kInputError;
  } catch (const InsufficientDataError& e) {
    emit_error(err, "insufficient_data", e.what());
    return kInsufficient;
  } catch (const SpecError& e) {
    emit_error(err, "spec_error", e.what());
    return kInputError;
  } catch (const OverflowError& e) {
    emit_error(err, "overflow", e.what());
    return kInputError;
  } catch (const json::exception& e) {
    emit_error(err, "parse_error", e.what());
    return kInputError;
  } catch (const std::invalid_argument& e) {
    emit_error(err, "invalid_argument", e.what());
    return kInputError;
  }
  return kInputError;
}

}  // namespace effcost::cli
