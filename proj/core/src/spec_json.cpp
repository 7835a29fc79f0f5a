#include "effcost/spec_json.hpp"

#include <fmt/format.h>

#include <cmath>
#include <set>

#include "effcost/errors.hpp"

namespace effcost {

using nlohmann::json;

std::string_view to_string(PatchBoundary b) {
  switch (b) {
    case PatchBoundary::kExact: return "exact";
    case PatchBoundary::kPad: return "pad";
    case PatchBoundary::kCrop: return "crop";
  }
  return "exact";
}

PatchBoundary parse_boundary(std::string_view s) {
  if (s == "exact") return PatchBoundary::kExact;
  if (s == "pad") return PatchBoundary::kPad;
  if (s == "crop") return PatchBoundary::kCrop;
  throw ParseError(fmt::format("unknown patch boundary '{}' (expected exact, pad or crop)", s));
}

namespace {

// Strict reader over one JSON object: typed accessors, and finish()
// rejects keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(std::string_view key, std::string_view what) const {
    throw ParseError(fmt::format("{}: {}", at(key), what));
  }

  [[nodiscard]] std::string at(std::string_view key) const {
    if (key.empty()) return path_.empty() ? "/" : path_;
    return fmt::format("{}/{}", path_, key);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  const json& required(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) fail(key, "missing required field");
    return *v;
  }

  Count count(const std::string& key, std::optional<Count> fallback = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (fallback) return *fallback;
      fail(key, "missing required field");
    }
    if (v->is_number_unsigned()) return v->get<Count>();
    if (v->is_number_integer()) fail(key, "must be >= 0");
    fail(key, "expected a non-negative integer");
  }

  std::optional<Count> opt_count(const std::string& key) {
    if (find(key) == nullptr) return std::nullopt;
    return count(key);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (fallback) return *fallback;
      fail(key, "missing required field");
    }
    if (!v->is_number()) fail(key, "expected a number");
    return v->get<double>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(key);
    if (v == nullptr) {
      if (fallback) return *fallback;
      fail(key, "missing required field");
    }
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) fail(key, "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json layer_to_json(const LayerSpec& layer);

json list_to_json(const LayerList& layers) {
  json arr = json::array();
  for (const auto& l : layers) arr.push_back(layer_to_json(l));
  return arr;
}

json layer_to_json(const LayerSpec& layer) {
  json j = std::visit(
      [](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PatchEmbed>) {
          return {{"patch", l.patch}, {"in_channels", l.in_channels}, {"embed_dim", l.embed_dim},
                  {"add_cls_token", l.add_cls_token}, {"positional", l.positional}, {"bias", l.bias},
                  {"boundary", to_string(l.boundary)}};
        } else if constexpr (std::is_same_v<T, Attention>) {
          return {{"model_dim", l.model_dim}, {"qkv_dim", l.qkv_dim}, {"num_heads", l.num_heads},
                  {"is_causal", l.is_causal}, {"cross_attention", l.cross_attention}};
        } else if constexpr (std::is_same_v<T, FeedForward>) {
          return {{"model_dim", l.model_dim}, {"hidden_dim", l.hidden_dim},
                  {"weight_sparsity", l.weight_sparsity}};
        } else if constexpr (std::is_same_v<T, LayerNorm>) {
          return {{"model_dim", l.model_dim}};
        } else if constexpr (std::is_same_v<T, Dense>) {
          return {{"in_dim", l.in_dim}, {"out_dim", l.out_dim}, {"bias", l.bias},
                  {"weight_sparsity", l.weight_sparsity}};
        } else if constexpr (std::is_same_v<T, TokenEmbedding>) {
          return {{"vocab", l.vocab}, {"embed_dim", l.embed_dim}, {"tied_output", l.tied_output},
                  {"target_stream", l.target_stream}};
        } else if constexpr (std::is_same_v<T, Unembed>) {
          return {{"model_dim", l.model_dim}, {"vocab", l.vocab}};
        } else if constexpr (std::is_same_v<T, ClassifierHead>) {
          return {{"model_dim", l.model_dim}, {"classes", l.classes}};
        } else if constexpr (std::is_same_v<T, MoE>) {
          return {{"expert", layer_to_json(*l.expert)}, {"num_experts", l.num_experts},
                  {"experts_per_token", l.experts_per_token}, {"router_dim", l.router_dim}};
        } else if constexpr (std::is_same_v<T, Repeat>) {
          return {{"body", list_to_json(l.body)}, {"times", l.times}, {"share_params", l.share_params}};
        } else {
          json branches = json::array();
          for (const auto& b : l.branches) branches.push_back(list_to_json(b));
          return {{"branches", branches}};
        }
      },
      layer.node);
  j["type"] = layer_kind(layer);
  return j;
}

LayerSpec layer_from_json(const json& j, const std::string& path, std::size_t depth);

LayerList list_from_json(const json& j, const std::string& path, std::size_t depth) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of layers");
  LayerList out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(layer_from_json(j[i], fmt::format("{}/{}", path, i), depth));
  }
  return out;
}

LayerSpec layer_from_json(const json& j, const std::string& path, std::size_t depth) {
  if (depth > kMaxNestingDepth) {
    throw ParseError(fmt::format("{}: nesting deeper than {} levels", path, kMaxNestingDepth));
  }
  Reader r(j, path);
  const std::string type = r.string("type");
  LayerSpec out;
  if (type == "patch_embed") {
    PatchEmbed l;
    l.patch = r.count("patch");
    l.in_channels = r.count("in_channels", 3);
    l.embed_dim = r.count("embed_dim");
    l.add_cls_token = r.boolean("add_cls_token", true);
    l.positional = r.boolean("positional", true);
    l.bias = r.boolean("bias", true);
    try {
      l.boundary = parse_boundary(r.string("boundary", "exact"));
    } catch (const ParseError& e) {
      r.fail("boundary", e.what());
    }
    out = l;
  } else if (type == "attention") {
    Attention l;
    l.model_dim = r.count("model_dim");
    l.qkv_dim = r.count("qkv_dim", l.model_dim);
    l.num_heads = r.count("num_heads");
    l.is_causal = r.boolean("is_causal", false);
    l.cross_attention = r.boolean("cross_attention", false);
    out = l;
  } else if (type == "feed_forward") {
    FeedForward l;
    l.model_dim = r.count("model_dim");
    l.hidden_dim = r.count("hidden_dim");
    l.weight_sparsity = r.number("weight_sparsity", 0.0);
    out = l;
  } else if (type == "layer_norm") {
    out = LayerNorm{r.count("model_dim")};
  } else if (type == "dense") {
    Dense l;
    l.in_dim = r.count("in_dim");
    l.out_dim = r.count("out_dim");
    l.bias = r.boolean("bias", true);
    l.weight_sparsity = r.number("weight_sparsity", 0.0);
    out = l;
  } else if (type == "token_embedding") {
    TokenEmbedding l;
    l.vocab = r.count("vocab");
    l.embed_dim = r.count("embed_dim");
    l.tied_output = r.boolean("tied_output", true);
    l.target_stream = r.boolean("target_stream", false);
    out = l;
  } else if (type == "unembed") {
    out = Unembed{r.count("model_dim"), r.count("vocab")};
  } else if (type == "classifier_head") {
    out = ClassifierHead{r.count("model_dim"), r.count("classes", 1000)};
  } else if (type == "moe") {
    MoE l;
    l.expert = layer_from_json(r.required("expert"), path + "/expert", depth + 1);
    l.num_experts = r.count("num_experts");
    l.experts_per_token = r.count("experts_per_token", 1);
    l.router_dim = r.count("router_dim");
    out = std::move(l);
  } else if (type == "repeat") {
    Repeat l;
    l.body = list_from_json(r.required("body"), path + "/body", depth + 1);
    l.times = r.count("times");
    l.share_params = r.boolean("share_params", false);
    out = std::move(l);
  } else if (type == "parallel") {
    Parallel l;
    const json& branches = r.required("branches");
    if (!branches.is_array()) r.fail("branches", "expected an array of layer arrays");
    for (std::size_t b = 0; b < branches.size(); ++b) {
      l.branches.push_back(list_from_json(branches[b], fmt::format("{}/branches/{}", path, b), depth + 1));
    }
    out = std::move(l);
  } else {
    r.fail("type", fmt::format("unknown layer type '{}'", type));
  }
  r.finish();
  return out;
}

json input_to_json(const InputSignature& in) {
  if (const auto* img = std::get_if<ImageInput>(&in)) {
    return {{"type", "image"}, {"height", img->height}, {"width", img->width}, {"channels", img->channels}};
  }
  const auto& t = std::get<TokenInput>(in);
  return {{"type", "tokens"}, {"length", t.length}, {"vocab", t.vocab}, {"target_length", t.target_length}};
}

InputSignature input_from_json(const json& j, const std::string& path) {
  Reader r(j, path);
  const std::string type = r.string("type");
  InputSignature out;
  if (type == "image") {
    out = ImageInput{r.count("height"), r.count("width"), r.count("channels", 3)};
  } else if (type == "tokens") {
    out = TokenInput{r.count("length"), r.count("vocab"), r.count("target_length", 0)};
  } else {
    r.fail("type", fmt::format("unknown input type '{}' (expected image or tokens)", type));
  }
  r.finish();
  return out;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed JSON at byte {}: {}", e.byte, e.what()), e.byte);
  }
}

}  // namespace

json to_json(const ArchSpec& spec) {
  json meta = json::object();
  for (const auto& [k, v] : spec.metadata) meta[k] = v;
  return {{"name", spec.name},
          {"element_bytes", spec.element_bytes},
          {"input", input_to_json(spec.input)},
          {"layers", list_to_json(spec.layers)},
          {"metadata", meta}};
}

ArchSpec arch_from_json(const json& j) {
  Reader r(j, "/arch");
  ArchSpec spec;
  spec.name = r.string("name", "");
  spec.element_bytes = r.count("element_bytes", 4);
  spec.input = input_from_json(r.required("input"), "/arch/input");
  spec.layers = list_from_json(r.required("layers"), "/arch/layers", 0);
  if (const json* meta = r.find("metadata")) {
    if (!meta->is_object()) r.fail("metadata", "expected an object of strings");
    for (const auto& [k, v] : meta->items()) {
      if (!v.is_string()) r.fail("metadata/" + k, "expected a string");
      spec.metadata[k] = v.get<std::string>();
    }
  }
  r.finish();
  return spec;
}

std::string serialize_arch(const ArchSpec& spec) { return to_json(spec).dump(2) + "\n"; }

ArchSpec parse_arch(std::string_view text) { return arch_from_json(parse_text(text)); }

json to_json(const HardwareModel& hw) {
  json j = {{"name", hw.name},
            {"peak_flops_per_sec", hw.peak_flops_per_sec},
            {"mem_bandwidth_bytes_per_sec", hw.mem_bandwidth_bytes_per_sec},
            {"per_op_overhead_sec", hw.per_op_overhead_sec},
            {"num_devices", hw.num_devices}};
  j["length_pad_multiple"] = hw.length_pad_multiple ? json(*hw.length_pad_multiple) : json(nullptr);
  return j;
}

HardwareModel hardware_from_json(const json& j) {
  Reader r(j, "/hardware");
  HardwareModel hw;
  hw.name = r.string("name", "custom");
  hw.peak_flops_per_sec = r.number("peak_flops_per_sec");
  hw.mem_bandwidth_bytes_per_sec = r.number("mem_bandwidth_bytes_per_sec");
  hw.per_op_overhead_sec = r.number("per_op_overhead_sec", 0.0);
  hw.num_devices = r.count("num_devices", 1);
  hw.length_pad_multiple = r.opt_count("length_pad_multiple");
  r.finish();
  try {
    hw.check();
  } catch (const std::invalid_argument& e) {
    throw ParseError(fmt::format("/hardware: {}", e.what()));
  }
  return hw;
}

json to_json(const EnergyProfile& e) {
  return {{"ee_train_kwh", e.ee_train_kwh},
          {"ee_inference_kwh", e.ee_inference_kwh},
          {"queries", e.queries},
          {"co2e_kg_per_kwh", e.co2e_kg_per_kwh}};
}

EnergyProfile energy_from_json(const json& j) {
  Reader r(j, "/energy");
  EnergyProfile e;
  e.ee_train_kwh = r.number("ee_train_kwh", 0.0);
  e.ee_inference_kwh = r.number("ee_inference_kwh", 0.0);
  e.queries = r.number("queries", 0.0);
  e.co2e_kg_per_kwh = r.number("co2e_kg_per_kwh");
  r.finish();
  return e;
}

json to_json(const PricingProfile& p) {
  return {{"train_hours", p.train_hours},
          {"num_chips", p.num_chips},
          {"price_per_chip_hour", p.price_per_chip_hour}};
}

PricingProfile pricing_from_json(const json& j) {
  Reader r(j, "/pricing");
  PricingProfile p;
  p.train_hours = r.number("train_hours");
  p.num_chips = r.number("num_chips");
  p.price_per_chip_hour = r.number("price_per_chip_hour");
  r.finish();
  return p;
}

namespace {

MoeConfig moe_from_json(const json& j) {
  Reader r(j, "/builder/moe");
  MoeConfig m;
  m.num_experts = r.count("num_experts");
  m.experts_per_token = r.count("experts_per_token", 1);
  m.moe_every = r.count("moe_every", 1);
  r.finish();
  return m;
}

}  // namespace

ArchSpec build_from_ref(const BuilderRef& ref) {
  Reader r(ref.args, "/builder");
  const std::string family = r.string("family");
  std::optional<Count> steps = r.opt_count("universal_steps");
  std::optional<MoeConfig> moe;
  if (const json* m = r.find("moe")) moe = moe_from_json(*m);
  if (steps && moe) r.fail("", "universal_steps and moe are mutually exclusive");

  ArchSpec spec;
  if (family == "vit") {
    VitConfig cfg;
    cfg.name = r.string("name", "");
    cfg.patch = r.count("patch", cfg.patch);
    cfg.depth = r.count("depth", cfg.depth);
    cfg.model_dim = r.count("model_dim", cfg.model_dim);
    cfg.num_heads = r.count("num_heads", cfg.num_heads);
    cfg.ffn_dim = r.count("ffn_dim", cfg.ffn_dim);
    cfg.qkv_dim = r.count("qkv_dim", 0);
    cfg.classes = r.count("classes", cfg.classes);
    if (const json* img = r.find("image")) {
      if (!img->is_array() || img->size() != 3 ||
          !std::all_of(img->begin(), img->end(), [](const json& v) { return v.is_number_unsigned(); })) {
        r.fail("image", "expected [height, width, channels]");
      }
      cfg.image = ImageInput{(*img)[0].get<Count>(), (*img)[1].get<Count>(), (*img)[2].get<Count>()};
    }
    try {
      cfg.boundary = parse_boundary(r.string("boundary", "exact"));
    } catch (const ParseError& e) {
      r.fail("boundary", e.what());
    }
    r.finish();
    if (steps) spec = build_universal_transformer(cfg, *steps);
    else if (moe) spec = build_moe_transformer(cfg, *moe);
    else spec = build_vit(cfg);
  } else if (family == "lm") {
    LmConfig cfg;
    cfg.name = r.string("name", "");
    const std::string arrangement = r.string("arrangement", "decoder_only");
    if (arrangement == "decoder_only") cfg.arrangement = LmArrangement::kDecoderOnly;
    else if (arrangement == "encoder_decoder") cfg.arrangement = LmArrangement::kEncoderDecoder;
    else r.fail("arrangement", "expected decoder_only or encoder_decoder");
    cfg.layers_per_stack = r.count("layers_per_stack", cfg.layers_per_stack);
    cfg.model_dim = r.count("model_dim", cfg.model_dim);
    cfg.ffn_dim = r.count("ffn_dim", cfg.ffn_dim);
    cfg.num_heads = r.count("num_heads", cfg.num_heads);
    cfg.qkv_dim = r.count("qkv_dim", 0);
    cfg.vocab = r.count("vocab", cfg.vocab);
    cfg.input_length = r.count("input_length", cfg.input_length);
    cfg.output_length = r.count("output_length", cfg.output_length);
    r.finish();
    if (steps) spec = build_universal_transformer(cfg, *steps);
    else if (moe) spec = build_moe_transformer(cfg, *moe);
    else spec = build_lm(cfg);
  } else {
    r.fail("family", fmt::format("unknown builder family '{}' (expected vit or lm)", family));
  }
  return spec;
}

SpecFile parse_spec_file(std::string_view text) {
  const json j = parse_text(text);
  Reader r(j, "");
  SpecFile f;
  f.schema_version = static_cast<int>(r.count("schema_version"));
  if (f.schema_version != kSchemaVersion) {
    r.fail("schema_version", fmt::format("unsupported schema version {} (this build reads {})",
                                         f.schema_version, kSchemaVersion));
  }
  const json* arch = r.find("arch");
  const json* builder = r.find("builder");
  if ((arch == nullptr) == (builder == nullptr)) {
    r.fail("", "exactly one of 'arch' or 'builder' is required");
  }
  if (arch != nullptr) {
    f.arch = arch_from_json(*arch);
  } else {
    if (!builder->is_object()) r.fail("builder", "expected an object");
    f.arch = BuilderRef{*builder};
  }
  if (const json* hw = r.find("hardware")) {
    if (hw->is_string()) f.hardware = hw->get<std::string>();
    else f.hardware = hardware_from_json(*hw);
  }
  f.batch = r.opt_count("batch");
  if (r.find("quality") != nullptr) f.quality = r.number("quality");
  if (r.find("optimizer") != nullptr) {
    try {
      f.optimizer = parse_optimizer(r.string("optimizer"));
    } catch (const std::invalid_argument& e) {
      r.fail("optimizer", e.what());
    }
  }
  if (const json* e = r.find("energy")) f.energy = energy_from_json(*e);
  if (const json* p = r.find("pricing")) f.pricing = pricing_from_json(*p);
  r.finish();
  return f;
}

json to_json(const SpecFile& f) {
  json j = {{"schema_version", f.schema_version}};
  if (const auto* a = std::get_if<ArchSpec>(&f.arch)) j["arch"] = to_json(*a);
  else j["builder"] = std::get<BuilderRef>(f.arch).args;
  if (f.hardware) {
    if (const auto* name = std::get_if<std::string>(&*f.hardware)) j["hardware"] = *name;
    else j["hardware"] = to_json(std::get<HardwareModel>(*f.hardware));
  }
  if (f.batch) j["batch"] = *f.batch;
  if (f.quality) j["quality"] = *f.quality;
  if (f.optimizer) j["optimizer"] = to_string(*f.optimizer);
  if (f.energy) j["energy"] = to_json(*f.energy);
  if (f.pricing) j["pricing"] = to_json(*f.pricing);
  return j;
}

ArchSpec resolve_arch(const SpecFile& file) {
  if (const auto* a = std::get_if<ArchSpec>(&file.arch)) return *a;
  return build_from_ref(std::get<BuilderRef>(file.arch));
}

}  // namespace effcost
