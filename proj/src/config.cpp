#include "chainwave/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "chainwave/error.hpp"

namespace chainwave {

namespace {

int line_of(const YAML::Node& n) {
  if (!n) return 0;
  return n.Mark().line >= 0 ? n.Mark().line + 1 : 0;
}

[[noreturn]] void invalid(const std::string& field, const YAML::Node& at, const std::string& msg) {
  throw ConfigError(Errc::ValidationError, field, line_of(at), field + ": " + msg);
}

// One mapping section. Every key must be consumed by get(); finish() rejects leftovers.
class Section {
 public:
  Section(const YAML::Node& node, std::string prefix) : node_(node), prefix_(std::move(prefix)) {
    if (node_ && node_.IsNull()) node_ = YAML::Node(YAML::NodeType::Undefined);
    if (node_ && !node_.IsMap()) invalid(prefix_.empty() ? "<root>" : prefix_, node_, "expected a mapping");
  }

  std::string field(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  YAML::Node child(const std::string& key) {
    known_.insert(key);
    if (!node_) return YAML::Node(YAML::NodeType::Undefined);
    const YAML::Node& n = node_;
    return n[key];
  }

  template <typename T>
  bool get(const std::string& key, T& out) {
    const YAML::Node n = child(key);
    if (!n) return false;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      invalid(field(key), n, "wrong type");
    }
    return true;
  }

  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!known_.contains(key)) invalid(field(key), kv.first, "unknown key");
    }
  }

  const YAML::Node& node() const { return node_; }

 private:
  YAML::Node node_;
  std::string prefix_;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& field, const YAML::Node& at, const std::string& msg) {
  if (!ok) invalid(field, at, msg);
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.geometry = validate_chain(std::vector<double>{1.0, 1.0});
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(Errc::ParseError, "", e.mark.line + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(Errc::ParseError, "", 1, "empty configuration");

  RunConfig cfg = default_config();
  Section top(root, "");

  {
    const YAML::Node gnode = top.child("geometry");
    if (!gnode) invalid("lengths", root, "geometry section is required");
    Section g(gnode, "");
    std::vector<double> lengths;
    const YAML::Node lnode = g.child("lengths");
    if (!lnode) invalid("lengths", gnode, "required");
    try {
      lengths = lnode.as<std::vector<double>>();
    } catch (const YAML::Exception&) {
      invalid("lengths", lnode, "expected a list of numbers");
    }
    try {
      cfg.geometry = validate_chain(lengths);
    } catch (const ChainError& e) {
      invalid("lengths", lnode, e.what());
    }
    int n_pairs = 0;
    if (g.get("n_pairs", n_pairs)) {
      require(n_pairs == cfg.geometry.n_pairs(), "n_pairs", g.child("n_pairs"), "does not match the length count");
    }
    g.finish();
  }

  {
    Section s(top.child("spectrum"), "spectrum");
    auto& c = cfg.spectrum;
    s.get("z_min", c.z_min);
    s.get("z_max", c.z_max);
    s.get("scan_points", c.scan_points);
    s.get("tol", c.tol);
    s.get("k_max", c.k_max);
    s.get("pole_threshold", c.pole_threshold);
    require(c.z_min > 0.0 && c.z_max > c.z_min, "spectrum.z_range", s.node(), "need 0 < z_min < z_max");
    require(c.scan_points >= 2, s.field("scan_points"), s.node(), "must be at least 2");
    require(c.tol > 0.0, s.field("tol"), s.node(), "must be positive");
    require(c.k_max >= 1, s.field("k_max"), s.node(), "must be at least 1");
    require(c.pole_threshold >= 0.0, s.field("pole_threshold"), s.node(), "must be non-negative");
    s.finish();
  }

  {
    Section s(top.child("modes"), "modes");
    s.get("count", cfg.modes.count);
    s.get("samples_per_edge", cfg.modes.samples_per_edge);
    require(cfg.modes.count >= 1, s.field("count"), s.node(), "must be at least 1");
    require(cfg.modes.samples_per_edge >= 2, s.field("samples_per_edge"), s.node(), "must be at least 2");
    s.finish();
  }

  {
    Section s(top.child("simulate"), "simulate");
    auto& c = cfg.simulate;
    std::string variant, sampling, initial;
    if (s.get("variant", variant)) {
      try {
        c.variant = parse_variant(variant);
      } catch (const Error& e) {
        invalid(s.field("variant"), s.child("variant"), e.what());
      }
    }
    s.get("h", c.h);
    s.get("dt", c.dt);
    s.get("t_end", c.t_end);
    s.get("sample_every", c.sample_every);
    if (s.get("sampling", sampling)) {
      require(sampling == "every" || sampling == "geometric", s.field("sampling"), s.child("sampling"),
              "expected 'every' or 'geometric'");
      c.geometric_sampling = sampling == "geometric";
    }
    s.get("samples_per_decade", c.samples_per_decade);
    if (s.get("initial", initial)) {
      require(initial == "bump" || initial == "zero-mode", s.field("initial"), s.child("initial"),
              "expected 'bump' or 'zero-mode'");
      c.initial = initial == "bump" ? InitialData::Bump : InitialData::ZeroMode;
    }
    s.get("initial_edge", c.initial_edge);
    s.get("project", c.project_zero_modes);
    s.get("normalize_graph_norm", c.normalize_graph_norm);
    require(c.h > 0.0, s.field("h"), s.node(), "must be positive");
    require(c.dt >= 0.0, s.field("dt"), s.node(), "must be non-negative");
    require(c.t_end > 0.0, s.field("t_end"), s.node(), "must be positive");
    require(c.sample_every >= 1, s.field("sample_every"), s.node(), "must be at least 1");
    require(c.samples_per_decade >= 1, s.field("samples_per_decade"), s.node(), "must be at least 1");
    require(c.initial_edge >= 1 && c.initial_edge <= cfg.geometry.edge_count(), s.field("initial_edge"), s.node(),
            "must name an edge of the chain");
    require(c.initial != InitialData::ZeroMode || cfg.geometry.n_pairs() >= 2, s.field("initial"), s.node(),
            "zero-mode data needs at least two string/beam pairs");
    s.finish();
  }

  {
    Section s(top.child("resolvent"), "resolvent");
    auto& c = cfg.resolvent;
    s.get("betas", c.betas);
    s.get("beta_min", c.beta_min);
    s.get("beta_max", c.beta_max);
    s.get("count", c.count);
    s.get("refine_peaks", c.refine_peaks);
    s.get("h", c.h);
    for (double b : c.betas) require(b > 0.0, s.field("betas"), s.node(), "frequencies must be positive");
    require(c.beta_min > 0.0 && (c.beta_max == 0.0 || c.beta_max > c.beta_min), "resolvent.beta_range", s.node(),
            "need 0 < beta_min < beta_max (or beta_max = 0 for the trust horizon)");
    require(c.count >= 3, s.field("count"), s.node(), "must be at least 3");
    require(c.h > 0.0, s.field("h"), s.node(), "must be positive");
    s.finish();
  }

  {
    Section s(top.child("decay"), "decay");
    std::vector<double> window;
    if (s.get("window", window)) {
      require(window.size() == 2, s.field("window"), s.child("window"), "expected [t_lo, t_hi]");
      cfg.decay.t_lo = window[0];
      cfg.decay.t_hi = window[1];
    }
    s.get("trace", cfg.decay.trace);
    require(cfg.decay.t_lo > 1.0 && cfg.decay.t_hi > cfg.decay.t_lo, s.field("window"), s.node(),
            "need 1 < t_lo < t_hi");
    s.finish();
  }

  {
    Section s(top.child("output"), "output");
    s.get("directory", cfg.output.directory);
    s.get("emit_svg", cfg.output.emit_svg);
    require(!cfg.output.directory.empty(), s.field("directory"), s.node(), "must not be empty");
    s.finish();
  }

  top.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string describe_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_pairs" << YAML::Value << cfg.geometry.n_pairs();
  out << YAML::Key << "lengths" << YAML::Value << YAML::Flow << cfg.geometry.lengths();
  out << YAML::EndMap;

  const auto& sp = cfg.spectrum;
  out << YAML::Key << "spectrum" << YAML::Value << YAML::BeginMap << YAML::Key << "z_min" << YAML::Value << sp.z_min
      << YAML::Key << "z_max" << YAML::Value << sp.z_max << YAML::Key << "scan_points" << YAML::Value << sp.scan_points
      << YAML::Key << "tol" << YAML::Value << sp.tol << YAML::Key << "k_max" << YAML::Value << sp.k_max << YAML::Key
      << "pole_threshold" << YAML::Value << sp.pole_threshold << YAML::EndMap;

  out << YAML::Key << "modes" << YAML::Value << YAML::BeginMap << YAML::Key << "count" << YAML::Value
      << cfg.modes.count << YAML::Key << "samples_per_edge" << YAML::Value << cfg.modes.samples_per_edge
      << YAML::EndMap;

  const auto& si = cfg.simulate;
  out << YAML::Key << "simulate" << YAML::Value << YAML::BeginMap << YAML::Key << "variant" << YAML::Value
      << variant_name(si.variant) << YAML::Key << "h" << YAML::Value << si.h << YAML::Key << "dt" << YAML::Value
      << (si.dt > 0.0 ? si.dt : 0.5 * si.h) << YAML::Key << "t_end" << YAML::Value << si.t_end << YAML::Key
      << "sample_every" << YAML::Value << si.sample_every << YAML::Key << "sampling" << YAML::Value
      << (si.geometric_sampling ? "geometric" : "every") << YAML::Key << "samples_per_decade" << YAML::Value
      << si.samples_per_decade << YAML::Key << "initial" << YAML::Value
      << (si.initial == InitialData::Bump ? "bump" : "zero-mode") << YAML::Key << "initial_edge" << YAML::Value
      << si.initial_edge << YAML::Key << "project" << YAML::Value << si.project_zero_modes << YAML::Key
      << "normalize_graph_norm" << YAML::Value << si.normalize_graph_norm << YAML::EndMap;

  const auto& re = cfg.resolvent;
  out << YAML::Key << "resolvent" << YAML::Value << YAML::BeginMap;
  if (!re.betas.empty()) out << YAML::Key << "betas" << YAML::Value << YAML::Flow << re.betas;
  out << YAML::Key << "beta_min" << YAML::Value << re.beta_min << YAML::Key << "beta_max" << YAML::Value
      << re.beta_max << YAML::Key << "count" << YAML::Value << re.count << YAML::Key << "refine_peaks" << YAML::Value
      << re.refine_peaks << YAML::Key << "h" << YAML::Value << re.h << YAML::EndMap;

  out << YAML::Key << "decay" << YAML::Value << YAML::BeginMap << YAML::Key << "window" << YAML::Value << YAML::Flow
      << std::vector<double>{cfg.decay.t_lo, cfg.decay.t_hi} << YAML::Key << "trace" << YAML::Value
      << cfg.decay.trace << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap << YAML::Key << "directory" << YAML::Value
      << cfg.output.directory << YAML::Key << "emit_svg" << YAML::Value << cfg.output.emit_svg << YAML::EndMap;
  out << YAML::EndMap;
  return out.c_str();
}

}  // namespace chainwave
