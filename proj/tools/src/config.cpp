#include "dnstab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dnstab/errors.hpp"
#include "dnstab/monotone/presets.hpp"
#include "dnstab/solver/problems.hpp"

namespace dnstab::cli {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << '\n';
    if (issues[i].line > 0) os << "line " << issues[i].line << ": ";
    os << issues[i].message;
  }
  return os.str();
}

int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

class Reader {
 public:
  std::vector<ConfigIssue> issues;

  void fail(const YAML::Node& node, const std::string& message) {
    issues.push_back({line_of(node), message});
  }
  void fail(int line, const std::string& message) { issues.push_back({line, message}); }

  bool require_map(const YAML::Node& node, const std::string& where) {
    if (node.IsMap()) return true;
    fail(node, where + " must be a mapping");
    return false;
  }

  void allow_keys(const YAML::Node& map, const std::vector<std::string>& allowed,
                  const std::string& where) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(kv.first, "unknown key '" + key + "' in " + where);
      }
    }
  }

  template <class T>
  std::optional<T> scalar(const YAML::Node& map, const std::string& key,
                          const std::string& where) {
    const YAML::Node node = map[key];
    if (!node) return std::nullopt;
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, where + "." + key + " has the wrong type");
      return std::nullopt;
    }
  }

  template <class T>
  std::optional<std::vector<T>> list(const YAML::Node& map, const std::string& key,
                                     const std::string& where) {
    const YAML::Node node = map[key];
    if (!node) return std::nullopt;
    if (!node.IsSequence()) {
      fail(node, where + "." + key + " must be a list");
      return std::nullopt;
    }
    std::vector<T> out;
    for (const auto& item : node) {
      try {
        out.push_back(item.as<T>());
      } catch (const YAML::Exception&) {
        fail(item, where + "." + key + " has an entry of the wrong type");
        return std::nullopt;
      }
    }
    return out;
  }
};

std::optional<PiecewiseLinearSpec> read_pl(Reader& r, const YAML::Node& node,
                                           const std::string& where) {
  if (!r.require_map(node, where)) return std::nullopt;
  r.allow_keys(node, {"breakpoints", "values", "left_slope", "right_slope"}, where);
  PiecewiseLinearSpec spec;
  auto b = r.list<double>(node, "breakpoints", where);
  auto v = r.list<double>(node, "values", where);
  if (!b || !v) {
    r.fail(node, where + " needs breakpoints and values");
    return std::nullopt;
  }
  if (b->empty() || b->size() != v->size()) {
    r.fail(node, where + ": breakpoints and values must be nonempty and of equal length");
    return std::nullopt;
  }
  spec.breakpoints = *b;
  spec.values = *v;
  if (auto s = r.scalar<double>(node, "left_slope", where)) spec.left_slope = *s;
  if (auto s = r.scalar<double>(node, "right_slope", where)) spec.right_slope = *s;
  return spec;
}

std::optional<FunctionSpec> read_function(Reader& r, const YAML::Node& node,
                                          const std::string& where) {
  if (!r.require_map(node, where)) return std::nullopt;
  r.allow_keys(node, {"kind", "amplitude"}, where);
  FunctionSpec f;
  if (auto k = r.scalar<std::string>(node, "kind", where)) f.kind = *k;
  if (auto a = r.scalar<double>(node, "amplitude", where)) f.amplitude = *a;
  if (f.kind != "zero" && f.kind != "sine" && f.kind != "bump") {
    r.fail(node["kind"], where + ".kind must be zero, sine or bump");
  }
  return f;
}

std::optional<FluxSpec> read_flux(Reader& r, const YAML::Node& node) {
  const std::string where = "problem.flux";
  if (!r.require_map(node, where)) return std::nullopt;
  r.allow_keys(node, {"kind", "lambda", "p", "eps"}, where);
  FluxSpec f;
  if (auto k = r.scalar<std::string>(node, "kind", where)) f.kind = *k;
  if (auto v = r.scalar<double>(node, "lambda", where)) f.lambda = *v;
  if (auto v = r.scalar<double>(node, "p", where)) f.p = *v;
  if (auto v = r.scalar<double>(node, "eps", where)) f.eps = *v;
  if (f.kind != "linear" && f.kind != "mobility" && f.kind != "p-laplace") {
    r.fail(node["kind"], "problem.flux.kind must be linear, mobility or p-laplace");
  }
  if (!(f.p > 1.0)) {
    r.fail(node["p"] ? node["p"] : node, "exponent p must exceed 1");
  } else if (f.kind == "p-laplace" && f.p < 2.0 && !(f.eps > 0.0)) {
    r.fail(node["eps"] ? node["eps"] : node, "p-laplace with p < 2 needs eps > 0");
  }
  if (f.kind != "p-laplace" && f.p != 2.0) {
    r.fail(node["p"], "exponent p applies to the p-laplace flux only");
  }
  if (!(f.lambda > 0.0)) r.fail(node["lambda"] ? node["lambda"] : node, "lambda must be positive");
  return f;
}

void read_problem(Reader& r, const YAML::Node& node, ProblemConfig& p) {
  const std::string where = "problem";
  if (!r.require_map(node, where)) return;
  r.allow_keys(node, {"preset", "pair", "flux", "initial", "source", "horizon"}, where);
  if (auto s = r.scalar<std::string>(node, "preset", where)) {
    const auto& names = solver::problems::problem_names();
    if (std::find(names.begin(), names.end(), *s) == names.end()) {
      r.fail(node["preset"], "unknown problem preset '" + *s + "'");
    } else {
      p.preset = *s;
    }
  }
  if (const YAML::Node pair = node["pair"]) {
    if (pair.IsScalar()) {
      const auto name = pair.as<std::string>();
      const auto& names = monotone::presets::pair_names();
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        r.fail(pair, "unknown nonlinearity preset '" + name + "'");
      } else {
        p.pair_preset = name;
      }
    } else if (r.require_map(pair, "problem.pair")) {
      r.allow_keys(pair, {"beta", "zeta"}, "problem.pair");
      if (!pair["beta"] || !pair["zeta"]) {
        r.fail(pair, "problem.pair needs both beta and zeta");
      } else {
        p.beta = read_pl(r, pair["beta"], "problem.pair.beta");
        p.zeta = read_pl(r, pair["zeta"], "problem.pair.zeta");
      }
    }
  }
  if (node["flux"]) p.flux = read_flux(r, node["flux"]);
  if (node["initial"]) p.initial = read_function(r, node["initial"], "problem.initial");
  if (node["source"]) p.source = read_function(r, node["source"], "problem.source");
  if (auto h = r.scalar<double>(node, "horizon", where)) {
    if (!(*h > 0.0)) r.fail(node["horizon"], "problem.horizon must be positive");
    p.horizon = *h;
  }
  if (!p.preset && !p.pair_preset && !p.beta && !node["pair"]) {
    r.fail(node, "missing required key problem.preset or problem.pair");
  }
}

solver::SpaceFunction space_function(const FunctionSpec& f) {
  const double a = f.amplitude;
  if (f.kind == "sine") return [a](double x) { return a * std::sin(std::numbers::pi * x); };
  if (f.kind == "bump") {
    return [a](double x) { return a * std::exp(-100.0 * (x - 0.5) * (x - 0.5)); };
  }
  return [](double) { return 0.0; };
}

fem::FluxLaw build_flux(const FluxSpec& f) {
  if (f.kind == "mobility") return fem::FluxLaw::mobility();
  if (f.kind == "p-laplace") return fem::FluxLaw::p_laplace(f.p, f.eps);
  return fem::FluxLaw::linear(f.lambda);
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& source) {
  ExperimentConfig cfg;
  cfg.source_path = source;
  cfg.text = text;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg}});
  }
  Reader r;
  if (!root.IsMap()) throw ConfigError({{1, "configuration must be a mapping"}});
  r.allow_keys(root,
               {"problem", "mesh", "time", "solver", "sweep", "dual", "convergence", "verify",
                "output", "seed"},
               "the top level");

  if (root["problem"]) {
    read_problem(r, root["problem"], cfg.problem);
  } else {
    r.fail(1, "missing required key problem");
  }

  if (const YAML::Node mesh = root["mesh"]; mesh && r.require_map(mesh, "mesh")) {
    r.allow_keys(mesh, {"cells"}, "mesh");
    if (auto c = r.scalar<long>(mesh, "cells", "mesh")) {
      if (*c < 2) r.fail(mesh["cells"], "mesh.cells must be at least 2");
      else cfg.cells = static_cast<std::size_t>(*c);
    }
  }
  if (const YAML::Node time = root["time"]; time && r.require_map(time, "time")) {
    r.allow_keys(time, {"step"}, "time");
    if (auto t = r.scalar<double>(time, "step", "time")) {
      if (!(*t > 0.0)) r.fail(time["step"], "time.step must be positive");
      else cfg.tau = *t;
    }
  }
  if (const YAML::Node s = root["solver"]; s && r.require_map(s, "solver")) {
    r.allow_keys(s,
                 {"delta_reg", "auto_delta", "newton_tol", "max_newton", "damping",
                  "max_halvings", "picard_iterations", "initial_guess_shift", "jacobian_floor"},
                 "solver");
    auto& c = cfg.solver;
    if (auto v = r.scalar<double>(s, "delta_reg", "solver")) c.delta_reg = *v;
    if (auto v = r.scalar<bool>(s, "auto_delta", "solver")) c.auto_delta = *v;
    if (auto v = r.scalar<double>(s, "newton_tol", "solver")) c.newton_tol = *v;
    if (auto v = r.scalar<int>(s, "max_newton", "solver")) c.max_newton = *v;
    if (auto v = r.scalar<double>(s, "damping", "solver")) c.damping = *v;
    if (auto v = r.scalar<int>(s, "max_halvings", "solver")) c.max_halvings = *v;
    if (auto v = r.scalar<int>(s, "picard_iterations", "solver")) c.picard_iterations = *v;
    if (auto v = r.scalar<double>(s, "initial_guess_shift", "solver")) c.initial_guess_shift = *v;
    if (auto v = r.scalar<double>(s, "jacobian_floor", "solver")) c.jacobian_floor = *v;
    try {
      c.validate();
    } catch (const InvalidArgument& e) {
      r.fail(s, std::string("solver: ") + e.what());
    }
  }
  if (const YAML::Node s = root["sweep"]; s && r.require_map(s, "sweep")) {
    r.allow_keys(s, {"kind", "indices"}, "sweep");
    if (auto k = r.scalar<std::string>(s, "kind", "sweep")) {
      try {
        cfg.sweep.kind = stability::family_kind_from_string(*k);
      } catch (const InvalidArgument& e) {
        r.fail(s["kind"], e.what());
      }
    }
    if (auto idx = r.list<int>(s, "indices", "sweep")) {
      if (idx->empty() || std::any_of(idx->begin(), idx->end(), [](int n) { return n < 1; })) {
        r.fail(s["indices"], "sweep.indices must be a nonempty list of positive integers");
      } else {
        cfg.sweep.indices = *idx;
      }
    }
  }
  if (const YAML::Node d = root["dual"]; d && r.require_map(d, "dual")) {
    r.allow_keys(d, {"eps", "guess_shifts"}, "dual");
    if (auto e = r.list<double>(d, "eps", "dual")) {
      if (e->empty() ||
          std::any_of(e->begin(), e->end(), [](double v) { return !(v > 0.0 && v < 0.5); })) {
        r.fail(d["eps"], "dual.eps entries must lie in (0, 1/2)");
      } else {
        cfg.dual.eps = *e;
      }
    }
    if (auto g = r.list<double>(d, "guess_shifts", "dual")) {
      if (g->size() != 2) r.fail(d["guess_shifts"], "dual.guess_shifts needs two entries");
      else cfg.dual.guess_shifts = *g;
    }
  }
  if (const YAML::Node c = root["convergence"]; c && r.require_map(c, "convergence")) {
    r.allow_keys(c, {"cells", "tau_factor", "min_order"}, "convergence");
    if (auto cells = r.list<long>(c, "cells", "convergence")) {
      bool ok = cells->size() >= 2;
      for (std::size_t i = 0; ok && i < cells->size(); ++i) {
        ok = (*cells)[i] >= 2 && (i == 0 || (*cells)[i] > (*cells)[i - 1]);
      }
      if (!ok) {
        r.fail(c["cells"], "convergence.cells needs at least two increasing entries >= 2");
      } else {
        cfg.convergence.cells.assign(cells->begin(), cells->end());
      }
    }
    if (auto v = r.scalar<double>(c, "tau_factor", "convergence")) {
      if (!(*v > 0.0)) r.fail(c["tau_factor"], "convergence.tau_factor must be positive");
      else cfg.convergence.tau_factor = *v;
    }
    if (auto v = r.scalar<double>(c, "min_order", "convergence")) cfg.convergence.min_order = *v;
  }
  if (const YAML::Node v = root["verify"]; v && r.require_map(v, "verify")) {
    r.allow_keys(v, {"samples", "range"}, "verify");
    if (auto n = r.scalar<long>(v, "samples", "verify")) {
      if (*n < 1) r.fail(v["samples"], "verify.samples must be positive");
      else cfg.verify.samples = static_cast<std::size_t>(*n);
    }
    if (auto x = r.scalar<double>(v, "range", "verify")) {
      if (!(*x > 0.0)) r.fail(v["range"], "verify.range must be positive");
      else cfg.verify.range = *x;
    }
  }
  if (auto o = r.scalar<std::string>(root, "output", "config")) cfg.output = *o;
  if (auto s = r.scalar<std::uint64_t>(root, "seed", "config")) cfg.seed = *s;

  if (r.issues.empty()) {
    try {
      (void)cfg.build_problem();
    } catch (const Error& e) {
      r.fail(line_of(root["problem"]), std::string("problem: ") + e.what());
    }
  }
  if (!r.issues.empty()) {
    std::stable_sort(r.issues.begin(), r.issues.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    throw ConfigError(std::move(r.issues));
  }
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "cannot read configuration file " + path.string()}});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

solver::ProblemSpec ExperimentConfig::build_problem() const {
  const auto& p = problem;
  std::optional<solver::ProblemSpec> base;
  if (p.preset) base = solver::problems::problem_by_name(*p.preset, p.horizon.value_or(0.1));

  auto pair = [&]() -> monotone::NonlinearityPair {
    if (p.pair_preset) return monotone::presets::pair_by_name(*p.pair_preset);
    if (p.beta && p.zeta) {
      auto make = [](const PiecewiseLinearSpec& s) {
        return monotone::ScalarNonlinearity::piecewise_linear(s.breakpoints, s.values,
                                                              s.left_slope, s.right_slope);
      };
      return monotone::NonlinearityPair::with_fitted_coercivity(make(*p.beta), make(*p.zeta),
                                                                "custom");
    }
    if (base) return base->pair;
    throw InvalidArgument("no nonlinearity pair given");
  }();
  fem::FluxLaw flux = p.flux ? build_flux(*p.flux)
                             : (base ? base->flux : fem::FluxLaw::linear());
  solver::SpaceFunction initial =
      p.initial ? space_function(*p.initial)
                : (base ? base->initial : space_function(FunctionSpec{"sine", 1.0}));
  solver::SpaceTimeFunction source;
  bool zero_source = true;
  if (p.source) {
    const auto g = space_function(*p.source);
    zero_source = p.source->kind == "zero";
    source = [g](double x, double) { return g(x); };
  } else if (base) {
    source = base->source;
    zero_source = base->zero_source();
  }
  const double horizon = p.horizon.value_or(base ? base->horizon : 0.1);
  std::string name = p.preset.value_or(p.pair_preset.value_or("custom"));
  return solver::ProblemSpec(std::move(pair), std::move(flux), std::move(source),
                             std::move(initial), horizon, std::move(name), zero_source);
}

}  // namespace dnstab::cli
