#include "scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "spectral_flrw/action.hpp"
#include "spectral_flrw/errors.hpp"
#include "spectral_flrw/wodzicki.hpp"

namespace sflrw::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::verify: return "verify";
    case Mode::evolve: return "evolve";
    case Mode::perturb: return "perturb";
    case Mode::sweep: return "sweep";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  for (Mode m : {Mode::verify, Mode::evolve, Mode::perturb, Mode::sweep}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError(fmt::format("$.mode: unknown mode '{}' (expected verify, evolve, perturb or sweep)", name));
}

namespace {

std::string type_name(const json& j) { return j.type_name(); }

// A JSON object together with its path, for strict, path-qualified reads.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError(fmt::format("{}: expected an object, got {}", path_, type_name(j_)));
    }
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        std::string allowed;
        for (auto k : keys) allowed += (allowed.empty() ? "" : ", ") + std::string(k);
        throw ConfigError(fmt::format("{}.{}: unknown key (allowed here: {})", path_, key, allowed));
      }
    }
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }
  [[nodiscard]] std::string path(const char* key) const { return fmt::format("{}.{}", path_, key); }

  [[nodiscard]] Node child(const char* key) const {
    require(key);
    return {j_.at(key), path(key)};
  }

  [[nodiscard]] double number(const char* key) const {
    require(key);
    const json& v = j_.at(key);
    if (!v.is_number()) throw mismatch(key, "a number", v);
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(fmt::format("{}: must be finite", path(key)));
    return d;
  }
  [[nodiscard]] double number_or(const char* key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  [[nodiscard]] long long integer(const char* key) const {
    require(key);
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw mismatch(key, "an integer", v);
    return v.get<long long>();
  }
  [[nodiscard]] long long integer_or(const char* key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  [[nodiscard]] std::uint64_t unsigned_integer(const char* key) const {
    require(key);
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) throw mismatch(key, "a non-negative integer", v);
    return v.get<std::uint64_t>();
  }

  [[nodiscard]] std::string string(const char* key) const {
    require(key);
    const json& v = j_.at(key);
    if (!v.is_string()) throw mismatch(key, "a string", v);
    return v.get<std::string>();
  }
  [[nodiscard]] std::string string_or(const char* key, std::string fallback) const {
    return has(key) ? string(key) : fallback;
  }

  [[nodiscard]] std::vector<double> numbers(const char* key) const {
    require(key);
    const json& v = j_.at(key);
    if (!v.is_array()) throw mismatch(key, "an array of numbers", v);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        throw ConfigError(fmt::format("{}[{}]: expected a finite number, got {}", path(key), i,
                                      type_name(v[i])));
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  // Wraps an enum lookup so its error carries the path.
  template <class F>
  auto parsed(const char* key, F&& from_string) const {
    const std::string s = string(key);
    try {
      return from_string(s);
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("{}: {}", path(key), e.what()));
    }
  }

 private:
  void require(const char* key) const {
    if (!has(key)) throw ConfigError(fmt::format("{}: missing required field", path(key)));
  }
  [[nodiscard]] ConfigError mismatch(const char* key, const char* expected, const json& v) const {
    return ConfigError(fmt::format("{}: expected {}, got {}", path(key), expected, type_name(v)));
  }

  const json& j_;
  std::string path_;
};

CosmoParams parse_params(const Node& n) {
  n.allow({"lambda_eff", "alpha", "raw_lambda", "raw_c", "phi_modulus"});
  CosmoParams p;
  if (n.has("lambda_eff")) p.lambda_eff = n.number("lambda_eff");
  if (n.has("alpha")) p.alpha = n.number("alpha");
  if (n.has("raw_lambda")) p.raw_lambda = n.number("raw_lambda");
  if (n.has("raw_c")) p.raw_c = n.number("raw_c");
  if (n.has("phi_modulus")) p.phi_modulus = n.number("phi_modulus");
  try {
    const CosmoParams out = validate_params(p);
    if (std::isnan(out.lambda_eff)) throw ValidationError("lambda_eff is missing");
    if (std::isnan(out.alpha)) throw ValidationError("alpha is missing");
    return out;
  } catch (const ValidationError& e) {
    throw ConfigError(fmt::format("$.params: {}", e.what()));
  }
}

Profile parse_profile(const Node& n, bool scale_factor, const std::string& path) {
  const Profile::Kind kind = n.parsed("kind", [](const std::string& s) { return profile_kind_from_string(s); });
  switch (kind) {
    case Profile::Kind::zero:
      n.allow({"kind"});
      if (scale_factor) throw ConfigError(fmt::format("{}: scale factors cannot be zero", path));
      return Profile::zero();
    case Profile::Kind::constant:
      n.allow({"kind", "c0"});
      break;
    case Profile::Kind::exponential:
      n.allow({"kind", "c0", "rate"});
      break;
    case Profile::Kind::power_law:
      n.allow({"kind", "c0", "exponent"});
      break;
  }
  const double c0 = n.number("c0");
  if (scale_factor && !(c0 > 0.0)) throw ConfigError(fmt::format("{}.c0: scale factors need c0 > 0", path));
  switch (kind) {
    case Profile::Kind::constant: return Profile::constant(c0);
    case Profile::Kind::exponential: return Profile::exponential(c0, n.number("rate"));
    case Profile::Kind::power_law: return Profile::power_law(c0, n.number("exponent"));
    default: return Profile::zero();
  }
}

json profile_json(const Profile& p) {
  json j;
  j["kind"] = to_string(p.kind());
  switch (p.kind()) {
    case Profile::Kind::zero: break;
    case Profile::Kind::constant: j["c0"] = p.coefficient(); break;
    case Profile::Kind::exponential:
      j["c0"] = p.coefficient();
      j["rate"] = p.rate();
      break;
    case Profile::Kind::power_law:
      j["c0"] = p.coefficient();
      j["exponent"] = p.rate();
      break;
  }
  return j;
}

GeometrySpec parse_geometry(const Node& n) {
  n.allow({"a1", "a2", "phi", "h1", "h2", "t"});
  GeometrySpec g;
  if (n.has("a1")) g.geometry.a1 = parse_profile(n.child("a1"), true, n.path("a1"));
  if (n.has("a2")) g.geometry.a2 = parse_profile(n.child("a2"), true, n.path("a2"));
  if (n.has("h1")) g.geometry.h1 = parse_profile(n.child("h1"), false, n.path("h1"));
  if (n.has("h2")) g.geometry.h2 = parse_profile(n.child("h2"), false, n.path("h2"));
  if (n.has("phi")) {
    const Node phi = n.child("phi");
    phi.allow({"re", "im", "shape"});
    g.geometry.phi.amplitude = {phi.number_or("re", 0.0), phi.number_or("im", 0.0)};
    if (phi.has("shape")) g.geometry.phi.shape = parse_profile(phi.child("shape"), false, phi.path("shape"));
  }
  g.t = n.number_or("t", 1.0);
  try {
    g.geometry.validate_at(g.t);
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("{}: {}", n.path("t"), e.what()));
  }
  return g;
}

InitialConditions parse_ic(const Node& n) {
  n.allow({"a1", "a2", "v2", "branch"});
  InitialConditions ic;
  ic.a1 = n.number("a1");
  ic.a2 = n.number("a2");
  ic.v2 = n.number("v2");
  ic.branch = n.parsed("branch", [](const std::string& s) {
    if (s == "+" || s == "plus") return Branch::plus;
    if (s == "-" || s == "minus") return Branch::minus;
    throw std::invalid_argument(fmt::format("unknown branch '{}' (expected + or -)", s));
  });
  return ic;
}

InitialConditions parse_ic_or_default(const Node& root) {
  const Node n = root.child("initial_conditions");
  if (!n.has("branch")) {
    // branch defaults to +; everything else is required
    n.allow({"a1", "a2", "v2"});
    InitialConditions ic;
    ic.a1 = n.number("a1");
    ic.a2 = n.number("a2");
    ic.v2 = n.number("v2");
    return ic;
  }
  return parse_ic(n);
}

ModelSpec parse_model(const Node& n) {
  n.allow({"kind", "a0", "c1", "c2", "argument"});
  ModelSpec m;
  m.kind = n.parsed("kind", [](const std::string& s) { return model_kind_from_string(s); });
  m.a0 = n.number_or("a0", 1.0);
  if (!(m.a0 > 0.0)) throw ConfigError(fmt::format("{}: a0 must be > 0", n.path("a0")));
  m.c1 = n.number_or("c1", 1.0);
  m.c2 = n.number_or("c2", 0.0);
  if (n.has("argument")) {
    m.argument = n.parsed("argument", [](const std::string& s) {
      if (s == "reduced") return BesselArgument::reduced;
      if (s == "printed") return BesselArgument::printed;
      throw std::invalid_argument(fmt::format("unknown argument '{}' (expected reduced or printed)", s));
    });
  }
  return m;
}

IntegratorConfig parse_integrator(const Node& n, double default_t0) {
  n.allow({"method", "step", "rel_tol", "abs_tol", "t_span", "output_stride", "collapse_eps", "max_steps"});
  IntegratorConfig c;
  c.t0 = default_t0;
  if (n.has("method")) c.method = n.parsed("method", [](const std::string& s) { return method_from_string(s); });
  c.step = n.number_or("step", c.step);
  c.rel_tol = n.number_or("rel_tol", c.rel_tol);
  c.abs_tol = n.number_or("abs_tol", c.abs_tol);
  if (n.has("t_span")) {
    const auto span = n.numbers("t_span");
    if (span.size() != 2) throw ConfigError(fmt::format("{}: expected [t0, t1]", n.path("t_span")));
    c.t0 = span[0];
    c.t1 = span[1];
  }
  const long long stride = n.integer_or("output_stride", c.output_stride);
  if (stride < 1 || stride > std::numeric_limits<int>::max()) {
    throw ConfigError(fmt::format("{}: must be a positive int", n.path("output_stride")));
  }
  c.output_stride = static_cast<int>(stride);
  c.collapse_eps = n.number_or("collapse_eps", c.collapse_eps);
  c.max_steps = static_cast<long>(n.integer_or("max_steps", c.max_steps));
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(fmt::format("$.integrator: {}", e.what()));
  }
  return c;
}

VerifySpec parse_verify(const Node& n) {
  n.allow({"suite", "seed", "node_budget"});
  VerifySpec v;
  if (n.has("suite")) v.suite = n.parsed("suite", [](const std::string& s) { return suite_from_string(s); });
  if (n.has("seed")) v.seed = n.unsigned_integer("seed");
  const long long nodes = n.integer_or("node_budget", v.node_budget);
  if (nodes < CosphereRule::kMinNodes || nodes > 100000) {
    throw ConfigError(fmt::format("{}: must be in [{}, 100000]", n.path("node_budget"), CosphereRule::kMinNodes));
  }
  v.node_budget = static_cast<int>(nodes);
  return v;
}

SweepSpec parse_sweep(const Node& n) {
  n.allow({"lambda", "alpha", "epsilon"});
  SweepSpec s;
  if (n.has("lambda")) s.lambda = n.numbers("lambda");
  if (n.has("alpha")) s.alpha = n.numbers("alpha");
  if (n.has("epsilon")) s.epsilon = n.numbers("epsilon");
  if (s.lambda.empty() && s.alpha.empty() && s.epsilon.empty()) {
    throw ConfigError(fmt::format("{}: needs at least one non-empty grid (lambda, alpha, epsilon)", n.path("lambda").substr(0, n.path("lambda").size() - 7)));
  }
  return s;
}

}  // namespace

Scenario parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("$: malformed JSON: {}", e.what()));
  }
  const Node root(doc, "$");
  root.allow({"mode", "params", "geometry", "initial_conditions", "model", "integrator", "verify",
              "sweep", "output_dir", "workers"});

  Scenario s;
  s.mode = root.parsed("mode", [](const std::string& m) { return mode_from_string(m); });

  const bool needs_params = s.mode != Mode::verify;
  if (needs_params || root.has("params")) s.params = parse_params(root.child("params"));
  if (root.has("geometry")) s.geometry = parse_geometry(root.child("geometry"));
  if (s.mode == Mode::evolve || s.mode == Mode::sweep || root.has("initial_conditions")) {
    s.initial_conditions = parse_ic_or_default(root);
  }
  if (s.mode == Mode::perturb || root.has("model")) s.model = parse_model(root.child("model"));
  if (s.mode == Mode::sweep || root.has("sweep")) s.sweep = parse_sweep(root.child("sweep"));

  double default_t0 = 0.0;
  if (s.mode == Mode::perturb && s.model && s.model->kind != ModelKind::empty) default_t0 = 0.1;
  if (root.has("integrator")) {
    s.integrator = parse_integrator(root.child("integrator"), default_t0);
  } else {
    s.integrator.t0 = default_t0;
  }
  if (s.mode == Mode::perturb && s.model && s.model->kind != ModelKind::empty && !(s.integrator.t0 > 0.0)) {
    throw ConfigError("$.integrator.t_span: power-law backgrounds need t0 > 0");
  }
  if (root.has("verify")) s.verify = parse_verify(root.child("verify"));
  s.output_dir = root.string_or("output_dir", s.output_dir);
  if (s.output_dir.empty()) throw ConfigError("$.output_dir: must not be empty");
  const long long workers = root.integer_or("workers", 0);
  if (workers < 0 || workers > 1024) throw ConfigError("$.workers: must be in [0, 1024]");
  s.workers = static_cast<int>(workers);
  return s;
}

std::string serialize(const Scenario& s) {
  json doc;
  doc["mode"] = to_string(s.mode);
  if (s.params) {
    json p;
    p["lambda_eff"] = s.params->lambda_eff;
    p["alpha"] = s.params->alpha;
    if (s.params->raw_lambda) p["raw_lambda"] = *s.params->raw_lambda;
    if (s.params->raw_c) p["raw_c"] = *s.params->raw_c;
    if (s.params->phi_modulus) p["phi_modulus"] = *s.params->phi_modulus;
    doc["params"] = p;
  }
  if (s.geometry) {
    const SheetGeometry& g = s.geometry->geometry;
    doc["geometry"] = {{"a1", profile_json(g.a1)},
                       {"a2", profile_json(g.a2)},
                       {"phi", {{"re", g.phi.amplitude.real()},
                                {"im", g.phi.amplitude.imag()},
                                {"shape", profile_json(g.phi.shape)}}},
                       {"h1", profile_json(g.h1)},
                       {"h2", profile_json(g.h2)},
                       {"t", s.geometry->t}};
  }
  if (s.initial_conditions) {
    const auto& ic = *s.initial_conditions;
    doc["initial_conditions"] = {{"a1", ic.a1}, {"a2", ic.a2}, {"v2", ic.v2},
                                 {"branch", ic.branch == Branch::plus ? "+" : "-"}};
  }
  if (s.model) {
    doc["model"] = {{"kind", to_string(s.model->kind)}, {"a0", s.model->a0}, {"c1", s.model->c1},
                    {"c2", s.model->c2}, {"argument", to_string(s.model->argument)}};
  }
  const IntegratorConfig& c = s.integrator;
  doc["integrator"] = {{"method", to_string(c.method)},      {"step", c.step},
                       {"rel_tol", c.rel_tol},               {"abs_tol", c.abs_tol},
                       {"t_span", {c.t0, c.t1}},             {"output_stride", c.output_stride},
                       {"collapse_eps", c.collapse_eps},     {"max_steps", c.max_steps}};
  doc["verify"] = {{"suite", to_string(s.verify.suite)}, {"seed", s.verify.seed},
                   {"node_budget", s.verify.node_budget}};
  if (s.sweep) {
    doc["sweep"] = {{"lambda", s.sweep->lambda}, {"alpha", s.sweep->alpha},
                    {"epsilon", s.sweep->epsilon}};
  }
  doc["output_dir"] = s.output_dir;
  doc["workers"] = s.workers;
  return doc.dump(2) + "\n";
}

std::string config_reference() {
  return R"(Config keys (strict JSON; unknown keys are rejected):
  mode                         verify | evolve | perturb | sweep (the command-line mode wins)
  params                       required except for verify
    lambda_eff                 effective cosmological constant Lambda
    alpha                      potential strength alpha (|Phi|^2 folded in)
    raw_lambda, raw_c,         cutoff scale, cutoff coefficient and |Phi|; give all three
    phi_modulus                  to derive Lambda = 6(raw_lambda^2/raw_c - |Phi|^2), alpha = 6|Phi|^2
  geometry                     optional; verify reports its spectral terms
    a1, a2                     scale-factor profiles {kind, c0, rate | exponent}
                               kind: constant | exponential | power_law (c0 > 0)
    phi {re, im, shape}        Higgs vacuum value and optional profile
    h1, h2                     torsion profiles (kind may also be zero)
    t                          evaluation time (default 1)
  initial_conditions           required for evolve and sweep
    a1, a2, v2                 scale factors and sheet-2 velocity; v1 solves the constraint
    branch                     + | - sign of v1 (default +)
  model                        required for perturb
    kind                       empty | radiation | matter
    a0                         background amplitude (default 1)
    c1, c2                     closed-form constants (default 1, 0)
    argument                   reduced | printed radiation Bessel argument (default reduced)
  integrator
    method                     rk4 | rk45 (default rk4)
    step                       fixed or initial step (default 1e-3)
    rel_tol, abs_tol           rk45 tolerances (default 1e-10, 1e-12)
    t_span                     [t0, t1] (default [0, 1]; t0 = 0.1 for radiation and matter)
    output_stride              keep every n-th step (default 1)
    collapse_eps               collapse threshold for a1, a2 (default 1e-8)
    max_steps                  step budget (default 50000000)
  verify
    suite                      symbols | action | eom | perturbation | all (default all)
    seed                       seed of the randomized checks (default 1)
    node_budget                hyperspherical cosphere nodes (default 96)
  sweep                        required for sweep; Cartesian grid of evolve runs
    lambda, alpha              grids replacing params (empty keeps the base value)
    epsilon                    initial split a1 + eps, a2 - eps (default [0])
  output_dir                   artifact directory (default "out")
  workers                      sweep worker threads, 0 = logical CPUs (default 0)

Precedence: --seed, --nodes, --out and --workers override the config values.
)";
}

std::vector<SweepPoint> expand_sweep(const Scenario& s) {
  if (!s.sweep || !s.params || !s.initial_conditions) {
    throw ConfigError("$.sweep: sweep needs params, initial_conditions and a sweep grid");
  }
  const auto axis = [](const std::vector<double>& v, double base) {
    return v.empty() ? std::vector<double>{base} : v;
  };
  const auto lambdas = axis(s.sweep->lambda, s.params->lambda_eff);
  const auto alphas = axis(s.sweep->alpha, s.params->alpha);
  const auto epsilons = axis(s.sweep->epsilon, 0.0);
  std::vector<SweepPoint> points;
  for (double l : lambdas) {
    for (double a : alphas) {
      for (double e : epsilons) {
        SweepPoint p;
        p.lambda_eff = l;
        p.alpha = a;
        p.epsilon = e;
        p.subdir = fmt::format("point-{:04d}", points.size());
        p.scenario = s;
        p.scenario.mode = Mode::evolve;
        p.scenario.sweep.reset();
        p.scenario.params = CosmoParams::effective(l, a);
        p.scenario.initial_conditions->a1 += e;
        p.scenario.initial_conditions->a2 -= e;
        p.scenario.output_dir = (fs::path(s.output_dir) / p.subdir).string();
        points.push_back(std::move(p));
      }
    }
  }
  return points;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write failed for {}", path.string()));
}

fs::path prepare_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create {}: {}", dir, ec.message()));
  return p;
}

json state_json(const PhaseState& s) {
  return {{"t", s.t}, {"a1", s.a1}, {"v1", s.v1}, {"a2", s.a2}, {"v2", s.v2}};
}

json spectral_terms(const GeometrySpec& g, int node_budget) {
  const CosphereRule rule(node_budget);
  const Jet2 j1 = jet_eval(g.geometry.a1, g.t);
  const Jet2 j2 = jet_eval(g.geometry.a2, g.t);
  const double phi = std::abs(g.geometry.phi.jet(g.t).value);
  json out;
  out["t"] = g.t;
  out["volume"] = {{"computed", wres_volume_term(g.geometry, g.t, rule)},
                   {"closed_form", closed_form::volume_term(j1.value, j2.value)}};
  B2Options opts;
  opts.allow_torsion = !g.geometry.torsion_free();
  const B2Terms b = wres_b2_term(g.geometry, g.t, rule, opts);
  const bool closed = g.geometry.torsion_free() && g.geometry.phi.is_constant();
  json kin = {{"computed", b.kinetic}};
  json pot = {{"computed", b.potential}};
  json mass = {{"computed", b.mass}};
  if (closed) {
    kin["closed_form"] = closed_form::kinetic_term(j1) + closed_form::kinetic_term(j2);
    pot["closed_form"] = closed_form::potential_term(j1.value, j2.value, phi);
    mass["closed_form"] = closed_form::mass_term(j1.value, j2.value, phi);
  }
  out["kinetic"] = kin;
  out["potential"] = pot;
  out["mass"] = mass;
  out["total_b2"] = b.total;
  return out;
}

int run_verify(const Scenario& s, std::ostream& log) {
  const fs::path dir = prepare_dir(s.output_dir);
  const VerificationReport report = run_suite(s.verify.suite, s.verify.seed, s.verify.node_budget);
  std::ostringstream text;
  write_text(report, text);
  write_file(dir / "report.txt", text.str());
  write_file(dir / "report.json", to_json(report));
  if (s.geometry) write_file(dir / "spectral_terms.json", spectral_terms(*s.geometry, s.verify.node_budget).dump(2) + "\n");
  log << fmt::format("verify {}: {} checks, {} pass, {} fail, {} paper-discrepancy -> {}\n",
                     to_string(report.suite), report.entries.size(), report.count(Verdict::pass),
                     report.count(Verdict::fail), report.count(Verdict::paper_discrepancy),
                     (dir / "report.txt").string());
  for (const auto& e : report.entries) {
    if (e.verdict != Verdict::pass) {
      log << fmt::format("  [{}] {}: {}\n", to_string(e.verdict), e.check_id, e.note);
    }
  }
  return report.any_fail() ? kExitError : kExitOk;
}

struct EvolveResult {
  Trajectory traj;
  double drift = 0.0;
};

EvolveResult evolve(const Scenario& s) {
  const CosmoParams& p = *s.params;
  const InitialConditions& ic = *s.initial_conditions;
  const PhaseState start = solve_constraint_ic(ic.a1, ic.a2, ic.v2, ic.branch, p, s.integrator.t0);
  EvolveResult r;
  r.traj = integrate(start, p, s.integrator);
  r.drift = constraint_consistency(r.traj, p);
  return r;
}

void write_evolve(const Scenario& s, const EvolveResult& r) {
  const fs::path dir = prepare_dir(s.output_dir);
  {
    std::ostringstream csv;
    write_csv(r.traj, csv);
    write_file(dir / "trajectory.csv", csv.str());
  }
  json summary;
  summary["termination"] = to_string(r.traj.termination);
  summary["collapse"] = r.traj.termination == Termination::collapse;
  if (!r.traj.note.empty()) summary["note"] = r.traj.note;
  summary["samples"] = r.traj.samples.size();
  summary["initial_state"] = state_json(r.traj.samples.front().state);
  summary["final_state"] = state_json(r.traj.final_state());
  summary["max_constraint"] = r.traj.max_constraint();
  summary["max_constraint_relative"] = r.drift;
  summary["params"] = {{"lambda_eff", r.traj.params.lambda_eff}, {"alpha", r.traj.params.alpha}};
  summary["method"] = to_string(s.integrator.method);
  summary["step"] = s.integrator.step;
  if (s.integrator.method == Method::rk4 && r.traj.samples.size() >= 3) {
    try {
      summary["action"] = total_action(r.traj, r.traj.params);
    } catch (const std::invalid_argument&) {
      // non-uniform output spacing (clipped final step): no action value
    }
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

int run_evolve(const Scenario& s, std::ostream& log) {
  const EvolveResult r = evolve(s);
  write_evolve(s, r);
  const PhaseState& f = r.traj.final_state();
  log << fmt::format("evolve: {} at t = {:.17g}: a1 = {:.17g}, a2 = {:.17g}, max |r0| = {:.3e}\n",
                     to_string(r.traj.termination), f.t, f.a1, f.a2, r.traj.max_constraint());
  if (!r.traj.note.empty()) log << "  " << r.traj.note << "\n";
  return kExitOk;
}

int run_perturb(const Scenario& s, std::ostream& log) {
  const ModelSpec& m = *s.model;
  const PerturbationModel model = PerturbationModel::make(m.kind, *s.params, m.a0);
  const IntegratorConfig& c = s.integrator;
  const Jet2 r0 = closed_form_solution(model, c.t0, m.c1, m.c2, m.argument);
  const LinearSolution num = solve_linear(model, c.t0, c.t1, c.step, r0.value, r0.d1);

  const fs::path dir = prepare_dir(s.output_dir);
  std::ostringstream csv;
  csv << "t,r_numeric,dr_numeric,r_closed,dr_closed,abs_diff,closed_residual,linearized_residual\n";
  double r_max = 0.0;
  double diff_max = 0.0;
  double closed_max = 0.0;
  double lin_max = 0.0;
  for (std::size_t i = 0; i < num.t.size(); ++i) {
    const double t = num.t[i];
    const Jet2 r = closed_form_solution(model, t, m.c1, m.c2, m.argument);
    const Jet2 a = jet_eval(model.background(), t);
    const double scale = reduce_model_scale(model, t, r);
    const double closed = scale > 0.0 ? std::abs(reduce_model(model, t, r)) / scale : 0.0;
    const double lscale = linearized_scale(a, r, model.params());
    const double lin = lscale > 0.0 ? std::abs(linearized_residual(a, r, model.params())) / lscale : 0.0;
    const double diff = std::abs(num.r[i] - r.value);
    r_max = std::max(r_max, std::abs(r.value));
    diff_max = std::max(diff_max, diff);
    closed_max = std::max(closed_max, closed);
    lin_max = std::max(lin_max, lin);
    csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", t,
                       num.r[i], num.dr[i], r.value, r.d1, diff, closed, lin);
  }
  write_file(dir / "perturbation.csv", csv.str());

  json summary;
  summary["model"] = to_string(m.kind);
  summary["params"] = {{"lambda_eff", model.params().lambda_eff}, {"alpha", model.params().alpha}};
  summary["t_span"] = {c.t0, c.t1};
  summary["max_abs_diff"] = diff_max;
  summary["max_abs_diff_relative"] = r_max > 0.0 ? diff_max / r_max : 0.0;
  summary["max_closed_residual"] = closed_max;
  summary["max_linearized_residual"] = lin_max;
  if (m.kind == ModelKind::radiation) {
    const ArgumentScan scan = scan_radiation_argument(model.params());
    summary["argument"] = to_string(m.argument);
    summary["argument_scan"] = {{"b_reduced", scan.b_reduced},
                                {"b_printed", scan.b_printed},
                                {"residual_reduced", scan.residual_reduced},
                                {"residual_printed", scan.residual_printed},
                                {"tolerance", scan.tolerance}};
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  log << fmt::format("perturb {}: max closed-form residual {:.3e}, max |numeric - closed| / max|r| {:.3e}\n",
                     to_string(m.kind), closed_max, r_max > 0.0 ? diff_max / r_max : 0.0);
  return kExitOk;
}

int run_sweep(const Scenario& s, std::ostream& log) {
  const std::vector<SweepPoint> points = expand_sweep(s);
  const fs::path dir = prepare_dir(s.output_dir);
  struct Outcome {
    std::string status = "ok";
    EvolveResult result;
  };
  std::vector<Outcome> outcomes(points.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        outcomes[i].result = evolve(points[i].scenario);
        write_evolve(points[i].scenario, outcomes[i].result);
      } catch (const std::exception& e) {
        outcomes[i].status = fmt::format("error: {}", e.what());
      }
    }
  };
  unsigned n = s.workers > 0 ? static_cast<unsigned>(s.workers) : std::thread::hardware_concurrency();
  n = std::clamp<unsigned>(n, 1U, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1)));
  std::vector<std::jthread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  pool.clear();

  std::ostringstream index;
  index << "point,lambda_eff,alpha,epsilon,directory,status,termination,final_t,final_a1,final_a2,max_constraint\n";
  int failed = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SweepPoint& p = points[i];
    const Outcome& o = outcomes[i];
    std::string status = o.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    if (o.status == "ok") {
      const PhaseState& f = o.result.traj.final_state();
      index << fmt::format("{},{:.17g},{:.17g},{:.17g},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", i,
                           p.lambda_eff, p.alpha, p.epsilon, p.subdir, status,
                           to_string(o.result.traj.termination), f.t, f.a1, f.a2,
                           o.result.traj.max_constraint());
    } else {
      ++failed;
      index << fmt::format("{},{:.17g},{:.17g},{:.17g},{},\"{}\",,,,,\n", i, p.lambda_eff, p.alpha,
                           p.epsilon, p.subdir, status);
    }
  }
  write_file(dir / "index.csv", index.str());
  log << fmt::format("sweep: {} points ({} failed) on {} worker(s) -> {}\n", points.size(), failed, n,
                     (dir / "index.csv").string());
  return failed > 0 ? kExitError : kExitOk;
}

}  // namespace

int run_scenario(const Scenario& s, std::ostream& log) {
  switch (s.mode) {
    case Mode::verify: return run_verify(s, log);
    case Mode::evolve: return run_evolve(s, log);
    case Mode::perturb: return run_perturb(s, log);
    case Mode::sweep: return run_sweep(s, log);
  }
  return kExitError;
}

}  // namespace sflrw::cli
