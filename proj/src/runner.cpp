#include "wk/runner.hpp"

#include "wk/corpus.hpp"
#include "wk/error.hpp"
#include "wk/family_json.hpp"
#include "wk/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <ostream>
#include <set>

namespace wk {

using nlohmann::json;

namespace {

struct TypeInfo {
  const char* type;
  Command command;
};

constexpr TypeInfo kTypes[] = {
    {"condition-a", Command::CheckFamily},   {"condition-c", Command::CheckFamily},
    {"condition-I", Command::CheckFamily},   {"condition-II", Command::CheckFamily},
    {"conditions", Command::CheckFamily},    {"seminorm", Command::Seminorm},
    {"cutoff-tail", Command::Seminorm},      {"equivalence", Command::Equivalence},
    {"analytic-equivalence", Command::Equivalence}, {"cauchy-bound", Command::Equivalence},
    {"mean-value", Command::Equivalence},    {"nuclearity", Command::Nuclearity},
    {"kernel-diff", Command::KernelDiff},    {"kernel-decompose", Command::KernelDecompose},
};

const TypeInfo* type_info(const std::string& type) {
  for (const TypeInfo& t : kTypes)
    if (type == t.type) return &t;
  return nullptr;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

struct Outcome {
  bool pass = false;
  std::string summary;
  json report = json::object();
  std::vector<std::pair<std::string, std::string>> extras;  // file suffix, content
};

using cplx = std::complex<double>;

cplx complex_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  fail(ErrorKind::InvalidArgument, "complex numbers are written as a number or [re, im]");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// Resolves named sections lazily and caches what it builds.
class Context {
 public:
  Context(const RunConfig& config, const RunOptions& options) : config_(config), options_(options) {
    for (const auto& [name, desc] : config.families.items()) families_.emplace(name, family_from_json(desc));
  }

  const RunConfig& config() const { return config_; }

  // -- the check being run -------------------------------------------------

  void begin(const json& check, std::string name) {
    check_ = &check;
    name_ = std::move(name);
  }
  const std::string& name() const { return name_; }

  [[noreturn]] void invalid(const std::string& what) const {
    fail(ErrorKind::InvalidArgument, "check '" + name_ + "': " + what);
  }

  bool has(const char* key) const { return check_->contains(key); }
  const json& req(const char* key) const {
    if (!check_->contains(key)) invalid(std::string("missing '") + key + "'");
    return check_->at(key);
  }
  double number(const char* key) const {
    const json& v = req(key);
    if (!v.is_number()) invalid(std::string("'") + key + "' must be a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }
  int integer(const char* key) const {
    const json& v = req(key);
    if (!v.is_number_integer()) invalid(std::string("'") + key + "' must be an integer");
    return v.get<int>();
  }
  int integer(const char* key, int fallback) const { return has(key) ? integer(key) : fallback; }
  std::string string(const char* key) const {
    const json& v = req(key);
    if (!v.is_string()) invalid(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string string(const char* key, const std::string& fallback) const { return has(key) ? string(key) : fallback; }

  double tol(double fallback) const {
    if (options_.tol) return *options_.tol;
    const double t = has("tol") ? number("tol") : fallback;
    if (!(t > 0.0)) invalid("tolerances must be positive");
    return t;
  }
  double tol() const { return tol(config_.tolerance); }

  // -- named resources -----------------------------------------------------

  const DefiningFamily& family(const std::string& name) const {
    const auto it = families_.find(name);
    if (it == families_.end()) invalid("unknown family '" + name + "'");
    return it->second;
  }
  const DefiningFamily& family() const { return family(string("family")); }

  std::size_t index(const std::string& fam, const json& ref) const {
    const DefiningFamily& F = family(fam);
    try {
      if (ref.is_number()) return F.index_of(ref.get<double>());
      if (ref.is_string()) return F.index_of(ref.get<std::string>());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotFound) invalid("family '" + fam + "' has no index " + ref.dump());
      throw;
    }
    invalid("index references are numbers or labels");
  }
  std::size_t index(const char* key) const { return index(string("family"), req(key)); }

  const Grid& grid(const std::string& name) {
    if (auto it = grids_.find(name); it != grids_.end()) return it->second;
    if (!config_.grids.contains(name)) invalid("unknown grid '" + name + "'");
    return grids_.emplace(name, grid_from_json(config_.grids.at(name))).first->second;
  }
  const Grid& grid() { return grid(string("grid")); }

  bool function_is_complex(const std::string& name) const {
    if (!config_.functions.contains(name)) invalid("unknown function '" + name + "'");
    return config_.functions.at(name).contains("entire");
  }
  const RealFunction& real_function(const std::string& name);
  const ComplexFunction& complex_function(const std::string& name);
  const std::vector<RealFunction>& real_corpus(const std::string& name);
  const std::vector<ComplexFunction>& complex_corpus(const std::string& name);
  const TwoVariableFunction& kernel(const std::string& name);
  WeightFunction kernel_weight(const char* key, const Grid& grid) const;

  /// Catches everything the run phase cannot recover from as a config error.
  void validate(const json& check, const std::string& name);

 private:
  const RunConfig& config_;
  const RunOptions& options_;
  std::map<std::string, DefiningFamily> families_;
  std::map<std::string, Grid> grids_;
  std::map<std::string, RealFunction> real_functions_;
  std::map<std::string, ComplexFunction> complex_functions_;
  std::map<std::string, std::vector<RealFunction>> real_corpora_;
  std::map<std::string, std::vector<ComplexFunction>> complex_corpora_;
  std::map<std::string, TwoVariableFunction> kernels_;
  const json* check_ = nullptr;
  std::string name_;
};

const RealFunction& Context::real_function(const std::string& name) {
  if (auto it = real_functions_.find(name); it != real_functions_.end()) return it->second;
  if (function_is_complex(name)) invalid("function '" + name + "' is complex-valued here");
  const json& d = config_.functions.at(name);
  RealFunction f;
  if (d.contains("file")) {
    std::filesystem::path path = d.at("file").get<std::string>();
    if (path.is_relative()) path = config_.base_dir / path;
    if (!std::filesystem::exists(path)) fail(ErrorKind::NotFound, "function file not found: " + path.string());
    f = read_grid_values(path.string());
  } else if (d.contains("expression")) {
    if (!d.contains("grid")) invalid("function '" + name + "' needs a grid");
    f = function_from_expression(grid(d.at("grid").get<std::string>()), d.at("expression").get<std::string>());
  } else {
    invalid("function '" + name + "' needs 'expression', 'file' or 'entire'");
  }
  if (d.contains("scale")) f = f.scaled(d.at("scale").get<double>());
  f.set_label(d.value("label", name));
  return real_functions_.emplace(name, std::move(f)).first->second;
}

const ComplexFunction& Context::complex_function(const std::string& name) {
  if (auto it = complex_functions_.find(name); it != complex_functions_.end()) return it->second;
  if (!function_is_complex(name)) invalid("function '" + name + "' is not declared entire");
  const json& d = config_.functions.at(name);
  if (!d.contains("grid")) invalid("function '" + name + "' needs a grid");
  const Grid& g = grid(d.at("grid").get<std::string>());
  const json& e = d.at("entire");
  ComplexFunction f;
  if (e.contains("polynomial")) {
    std::vector<cplx> coeffs;
    for (const json& c : e.at("polynomial")) coeffs.push_back(complex_from_json(c));
    f = entire_polynomial(std::move(coeffs), g);
  } else if (e.contains("exponential")) {
    f = entire_exponential(complex_from_json(e.at("exponential")), g);
  } else {
    invalid("entire function '" + name + "' needs 'polynomial' or 'exponential'");
  }
  if (d.contains("scale")) f = f.scaled(complex_from_json(d.at("scale")));
  f.set_label(d.value("label", name));
  return complex_functions_.emplace(name, std::move(f)).first->second;
}

const std::vector<RealFunction>& Context::real_corpus(const std::string& name) {
  if (auto it = real_corpora_.find(name); it != real_corpora_.end()) return it->second;
  if (!config_.corpora.contains(name)) invalid("unknown corpus '" + name + "'");
  const json& d = config_.corpora.at(name);
  std::vector<RealFunction> out;
  if (d.contains("functions")) {
    for (const json& f : d.at("functions")) out.push_back(real_function(f.get<std::string>()));
  } else {
    const CorpusKind kind = corpus_kind_from_string(d.at("kind").get<std::string>());
    if (kind == CorpusKind::Entire) invalid("corpus '" + name + "' is complex-valued here");
    out = make_corpus(kind, d.at("n").get<int>(), grid(d.at("grid").get<std::string>()));
  }
  return real_corpora_.emplace(name, std::move(out)).first->second;
}

const std::vector<ComplexFunction>& Context::complex_corpus(const std::string& name) {
  if (auto it = complex_corpora_.find(name); it != complex_corpora_.end()) return it->second;
  if (!config_.corpora.contains(name)) invalid("unknown corpus '" + name + "'");
  const json& d = config_.corpora.at(name);
  std::vector<ComplexFunction> out;
  if (d.contains("functions")) {
    for (const json& f : d.at("functions")) out.push_back(complex_function(f.get<std::string>()));
  } else {
    if (corpus_kind_from_string(d.at("kind").get<std::string>()) != CorpusKind::Entire)
      invalid("corpus '" + name + "' is not an entire corpus");
    out = make_entire_corpus(d.at("n").get<int>(), grid(d.at("grid").get<std::string>()));
  }
  return complex_corpora_.emplace(name, std::move(out)).first->second;
}

const TwoVariableFunction& Context::kernel(const std::string& name) {
  if (auto it = kernels_.find(name); it != kernels_.end()) return it->second;
  if (!config_.kernels.contains(name)) invalid("unknown kernel '" + name + "'");
  const json& d = config_.kernels.at(name);
  if (d.contains("separable")) {
    const json& s = d.at("separable");
    const RealFunction& f = real_function(s.at("left").get<std::string>());
    const RealFunction& g = real_function(s.at("right").get<std::string>());
    return kernels_.emplace(name, TwoVariableFunction::separable(f, g)).first->second;
  }
  if (!d.contains("expression")) invalid("kernel '" + name + "' needs 'expression' or 'separable'");
  const Grid& xg = grid(d.at("x_grid").get<std::string>());
  const Grid& yg = grid(d.at("y_grid").get<std::string>());
  return kernels_
      .emplace(name, TwoVariableFunction::from_expression(xg, yg, d.at("expression").get<std::string>()))
      .first->second;
}

WeightFunction Context::kernel_weight(const char* key, const Grid& grid) const {
  if (!has(key) || (req(key).is_string() && req(key).get<std::string>() == "unit")) {
    WeightFunction w;
    w.dim = grid.dim();
    w.eval = [](PointRef) { return 1.0; };
    return w;
  }
  const json& d = req(key);
  if (!d.is_object() || !d.contains("family") || !d.contains("gamma"))
    invalid(std::string("'") + key + "' must be \"unit\" or {\"family\", \"gamma\"}");
  const std::string fam = d.at("family").get<std::string>();
  const DefiningFamily& F = family(fam);
  if (F.dim() != grid.dim()) invalid(std::string("'") + key + "' family dimension does not match the kernel grid");
  return F.weight(index(fam, d.at("gamma")));
}

void Context::validate(const json& check, const std::string& name) {
  begin(check, name);
  if (has("tol")) tol();
  if (has("family")) {
    const std::string fam = string("family");
    family(fam);
    for (const char* key : {"gamma", "gamma1", "gamma2"})
      if (has(key)) index(fam, req(key));
  }
  for (const char* key : {"x_weight", "y_weight"}) {
    if (!has(key) || !req(key).is_object()) continue;
    const json& d = req(key);
    if (!d.contains("family") || !d.contains("gamma")) invalid(std::string("'") + key + "' needs family and gamma");
    index(d.at("family").get<std::string>(), d.at("gamma"));
  }
  if (has("grid") && !config_.grids.contains(string("grid"))) invalid("unknown grid '" + string("grid") + "'");
  if (has("function") && !config_.functions.contains(string("function")))
    invalid("unknown function '" + string("function") + "'");
  if (has("corpus") && !config_.corpora.contains(string("corpus")))
    invalid("unknown corpus '" + string("corpus") + "'");
  if (has("kernel") && !config_.kernels.contains(string("kernel")))
    invalid("unknown kernel '" + string("kernel") + "'");
}

// ---------------------------------------------------------------------------
// Truncation flags: boundary-shell mass relative to the value, per function.

template <typename Scalar>
json truncation(const std::vector<SampledFunction<Scalar>>& fs, const DefiningFamily& F, std::size_t gamma, int m,
                double tail_tol) {
  double worst = 0.0;
  for (const auto& f : fs) {
    const SeminormValue v = sup_seminorm(f, F, gamma, m);
    if (v.value > 0.0) worst = std::max(worst, v.boundary_max / v.value);
  }
  return {{"max_boundary_ratio", worst}, {"tail_tolerance", tail_tol}, {"suspect", worst > tail_tol}};
}

double tail_tol(const Context& c) { return c.number("tail_tol", 1e-6); }

// ---------------------------------------------------------------------------
// Check handlers

json check_with_labels(const CheckReport& r, const Context& c) {
  json j = to_json(r);
  j["family"] = c.string("family");
  return j;
}

Outcome condition_a(Context& c) {
  const DefiningFamily& F = c.family();
  CheckOptions o;
  o.tol = c.tol();
  const CheckReport r = check_condition_a(F, c.index("gamma1"), c.index("gamma2"), c.index("gamma"),
                                          c.number("C"), c.grid(), o);
  return {r.pass, "worst ratio " + fmt(r.worst), check_with_labels(r, c), {}};
}

Outcome condition_c(Context& c) {
  CheckOptions o;
  o.tol = c.tol();
  const CheckReport r = check_condition_c(c.family(), c.grid(), o);
  return {r.pass, std::to_string(r.violations) + " uncovered points", check_with_labels(r, c), {}};
}

CheckOptions condition_options(const Context& c) {
  CheckOptions o;
  o.tol = c.tol();
  o.decay_threshold = c.number("decay_threshold", o.decay_threshold);
  return o;
}

Outcome condition_I(Context& c) {
  const CheckReport r = check_condition_I(c.family(), c.index("gamma"), c.grid(), c.number("p", 1.0),
                                          condition_options(c));
  return {r.pass, "worst ratio " + fmt(r.worst) + ", int L^p " + fmt(r.integral.value_or(NAN)),
          check_with_labels(r, c), {}};
}

Outcome condition_II(Context& c) {
  const auto samples = static_cast<std::size_t>(c.integer("ball_samples", 32));
  const CheckReport r = check_condition_II(c.family(), c.index("gamma"), c.grid(), samples, condition_options(c));
  return {r.pass, "worst ratio " + fmt(r.worst), check_with_labels(r, c), {}};
}

Outcome conditions(Context& c) {
  const DefiningFamily& F = c.family();
  const Grid& g = c.grid();
  const CheckOptions o = condition_options(c);
  const double p = c.number("p", 1.0);
  const auto samples = static_cast<std::size_t>(c.integer("ball_samples", 32));
  std::vector<CheckReport> reports{check_condition_c(F, g, o)};
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F.has_cond_i(i)) reports.push_back(check_condition_I(F, i, g, p, o));
    if (F.has_cond_ii(i)) reports.push_back(check_condition_II(F, i, g, samples, o));
  }
  if (c.has("condition_a")) {
    for (const json& a : c.req("condition_a")) {
      const std::string fam = c.string("family");
      reports.push_back(check_condition_a(F, c.index(fam, a.at("gamma1")), c.index(fam, a.at("gamma2")),
                                          c.index(fam, a.at("gamma")), a.at("C").get<double>(), g, o));
    }
  }
  Outcome out;
  out.pass = true;
  std::size_t failed = 0;
  json list = json::array();
  for (const CheckReport& r : reports) {
    out.pass = out.pass && r.pass;
    failed += r.pass ? 0 : 1;
    list.push_back(to_json(r));
  }
  out.report = {{"family", c.string("family")}, {"grid", g.describe()}, {"checks", list}};
  out.summary = std::to_string(reports.size() - failed) + "/" + std::to_string(reports.size()) + " conditions hold";
  return out;
}

Outcome seminorm(Context& c) {
  const DefiningFamily& F = c.family();
  const std::size_t gamma = c.index("gamma");
  const std::string form = c.string("form", "sup");
  const std::string fn = c.string("function");
  const int m = c.integer("m", 0);
  SeminormValue v;
  json trunc;
  auto eval = [&](const auto& f) {
    if (form == "sup") {
      v = sup_seminorm(f, F, gamma, m);
    } else if (form == "lp") {
      v = lp_seminorm(f, F, gamma, m, c.number("p"));
    } else if (form == "analytic-sup") {
      v = analytic_sup_seminorm(f, F, gamma);
    } else if (form == "analytic-lp") {
      v = analytic_lp_seminorm(f, F, gamma, c.number("p"));
    } else {
      c.invalid("unknown seminorm form '" + form + "'");
    }
    trunc = truncation(std::vector{f}, F, gamma, form.starts_with("analytic") ? 0 : m, tail_tol(c));
  };
  if (c.function_is_complex(fn)) {
    eval(c.complex_function(fn));
  } else {
    eval(c.real_function(fn));
  }
  Outcome out;
  out.report = to_json(v);
  out.report["family"] = c.string("family");
  out.report["gamma"] = F.label(gamma);
  out.report["function"] = fn;
  out.report["truncation"] = trunc;
  out.pass = std::isfinite(v.value);
  out.summary = form + " seminorm " + fmt(v.value);
  if (c.has("expected")) {
    const double e = c.number("expected");
    const double t = c.has("expected_tol") ? c.number("expected_tol") : c.tol();
    out.report["expected"] = e;
    out.report["expected_tol"] = t;
    out.report["error"] = std::abs(v.value - e);
    out.pass = out.pass && std::abs(v.value - e) <= t;
    out.summary += " (expected " + fmt(e) + ")";
  }
  return out;
}

Outcome cutoff_tail(Context& c) {
  const DefiningFamily& F = c.family();
  const std::size_t gamma = c.index("gamma");
  const int m = c.integer("m", 0);
  const RealFunction& f = c.real_function(c.string("function"));
  const std::vector<double> ns = c.req("n").get<std::vector<double>>();
  const CutoffReport r = cutoff_tail_norms(f, F, gamma, m, c.number("p", 1.0), ns, c.tol());
  Outcome out{r.pass, std::to_string(r.tails.size()) + " cutoffs within the majorant", to_json(r), {}};
  if (!r.pass) out.summary = "cutoff norm exceeds the majorant";
  out.report["truncation"] = truncation(std::vector{f}, F, gamma, m, tail_tol(c));
  return out;
}

SmoothingOptions smoothing(const Context& c) {
  SmoothingOptions o;
  if (c.has("mollifier_radius")) o.mollifier_radius = c.number("mollifier_radius");
  o.ball_points = c.integer("ball_points", 0);
  return o;
}

Outcome equivalence(Context& c, bool certificate) {
  const DefiningFamily& F = c.family();
  const std::size_t gamma = c.index("gamma");
  const int m = c.integer("m", 0);
  const auto& corpus = c.real_corpus(c.string("corpus"));
  const EquivalenceReport r =
      verify_norm_equivalence(F, gamma, m, c.number("p"), corpus, c.tol(1e-6), smoothing(c));
  Outcome out{r.pass,
              "A = " + fmt(r.certificate.A) + ", max ratio " + fmt(r.max_ratio) + ", max reverse ratio " +
                  fmt(r.max_reverse_ratio) + ", " + std::to_string(r.violations) + " violations",
              to_json(r, F),
              {}};
  out.report["truncation"] = truncation(corpus, F, gamma, m, tail_tol(c));
  if (certificate) out.extras.emplace_back(".certificate.json", canonical_json(to_json(r.certificate, F)));
  return out;
}

Outcome nuclearity(Context& c, bool certificate) {
  const DefiningFamily& F = c.family();
  const std::size_t gamma = c.index("gamma");
  const int m = c.integer("m", 0);
  const auto& corpus = c.real_corpus(c.string("corpus"));
  const PietschReport r = verify_pietsch_bound(F, gamma, m, corpus, c.tol(1e-6), smoothing(c));
  Outcome out{r.pass, "min rhs/lhs " + fmt(r.min_margin), to_json(r, F), {}};
  out.report["truncation"] = truncation(corpus, F, gamma, m, tail_tol(c));
  if (certificate) out.extras.emplace_back(".certificate.json", canonical_json(to_json(r.certificate, F)));
  return out;
}

std::vector<ComplexFunction> complex_inputs(Context& c) {
  if (c.has("corpus")) return c.complex_corpus(c.string("corpus"));
  if (c.has("function")) return {c.complex_function(c.string("function"))};
  c.invalid("needs 'corpus' or 'function'");
}

Outcome analytic_equivalence(Context& c) {
  const DefiningFamily& F = c.family();
  const std::size_t gamma = c.index("gamma");
  const auto fs = complex_inputs(c);
  const AnalyticEquivalenceReport r =
      verify_analytic_lp_equivalence(F, gamma, c.number("p"), fs, c.number("r"), c.tol());
  std::size_t failed = 0;
  for (const auto& e : r.entries) failed += e.pass ? 0 : 1;
  Outcome out{r.pass, std::to_string(failed) + " of " + std::to_string(r.entries.size()) + " functions violate",
              to_json(r, F), {}};
  out.report["truncation"] = truncation(fs, F, gamma, 0, tail_tol(c));
  return out;
}

Outcome cauchy_bound(Context& c) {
  const DefiningFamily& F = c.family();
  const std::size_t gamma = c.index("gamma");
  const int m = c.integer("m", 0);
  const double r = c.number("r");
  const auto fs = complex_inputs(c);
  Outcome out;
  out.pass = true;
  double worst = 0.0;
  json entries = json::array();
  for (const ComplexFunction& f : fs) {
    const BoundReport b = cauchy_derivative_bound(f, F, gamma, m, r, c.tol());
    out.pass = out.pass && b.pass;
    if (b.rhs > 0.0) worst = std::max(worst, b.lhs / b.rhs);
    entries.push_back(to_json(b, F));
  }
  out.report = {{"family", c.string("family")}, {"m", m}, {"r", r}, {"entries", entries}, {"max_ratio", worst},
                {"truncation", truncation(fs, F, gamma, m, tail_tol(c))}};
  out.summary = "max lhs/rhs " + fmt(worst);
  return out;
}

Outcome mean_value(Context& c) {
  const cplx z0 = c.has("z0") ? complex_from_json(c.req("z0")) : cplx{};
  const double r = c.number("r");
  const auto points = static_cast<Eigen::Index>(c.integer("points", 401));
  const double t = c.tol(1e-8);
  Outcome out;
  out.pass = true;
  double worst = 0.0;
  json entries = json::array();
  for (const ComplexFunction& f : complex_inputs(c)) {
    const MeanValueReport m = mean_value_check(f, z0, r, points, t);
    out.pass = out.pass && m.pass;
    worst = std::max(worst, m.residual);
    json j = to_json(m);
    j["label"] = f.label();
    entries.push_back(std::move(j));
  }
  out.report = {{"z0", complex_to_json(z0)}, {"r", r}, {"points", points}, {"tol", t}, {"entries", entries},
                {"max_residual", worst}};
  out.summary = "max residual " + fmt(worst);
  return out;
}

DiscreteFunctional functional_from_json(const Context& c, const json& d, const Grid& y_grid) {
  auto point = [&](const json& p) {
    const auto v = p.is_array() ? p.get<std::vector<double>>() : std::vector<double>{p.get<double>()};
    if (static_cast<int>(v.size()) != y_grid.dim()) c.invalid("functional point has the wrong dimension");
    return Point(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  if (d.contains("delta")) return DiscreteFunctional::delta(point(d.at("delta")));
  if (d.contains("integral")) return DiscreteFunctional::integral(y_grid);
  if (d.contains("terms")) {
    std::vector<DiscreteFunctional::Term> terms;
    for (const json& t : d.at("terms")) terms.push_back({point(t.at("point")), t.at("coeff").get<double>()});
    return DiscreteFunctional::combination(std::move(terms));
  }
  c.invalid("functional must be {\"delta\"}, {\"integral\"} or {\"terms\"}");
}

Outcome kernel_diff(Context& c) {
  const TwoVariableFunction& h = c.kernel(c.string("kernel"));
  const DiscreteFunctional v = functional_from_json(c, c.req("functional"), h.y_grid());
  const int k1 = h.x_grid().dim();
  const MultiIndex mu = c.has("mu") ? MultiIndex(c.req("mu").get<std::vector<int>>()) : MultiIndex::unit(k1, 0);
  std::vector<Eigen::Index> levels;
  if (c.has("levels")) {
    for (const json& l : c.req("levels")) levels.push_back(l.get<Eigen::Index>());
  }
  const DiffReport r = check_diff_identity(h, v, mu, levels);
  Outcome out{true, "", to_json(r), {}};
  out.report["kernel"] = c.string("kernel");
  for (const DiffLevel& l : r.levels) out.pass = out.pass && std::isfinite(l.max_error);
  if (c.has("ratio_range")) {
    const auto range = c.req("ratio_range").get<std::vector<double>>();
    if (range.size() != 2) c.invalid("'ratio_range' is [lo, hi]");
    for (double q : r.ratios) out.pass = out.pass && q >= range[0] && q <= range[1];
    out.report["ratio_range"] = range;
  }
  if (c.has("max_error")) {
    const double bound = c.number("max_error");
    const double err = r.exact_error ? *r.exact_error : r.levels.back().max_error;
    out.pass = out.pass && err <= bound;
    out.report["max_error"] = bound;
  }
  std::string ratios;
  for (double q : r.ratios) ratios += (ratios.empty() ? "" : " ") + fmt(q);
  out.summary = r.ratios.empty() ? "error " + fmt(r.levels.back().max_error) : "error ratios " + ratios;
  if (r.exact_error) out.summary += ", exact-derivative error " + fmt(*r.exact_error);
  return out;
}

Outcome kernel_decompose(Context& c) {
  const TwoVariableFunction& h = c.kernel(c.string("kernel"));
  const WeightFunction mx = c.kernel_weight("x_weight", h.x_grid());
  const WeightFunction ny = c.kernel_weight("y_weight", h.y_grid());
  DecayThresholds th;
  th.noise_floor = c.number("noise_floor", th.noise_floor);
  th.residual_target = c.number("residual_target", th.residual_target);
  const int r_max = c.integer("r_max", c.integer("rank", 50));
  if (r_max < 1) c.invalid("'r_max' must be >= 1");

  Outcome out;
  out.pass = true;
  Eigen::VectorXd s;
  json report = {{"kernel", c.string("kernel")}, {"x_grid", h.x_grid().describe()}, {"y_grid", h.y_grid().describe()}};
  if (c.has("rank")) {
    const SeparableApproximation a = separable_approx(h, mx, ny, c.integer("rank"));
    s = a.singular_values;
    report["rank"] = a.rank;
    report["residual"] = a.residual;
    report["dropped_rows"] = a.dropped_rows.size();
    report["dropped_cols"] = a.dropped_cols.size();
    out.summary = "residual " + fmt(a.residual) + " at rank " + std::to_string(a.rank);
    if (c.has("residual_max")) {
      const double bound = c.number("residual_max");
      report["residual_max"] = bound;
      out.pass = a.residual < bound;
    }
  } else {
    s = weighted_singular_values(h, mx, ny);
  }
  const DecayReport d = classify_decay(s, std::min<int>(r_max, static_cast<int>(s.size())), th);
  report["decay"] = to_json(d);
  const Eigen::Index shown = std::min<Eigen::Index>(r_max, s.size());
  report["singular_values"] = std::vector<double>(s.data(), s.data() + shown);
  if (!out.summary.empty()) out.summary += ", ";
  out.summary += std::string("decay ") + to_string(d.classification);
  if (c.has("expect_class")) {
    const std::string want = c.string("expect_class");
    report["expect_class"] = want;
    out.pass = out.pass && want == to_string(d.classification);
  }
  out.report = std::move(report);
  out.extras.emplace_back(".decay.csv", decay_csv(d));
  return out;
}

Outcome dispatch(Context& c, const std::string& type, bool certificate) {
  if (type == "condition-a") return condition_a(c);
  if (type == "condition-c") return condition_c(c);
  if (type == "condition-I") return condition_I(c);
  if (type == "condition-II") return condition_II(c);
  if (type == "conditions") return conditions(c);
  if (type == "seminorm") return seminorm(c);
  if (type == "cutoff-tail") return cutoff_tail(c);
  if (type == "equivalence") return equivalence(c, certificate);
  if (type == "analytic-equivalence") return analytic_equivalence(c);
  if (type == "cauchy-bound") return cauchy_bound(c);
  if (type == "mean-value") return mean_value(c);
  if (type == "nuclearity") return nuclearity(c, certificate);
  if (type == "kernel-diff") return kernel_diff(c);
  return kernel_decompose(c);
}

bool config_error(ErrorKind k) {
  return k == ErrorKind::InvalidArgument || k == ErrorKind::NotFound || k == ErrorKind::Io;
}

}  // namespace

Command command_from_string(const std::string& name) {
  static const std::map<std::string, Command> table{
      {"check-family", Command::CheckFamily},   {"seminorm", Command::Seminorm},
      {"equivalence", Command::Equivalence},    {"nuclearity", Command::Nuclearity},
      {"kernel-diff", Command::KernelDiff},     {"kernel-decompose", Command::KernelDecompose},
      {"report-all", Command::ReportAll}};
  const auto it = table.find(name);
  if (it == table.end()) fail(ErrorKind::InvalidArgument, "unknown command '" + name + "'");
  return it->second;
}

const char* to_string(Command c) {
  switch (c) {
    case Command::CheckFamily: return "check-family";
    case Command::Seminorm: return "seminorm";
    case Command::Equivalence: return "equivalence";
    case Command::Nuclearity: return "nuclearity";
    case Command::KernelDiff: return "kernel-diff";
    case Command::KernelDecompose: return "kernel-decompose";
    case Command::ReportAll: return "report-all";
  }
  return "?";
}

bool command_selects(Command c, const std::string& check_type) {
  const TypeInfo* t = type_info(check_type);
  return t && (c == Command::ReportAll || t->command == c);
}

RunResult run(Command command, const RunConfig& config, const RunOptions& options, std::ostream& out) {
  RunResult result{0, {}, {}};
  auto bail = [&](const std::string& what) {
    result.exit_code = 2;
    result.error = what;
    return result;
  };

  struct Selected {
    const json* check;
    std::string name, type;
  };
  std::vector<Selected> selected;
  std::unique_ptr<Context> ctx;
  try {
    if (options.tol && !(*options.tol > 0.0)) return bail("--tol must be positive");
    if (!(config.tolerance > 0.0)) return bail("'tolerance' must be positive");
    ctx = std::make_unique<Context>(config, options);
    std::set<std::string> names;
    for (std::size_t i = 0; i < config.checks.size(); ++i) {
      const json& check = config.checks[i];
      const std::string type = check.at("type").get<std::string>();
      if (!type_info(type)) return bail("check " + std::to_string(i + 1) + ": unknown type '" + type + "'");
      const std::string name =
          sanitize(check.contains("name") ? check.at("name").get<std::string>() : type + "-" + std::to_string(i + 1));
      if (!names.insert(name).second) return bail("duplicate check name '" + name + "'");
      if (name == "index") return bail("check name 'index' is reserved");
      ctx->validate(check, name);
      if (command_selects(command, type)) selected.push_back({&check, name, type});
    }
  } catch (const Error& e) {
    return bail(e.what());
  } catch (const json::exception& e) {
    return bail(std::string("malformed config: ") + e.what());
  }
  if (selected.empty()) return bail(std::string("no checks selected for '") + to_string(command) + "'");

  std::filesystem::path dir = options.out_dir ? *options.out_dir
                              : config.output ? std::filesystem::path(*config.output)
                                              : std::filesystem::path("reports");
  try {
    ReportWriter writer(dir);
    json index_checks = json::array();
    for (const Selected& s : selected) {
      ctx->begin(*s.check, s.name);
      Outcome o;
      try {
        o = dispatch(*ctx, s.type, options.emit_certificate);
      } catch (const Error& e) {
        if (config_error(e.kind())) return bail("check '" + s.name + "': " + e.what());
        o.pass = false;
        o.summary = e.what();
        o.report = {{"error", e.what()}};
      } catch (const json::exception& e) {
        return bail("check '" + s.name + "': malformed parameters: " + e.what());
      }
      o.report["check"] = {{"name", s.name}, {"type", s.type}, {"pass", o.pass}};
      const std::string file = s.name + ".json";
      writer.write(file, canonical_json(o.report));
      json files = json::array({file});
      for (const auto& [suffix, content] : o.extras) {
        writer.write(s.name + suffix, content);
        files.push_back(s.name + suffix);
      }
      index_checks.push_back({{"name", s.name}, {"type", s.type}, {"pass", o.pass}, {"files", files}});
      if (!options.quiet) out << (o.pass ? "PASS " : "FAIL ") << s.name << ": " << o.summary << '\n';
      if (!o.pass) result.exit_code = 1;
      result.outcomes.push_back({s.name, s.type, o.pass, o.summary});
    }
    json artifacts = json::array();
    for (const Artifact& a : writer.artifacts())
      artifacts.push_back({{"file", a.file}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    const json index = {{"command", to_string(command)},
                        {"pass", result.exit_code == 0},
                        {"checks", index_checks},
                        {"artifacts", artifacts}};
    writer.write("index.json", canonical_json(index));
  } catch (const Error& e) {
    return bail(e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return bail(std::string("cannot write reports: ") + e.what());
  }
  return result;
}

}  // namespace wk
