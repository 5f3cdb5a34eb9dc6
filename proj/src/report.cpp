#include "wk/report.hpp"

#include "wk/error.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wk {

using nlohmann::json;

namespace {

void dump(const json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, child] : v.items()) {  // std::map: already sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        dump(child, indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(v[i], indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json mu_constants(const std::vector<std::pair<MultiIndex, double>>& c) {
  json out = json::array();
  for (const auto& [mu, v] : c) out.push_back({{"mu", mu.components()}, {"value", v}});
  return out;
}

}  // namespace

std::string canonical_json(const json& value) {
  std::string out;
  dump(value, 0, out);
  out += '\n';
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::Io, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

json to_json(const Point& x) {
  json out = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x[i]);
  return out;
}

json to_json(const CheckReport& r) {
  json failing = json::array();
  for (const Point& x : r.failing) failing.push_back(to_json(x));
  return {{"name", r.name},
          {"pass", r.pass},
          {"worst", r.worst},
          {"worst_at", to_json(r.worst_at)},
          {"points", r.points},
          {"skipped", r.skipped},
          {"violations", r.violations},
          {"failing", failing},
          {"integral", optional_number(r.integral)},
          {"shell_max", optional_number(r.shell_max)},
          {"message", r.message}};
}

json to_json(const SeminormValue& v) {
  return {{"value", v.value},
          {"form", to_string(v.form)},
          {"gamma", v.gamma},
          {"m", v.m},
          {"p", optional_number(v.p)},
          {"grid", v.grid},
          {"path", to_string(v.path)},
          {"boundary_max", v.boundary_max},
          {"argmax", to_json(v.argmax)}};
}

json to_json(const EquivalenceCertificate& c, const DefiningFamily& f) {
  return {{"gamma", f.label(c.gamma)},
          {"m", c.m},
          {"p", c.p},
          {"gamma_prime", f.label(c.gamma1)},
          {"gamma_double_prime", f.label(c.gamma2)},
          {"gamma_tilde", f.label(c.gamma_tilde)},
          {"degenerate_chain", c.degenerate_chain},
          {"m_tilde", c.m_tilde},
          {"mollifier", {{"kind", "exp(-1/(1-|x/r|^2))"}, {"radius", c.mollifier_radius}}},
          {"C", c.C},
          {"C_mu", mu_constants(c.c_mu)},
          {"C_prime", c.c_prime},
          {"q_m_tilde", c.q_m_tilde},
          {c.p > 1.0 ? "J" : "L_sup", c.J},
          {"A", c.A},
          {"check_4s", to_json(c.check_4s)},
          {"check_5s", to_json(c.check_5s)},
          {"grid", c.grid}};
}

json to_json(const EquivalenceReport& r, const DefiningFamily& f) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"function", e.label},
                       {"lhs", e.lhs},
                       {"rhs", e.rhs},
                       {"ratio", e.ratio},
                       {"reverse_lhs", e.reverse_lhs},
                       {"reverse_rhs", e.reverse_rhs},
                       {"reverse_ratio", e.reverse_ratio},
                       {"pass", e.pass}});
  return {{"certificate", to_json(r.certificate, f)},
          {"reverse_gamma", f.label(r.reverse_gamma)},
          {"A2", r.A2},
          {"entries", entries},
          {"max_ratio", r.max_ratio},
          {"max_reverse_ratio", r.max_reverse_ratio},
          {"violations", r.violations},
          {"pass", r.pass}};
}

json to_json(const PietschReport& r, const DefiningFamily& f) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"function", e.label}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"margin", e.margin}, {"pass", e.pass}});
  return {{"certificate", to_json(r.certificate, f)},
          {"gamma_tilde_prime", f.label(r.gamma_t1)},
          {"gamma_tilde_double_prime", f.label(r.gamma_t2)},
          {"C", r.C2},
          {"check_lower", to_json(r.check_lower)},
          {"check_upper", to_json(r.check_upper)},
          {"entries", entries},
          {"min_margin", r.min_margin},
          {"measure", "discretized on the working quadrature mesh"},
          {"pass", r.pass}};
}

json to_json(const CutoffReport& r) {
  json tails = json::array();
  for (const auto& t : r.tails)
    tails.push_back({{"n", t.n},
                     {"value", t.value.value},
                     {"tail_integral", t.tail},
                     {"majorant", t.majorant},
                     {"within", t.within}});
  return {{"leibniz_constant", r.leibniz_constant}, {"tails", tails}, {"pass", r.pass}};
}

json to_json(const BoundReport& r, const DefiningFamily& f) {
  return {{"function", r.label}, {"lhs", r.lhs},         {"rhs", r.rhs},          {"C", r.C},
          {"gamma_prime", f.label(r.gamma_prime)},        {"factor", r.factor},    {"pass", r.pass}};
}

json to_json(const MeanValueReport& r) {
  return {{"center", {r.center.real(), r.center.imag()}},
          {"average", {r.average.real(), r.average.imag()}},
          {"residual", r.residual},
          {"pass", r.pass}};
}

json to_json(const AnalyticEquivalenceReport& r, const DefiningFamily& f) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"function", e.label},
                       {"sup", e.sup},
                       {"lp_prime", e.lp_prime},
                       {"backward_rhs", e.backward_rhs},
                       {"lp", e.lp},
                       {"sup_prime", e.sup_prime},
                       {"forward_rhs", e.forward_rhs},
                       {"pass", e.pass}});
  return {{"gamma_II", f.label(r.gamma_ii)},
          {"gamma_I", f.label(r.gamma_i)},
          {"C", r.C},
          {"r", r.r},
          {"backward_constant", r.backward_constant},
          {"A", r.A},
          {"entries", entries},
          {"pass", r.pass}};
}

json to_json(const DiffReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"points", l.points}, {"spacing", l.spacing}, {"max_error", l.max_error}});
  return {{"mu", r.mu.components()},
          {"levels", levels},
          {"ratios", r.ratios},
          {"orders", r.orders},
          {"exact_rhs", r.exact_rhs},
          {"exact_error", optional_number(r.exact_error)}};
}

json to_json(const DecayReport& r) {
  return {{"classification", to_string(r.classification)},
          {"fit_slope", r.fit_slope},
          {"r_at_1e-8", r.rank_at_target ? json(*r.rank_at_target) : json(nullptr)},
          {"monotone", r.monotone},
          {"significant", r.significant},
          {"norm", r.norm}};
}

std::string decay_csv(const DecayReport& r) {
  std::string out = "rank,singular_value,residual\n";
  char buf[96];
  for (const auto& row : r.table) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", row.rank, row.singular_value, row.residual);
    out += buf;
  }
  return out;
}

ReportWriter::ReportWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
}

const Artifact& ReportWriter::write(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
  artifacts_.push_back({name, sha256_hex(content), content.size()});
  return artifacts_.back();
}

}  // namespace wk
