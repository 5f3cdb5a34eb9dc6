#include "wk/config.hpp"

#include "wk/error.hpp"

#include <fstream>

namespace wk {

using nlohmann::json;

namespace {

json section(const json& doc, const char* key) {
  if (!doc.contains(key)) return json::object();
  const json& s = doc.at(key);
  if (!s.is_object()) fail(ErrorKind::InvalidArgument, std::string("config section '") + key + "' must be an object");
  for (const auto& [name, value] : s.items()) {
    if (!value.is_object())
      fail(ErrorKind::InvalidArgument, std::string("config entry ") + key + "." + name + " must be an object");
  }
  return s;
}

}  // namespace

Grid grid_from_json(const json& desc) {
  auto axis = [](const json& a) {
    if (!a.contains("lo") || !a.contains("hi") || !a.contains("points"))
      fail(ErrorKind::InvalidArgument, "grid axis needs lo, hi and points");
    const Axis ax{a.at("lo").get<double>(), a.at("hi").get<double>(), a.at("points").get<Eigen::Index>()};
    if (ax.points < 3) fail(ErrorKind::InvalidArgument, "grid axes need at least 3 points");
    return ax;
  };
  std::vector<Axis> axes;
  if (desc.contains("axes")) {
    for (const json& a : desc.at("axes")) axes.push_back(axis(a));
  } else {
    const int dim = desc.value("dim", 1);
    if (dim < 1) fail(ErrorKind::InvalidArgument, "grid dimension must be >= 1");
    axes.assign(static_cast<std::size_t>(dim), axis(desc));
  }
  return Grid(std::move(axes));
}

namespace {

RunConfig parse_document(const json& doc, std::filesystem::path base_dir) {
  if (!doc.is_object()) fail(ErrorKind::InvalidArgument, "config must be a JSON object");
  RunConfig c;
  c.base_dir = std::move(base_dir);
  if (doc.contains("tolerance")) {
    if (!doc.at("tolerance").is_number()) fail(ErrorKind::InvalidArgument, "'tolerance' must be a number");
    c.tolerance = doc.at("tolerance").get<double>();
    if (!(c.tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "'tolerance' must be positive");
  }
  if (doc.contains("output")) c.output = doc.at("output").get<std::string>();
  c.families = section(doc, "families");
  c.grids = section(doc, "grids");
  c.functions = section(doc, "functions");
  c.corpora = section(doc, "corpora");
  c.kernels = section(doc, "kernels");
  for (const auto& [name, g] : c.grids.items()) {
    try {
      (void)grid_from_json(g);
    } catch (const Error& e) {
      fail(ErrorKind::InvalidArgument, "grid '" + name + "': " + e.what());
    }
  }
  if (doc.contains("checks")) {
    const json& checks = doc.at("checks");
    if (!checks.is_array()) fail(ErrorKind::InvalidArgument, "'checks' must be an array");
    for (const json& ch : checks) {
      if (!ch.is_object() || !ch.contains("type") || !ch.at("type").is_string())
        fail(ErrorKind::InvalidArgument, "every check needs a string 'type'");
      c.checks.push_back(ch);
    }
  }
  return c;
}

}  // namespace

RunConfig parse_config(const json& doc, std::filesystem::path base_dir) {
  try {
    return parse_document(doc, std::move(base_dir));
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::NotFound, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, "malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

}  // namespace wk
