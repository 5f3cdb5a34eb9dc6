#pragma once

#include "wk/grid.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wk {

/// A parsed run configuration. Named sections are kept as JSON and resolved
/// on demand by the runner; load_config validates their shape.
///
///   {"tolerance": 1e-9,
///    "output": "reports",
///    "families": {"schwartz": {"kind": "polynomial", "k": 1, "indices": [0, 1, 2]}},
///    "grids": {"line": {"dim": 1, "lo": -10, "hi": 10, "points": 2001}},
///    "functions": {"gauss": {"grid": "line", "expression": "exp(-x^2)"}},
///    "corpora": {"hermite": {"kind": "hermite", "n": 20, "grid": "line"}},
///    "kernels": {"k": {"x_grid": "kx", "y_grid": "ky", "expression": "exp(-(x-y)^2)"}},
///    "checks": [{"type": "condition-I", "family": "schwartz", "gamma": 0, "grid": "line"}]}
struct RunConfig {
  double tolerance = 1e-9;
  std::optional<std::string> output;
  nlohmann::json families = nlohmann::json::object();
  nlohmann::json grids = nlohmann::json::object();
  nlohmann::json functions = nlohmann::json::object();
  nlohmann::json corpora = nlohmann::json::object();
  nlohmann::json kernels = nlohmann::json::object();
  std::vector<nlohmann::json> checks;
  std::filesystem::path base_dir;  // relative file references resolve here
};

RunConfig parse_config(const nlohmann::json& doc, std::filesystem::path base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// {"dim": k, "lo": a, "hi": b, "points": n} or {"axes": [{"lo", "hi", "points"}, ...]}.
Grid grid_from_json(const nlohmann::json& desc);

}  // namespace wk
