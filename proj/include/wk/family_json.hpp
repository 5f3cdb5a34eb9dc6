#pragma once

#include "wk/weights.hpp"

#include <nlohmann/json.hpp>

namespace wk {

/// Build a family from its JSON description.
///
/// Built-in kinds: {"kind": "polynomial", "k": 1, "params": {...}, "indices": [0, 1, 2]}.
/// Custom kind: each index carries an expression in x1..xk and optional witnesses,
///   {"kind": "custom", "k": 1, "indices": [
///     {"label": "w0", "weight": "(1 + abs(x))^2",
///      "cond_I": {"target": "w3", "L": "(1 + abs(x))^(-2)"},
///      "cond_II": {"target": "w0", "radius": 1, "C": 4}}, ...]}
/// Products: {"kind": "tensor", "left": {...}, "right": {...}};
/// the constant weight: {"kind": "constant-one", "k": 1}.
DefiningFamily family_from_json(const nlohmann::json& desc);

/// The tensor-family view of a {"kind": "tensor"} description.
TensorFamily tensor_family_from_json(const nlohmann::json& desc);

}  // namespace wk
