#include "wk/family_json.hpp"

#include "wk/error.hpp"
#include "wk/expression.hpp"

#include <cmath>

namespace wk {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(ErrorKind::InvalidArgument, where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(ErrorKind::InvalidArgument, where + ": expected a number");
  return v.get<double>();
}

std::string index_label(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    return buf;
  }
  fail(ErrorKind::InvalidArgument, "family index references must be strings or numbers");
}

WeightFunction expression_weight(int k, const std::string& source) {
  const Expression e = Expression::parse(source, coordinate_names("x", k));
  return WeightFunction{k, WeightKind::Custom, {}, [e](PointRef x) {
                          return e(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
                        }};
}

DefiningFamily custom_family(const json& desc) {
  const int k = field(desc, "k", "custom family").get<int>();
  const json& list = field(desc, "indices", "custom family");
  if (!list.is_array() || list.empty()) fail(ErrorKind::InvalidArgument, "custom family: 'indices' must be a nonempty array");
  std::vector<std::string> labels;
  for (const json& item : list) labels.push_back(field(item, "label", "custom family index").get<std::string>());
  const auto position = [&](const json& ref, const std::string& owner) {
    const std::string target = index_label(ref);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == target) return i;
    }
    fail(ErrorKind::NotFound, "custom family: witness of '" + owner + "' names unknown index '" + target + "'");
  };
  std::vector<DefiningFamily::Entry> entries;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& item = list[i];
    const std::string& label = labels[i];
    DefiningFamily::Entry e{label, item.value("value", std::nan("")),
                            expression_weight(k, field(item, "weight", label).get<std::string>()), std::nullopt,
                            std::nullopt};
    if (item.contains("cond_I")) {
      const json& w = item.at("cond_I");
      e.cond_i = ConditionIWitness{position(field(w, "target", label), label),
                                   expression_weight(k, field(w, "L", label).get<std::string>())};
    }
    if (item.contains("cond_II")) {
      const json& w = item.at("cond_II");
      e.cond_ii = ConditionIIWitness{position(field(w, "target", label), label),
                                     number(field(w, "radius", label), label), number(field(w, "C", label), label)};
    }
    entries.push_back(std::move(e));
  }
  return DefiningFamily(k, WeightKind::Custom, std::move(entries));
}

}  // namespace

TensorFamily tensor_family_from_json(const json& desc) {
  if (desc.value("kind", "") != "tensor") fail(ErrorKind::InvalidArgument, "expected a family of kind 'tensor'");
  return tensor_family(family_from_json(field(desc, "left", "tensor family")),
                       family_from_json(field(desc, "right", "tensor family")));
}

DefiningFamily family_from_json(const json& desc) {
  if (!desc.is_object()) fail(ErrorKind::InvalidArgument, "family description must be a JSON object");
  const std::string kind = field(desc, "kind", "family").get<std::string>();
  if (kind == "tensor") return tensor_family_from_json(desc).product;
  if (kind == "constant-one") return constant_one_family(field(desc, "k", "family").get<int>());
  if (kind == "custom") return custom_family(desc);

  FamilySpec spec;
  spec.kind = weight_kind_from_string(kind);
  spec.k = field(desc, "k", "family").get<int>();
  if (desc.contains("params")) {
    const json& params = desc.at("params");
    if (!params.is_object()) fail(ErrorKind::InvalidArgument, "family 'params' must be an object");
    for (const auto& [name, value] : params.items()) spec.params[name] = number(value, "family parameter " + name);
  }
  const json& indices = field(desc, "indices", "family");
  if (!indices.is_array()) fail(ErrorKind::InvalidArgument, "family 'indices' must be an array");
  for (const json& v : indices) spec.indices.push_back(number(v, "family index"));
  return make_family(spec);
}

}  // namespace wk
