#pragma once

// Validator for the JSON Schema subset used by structured prompts:
// type, properties, required, additionalProperties (false), items, enum,
// minimum, maximum, minItems, maxItems, minLength and format "hh:mm".

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "hhgen/error.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::llm {

using nlohmann::json;

namespace detail {

inline bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

inline std::optional<std::string> check(const json& v, const json& s, const std::string& path) {
  auto at = [&](const std::string& msg) { return std::optional<std::string>((path.empty() ? "/" : path) + ": " + msg); };
  if (auto t = s.find("type"); t != s.end()) {
    bool ok = false;
    if (t->is_array()) {
      for (const auto& x : *t) ok = ok || has_type(v, x.get<std::string>());
    } else {
      ok = has_type(v, t->get<std::string>());
    }
    if (!ok) return at("expected type " + t->dump() + ", got " + std::string(v.type_name()));
  }
  if (auto e = s.find("enum"); e != s.end()) {
    bool found = false;
    for (const auto& x : *e) found = found || x == v;
    if (!found) return at("value " + v.dump() + " not in " + e->dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (auto m = s.find("minimum"); m != s.end() && x < m->get<double>()) return at("below minimum " + m->dump());
    if (auto m = s.find("maximum"); m != s.end() && x > m->get<double>()) return at("above maximum " + m->dump());
  }
  if (v.is_string()) {
    const auto& str = v.get_ref<const std::string&>();
    if (auto m = s.find("minLength"); m != s.end() && str.size() < m->get<std::size_t>()) return at("string shorter than " + m->dump());
    if (auto f = s.find("format"); f != s.end() && *f == "hh:mm" && !parse_hhmm(str)) return at("'" + str + "' is not HH:MM");
  }
  if (v.is_array()) {
    if (auto m = s.find("minItems"); m != s.end() && v.size() < m->get<std::size_t>()) return at("fewer than " + m->dump() + " items");
    if (auto m = s.find("maxItems"); m != s.end() && v.size() > m->get<std::size_t>()) return at("more than " + m->dump() + " items");
    if (auto items = s.find("items"); items != s.end()) {
      for (std::size_t i = 0; i < v.size(); ++i)
        if (auto err = check(v[i], *items, path + "/" + std::to_string(i))) return err;
    }
  }
  if (v.is_object()) {
    if (auto req = s.find("required"); req != s.end()) {
      for (const auto& k : *req)
        if (!v.contains(k.get<std::string>())) return at("missing required field '" + k.get<std::string>() + "'");
    }
    const auto props = s.find("properties");
    for (const auto& [k, x] : v.items()) {
      if (props != s.end() && props->contains(k)) {
        if (auto err = check(x, props->at(k), path + "/" + k)) return err;
      } else if (auto ap = s.find("additionalProperties"); ap != s.end() && ap->is_boolean() && !ap->get<bool>()) {
        return at("unexpected field '" + k + "'");
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// First violation found, as "<json-pointer>: <message>", or nullopt.
inline std::optional<std::string> validate_against(const json& value, const json& schema) {
  return detail::check(value, schema, "");
}

class SchemaRegistry {
 public:
  void add(const std::string& name, json schema) { schemas_[name] = std::move(schema); }
  bool has(const std::string& name) const { return schemas_.count(name) > 0; }
  const json& get(const std::string& name) const {
    auto it = schemas_.find(name);
    if (it == schemas_.end()) fail(ErrorCode::precondition, "schema '" + name + "' is not registered");
    return it->second;
  }

 private:
  std::map<std::string, json> schemas_;
};

}  // namespace hhgen::llm
