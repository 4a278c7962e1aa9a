#include "config.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "gyro/error.hpp"

namespace gyro::cli {

namespace {

const char* kSchemaText =
#include "config_schema.inc"
    ;

const std::map<std::string, std::vector<std::string>>& required_keys() {
  static const std::map<std::string, std::vector<std::string>> r{
      {"recurrence", {"weight", "n_terms"}},
      {"quadrature", {"weight", "n_nodes"}},
      {"opmatrix", {"geometry", "spec", "operator"}},
      {"sparsity", {"geometry", "spec"}},
      {"modes", {"geometry", "spec"}},
      {"iwaves", {"geometry", "m"}},
      {"scan", {"sweeps", "m"}},
  };
  return r;
}

bool has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<long long>(v.get<double>()));
  if (t == "number") return v.is_number();
  if (t == "null") return v.is_null();
  return false;
}

class Validator {
 public:
  explicit Validator(const nlohmann::json& root) : root_(root) {}

  void check(const nlohmann::json& v, const nlohmann::json& s, const std::string& path,
             std::vector<std::string>& out) const {
    if (s.contains("$ref")) {
      check(v, resolve(s["$ref"].get<std::string>()), path, out);
      return;
    }
    if (s.contains("oneOf")) {
      int ok = 0;
      for (const auto& alt : s["oneOf"]) {
        std::vector<std::string> tmp;
        check(v, alt, path, tmp);
        ok += tmp.empty();
      }
      if (ok != 1) out.push_back(path + ": matches " + std::to_string(ok) + " alternatives, expected exactly one");
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) {
        out.push_back(path + ": expected type " + s["type"].dump());
        return;
      }
    }
    if (s.contains("const") && v != s["const"]) out.push_back(path + ": must equal " + s["const"].dump());
    if (s.contains("enum")) {
      bool ok = false;
      for (const auto& e : s["enum"]) ok = ok || e == v;
      if (!ok) out.push_back(path + ": must be one of " + s["enum"].dump());
    }
    if (v.is_number()) {
      if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>())
        out.push_back(path + ": below minimum " + s["minimum"].dump());
      if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>())
        out.push_back(path + ": above maximum " + s["maximum"].dump());
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
        out.push_back(path + ": fewer than " + s["minItems"].dump() + " items");
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
        out.push_back(path + ": more than " + s["maxItems"].dump() + " items");
      if (s.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i) check(v[i], s["items"], path + "/" + std::to_string(i), out);
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& k : s["required"])
          if (!v.contains(k.get<std::string>())) out.push_back(path + ": missing required key '" + k.get<std::string>() + "'");
      const nlohmann::json props = s.value("properties", nlohmann::json::object());
      for (const auto& [k, val] : v.items()) {
        if (props.contains(k))
          check(val, props[k], path + "/" + k, out);
        else if (s.contains("additionalProperties") && s["additionalProperties"] == false)
          out.push_back(path + ": unknown key '" + k + "'");
      }
    }
  }

 private:
  const nlohmann::json& resolve(const std::string& ref) const {
    if (ref.rfind("#/", 0) != 0) throw Error(ErrorKind::config, "unsupported schema reference " + ref);
    return root_.at(nlohmann::json::json_pointer(ref.substr(1)));
  }

  const nlohmann::json& root_;
};

}  // namespace

const nlohmann::json& config_schema() {
  static const nlohmann::json s = nlohmann::json::parse(kSchemaText);
  return s;
}

std::vector<std::string> schema_violations(const nlohmann::json& doc, const nlohmann::json& schema) {
  std::vector<std::string> out;
  Validator(schema).check(doc, schema, "", out);
  return out;
}

nlohmann::json read_json(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot read config file " + path);
    buf << in.rdbuf();
  }
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, "config is not valid JSON: " + std::string(e.what()));
  }
}

void validate_config(const std::string& subcommand, const nlohmann::json& config) {
  std::vector<std::string> errs = schema_violations(config, config_schema());
  if (config.contains("subcommand") && config["subcommand"].is_string() && config["subcommand"] != subcommand)
    errs.push_back("/subcommand: config is for '" + config["subcommand"].get<std::string>() + "', run as '" +
                   subcommand + "'");
  const auto it = required_keys().find(subcommand);
  if (it == required_keys().end()) throw Error(ErrorKind::config, "unknown subcommand '" + subcommand + "'");
  if (config.is_object())
    for (const auto& k : it->second)
      if (!config.contains(k)) errs.push_back(": " + subcommand + " needs '" + k + "'");
  if (errs.empty()) return;
  std::string msg = "config violates the schema:";
  for (const auto& e : errs) msg += "\n  " + e;
  throw Error(ErrorKind::config, msg);
}

}  // namespace gyro::cli
