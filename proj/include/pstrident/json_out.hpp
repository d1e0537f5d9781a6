#pragma once

// JSON serialisation with every floating-point number printed to 17
// significant digits. Structure and string escaping come from nlohmann::json.

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace pstrident {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_json(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write_json(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_json(v, out, indent, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string to_json_text(const Json& j, int indent = 2) {
  std::string out;
  detail::write_json(j, out, indent, 0);
  out += "\n";
  return out;
}

}  // namespace pstrident
