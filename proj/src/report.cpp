#include "munorm/report.hpp"

#include <cstdio>

namespace munorm {

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

JsonValue JsonArray::done() const {
  std::string out = "[";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ",";
    out += items_[i];
  }
  out += "]";
  return JsonValue::raw(std::move(out));
}

JsonValue JsonObject::done() const {
  std::string out = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) out += ",";
    out += "\"" + json_escape(fields_[i].first) + "\":" + fields_[i].second;
  }
  out += "}";
  return JsonValue::raw(std::move(out));
}

}  // namespace munorm
