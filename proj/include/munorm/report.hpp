// Minimal deterministic JSON/CSV emission. Doubles are always printed with
// 17 significant digits so identical runs give byte-identical reports.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace munorm {

std::string format_double(double v);
std::string json_escape(const std::string& s);

class JsonValue {
 public:
  static JsonValue number(double v) { return JsonValue(format_double(v)); }
  static JsonValue integer(long long v) { return JsonValue(std::to_string(v)); }
  static JsonValue boolean(bool v) { return JsonValue(v ? "true" : "false"); }
  static JsonValue string(const std::string& s) {
    return JsonValue("\"" + json_escape(s) + "\"");
  }
  static JsonValue raw(std::string s) { return JsonValue(std::move(s)); }

  const std::string& str() const { return text_; }

 private:
  explicit JsonValue(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

class JsonArray {
 public:
  JsonArray& push(const JsonValue& v) {
    items_.push_back(v.str());
    return *this;
  }
  JsonValue done() const;

 private:
  std::vector<std::string> items_;
};

class JsonObject {
 public:
  JsonObject& add(const std::string& key, const JsonValue& v) {
    fields_.emplace_back(key, v.str());
    return *this;
  }
  JsonObject& add(const std::string& key, double v) { return add(key, JsonValue::number(v)); }
  JsonObject& add(const std::string& key, int v) { return add(key, JsonValue::integer(v)); }
  JsonObject& add(const std::string& key, long long v) { return add(key, JsonValue::integer(v)); }
  JsonObject& add(const std::string& key, bool v) { return add(key, JsonValue::boolean(v)); }
  JsonObject& add(const std::string& key, const std::string& v) {
    return add(key, JsonValue::string(v));
  }
  JsonObject& add(const std::string& key, const char* v) {
    return add(key, JsonValue::string(v));
  }
  JsonValue done() const;
  std::string str() const { return done().str(); }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace munorm
