#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hexcmc::cli {

/// Minimal ordered JSON value for deterministic output. Doubles are
/// written with 17 significant digits; non-finite doubles become null.
class JsonValue {
public:
  using Object = std::vector<std::pair<std::string, JsonValue>>;
  using Array = std::vector<JsonValue>;

  JsonValue() : v_(nullptr) {}
  JsonValue(std::nullptr_t) : v_(nullptr) {}
  JsonValue(bool b) : v_(b) {}
  JsonValue(int i) : v_(static_cast<long long>(i)) {}
  JsonValue(long i) : v_(static_cast<long long>(i)) {}
  JsonValue(long long i) : v_(i) {}
  JsonValue(double d) : v_(d) {}
  JsonValue(std::string s) : v_(std::move(s)) {}
  JsonValue(const char *s) : v_(std::string(s)) {}

  static JsonValue object() { return JsonValue(Object{}); }
  static JsonValue array() { return JsonValue(Array{}); }

  /// Appends a key to an object (keys keep insertion order).
  JsonValue &set(std::string key, JsonValue value);
  /// Appends to an array.
  JsonValue &push(JsonValue value);

  std::string dump() const;

private:
  explicit JsonValue(Object o) : v_(std::make_shared<Object>(std::move(o))) {}
  explicit JsonValue(Array a) : v_(std::make_shared<Array>(std::move(a))) {}
  void write(std::string &out, int indent) const;

  std::variant<std::nullptr_t, bool, long long, double, std::string, std::shared_ptr<Object>, std::shared_ptr<Array>>
      v_;
};

} // namespace hexcmc::cli
