#include "json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hexcmc::cli {

namespace {

void escape(std::string &out, const std::string &s) {
  out += '"';
  for (char c : s) {
    switch (c) {
    case '"':
      out += "\\\"";
      break;
    case '\\':
      out += "\\\\";
      break;
    case '\n':
      out += "\\n";
      break;
    case '\t':
      out += "\\t";
      break;
    default:
      if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
      } else {
        out += c;
      }
    }
  }
  out += '"';
}

void newline(std::string &out, int indent) {
  out += '\n';
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
}

} // namespace

JsonValue &JsonValue::set(std::string key, JsonValue value) {
  auto *o = std::get_if<std::shared_ptr<Object>>(&v_);
  if (o == nullptr) {
    throw std::logic_error("JsonValue::set on a non-object");
  }
  (*o)->emplace_back(std::move(key), std::move(value));
  return *this;
}

JsonValue &JsonValue::push(JsonValue value) {
  auto *a = std::get_if<std::shared_ptr<Array>>(&v_);
  if (a == nullptr) {
    throw std::logic_error("JsonValue::push on a non-array");
  }
  (*a)->push_back(std::move(value));
  return *this;
}

std::string JsonValue::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

void JsonValue::write(std::string &out, int indent) const {
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (const bool *b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const long long *i = std::get_if<long long>(&v_)) {
    out += std::to_string(*i);
  } else if (const double *d = std::get_if<double>(&v_)) {
    if (!std::isfinite(*d)) {
      out += "null";
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *d);
      out += buf;
    }
  } else if (const std::string *s = std::get_if<std::string>(&v_)) {
    escape(out, *s);
  } else if (const auto *o = std::get_if<std::shared_ptr<Object>>(&v_)) {
    if ((*o)->empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (const auto &[k, v] : **o) {
      if (!first) {
        out += ',';
      }
      first = false;
      newline(out, indent + 1);
      escape(out, k);
      out += ": ";
      v.write(out, indent + 1);
    }
    newline(out, indent);
    out += '}';
  } else if (const auto *a = std::get_if<std::shared_ptr<Array>>(&v_)) {
    if ((*a)->empty()) {
      out += "[]";
      return;
    }
    out += '[';
    bool first = true;
    for (const auto &v : **a) {
      if (!first) {
        out += ',';
      }
      first = false;
      newline(out, indent + 1);
      v.write(out, indent + 1);
    }
    newline(out, indent);
    out += ']';
  }
}

} // namespace hexcmc::cli
