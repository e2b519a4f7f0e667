#pragma once

// Scalar quoting for the hand-laid-out YAML artifacts (PIM, playbook).

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

namespace atk::yaml_text {

inline bool looks_reserved(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "true" || lower == "false" || lower == "yes" || lower == "no" || lower == "on" ||
         lower == "off" || lower == "null" || lower == "~" || lower == "y" || lower == "n";
}

/// Identifier-like text that needs no quoting.
inline bool is_plain_safe(std::string_view s) {
  if (s.empty() || looks_reserved(s)) return false;
  const auto first = static_cast<unsigned char>(s.front());
  if (!std::isalpha(first) && first != '_') return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == '/';
  });
}

inline bool has_control(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return c < 0x20 || c == 0x7f; });
}

inline std::string double_quoted(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          static constexpr char kHex[] = "0123456789abcdef";
          out += "\\x";
          out += kHex[c >> 4];
          out += kHex[c & 0xf];
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

inline std::string single_quoted(std::string_view s) {
  if (has_control(s)) return double_quoted(s);
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

/// Plain when safe, single-quoted otherwise.
inline std::string scalar(std::string_view s) { return is_plain_safe(s) ? std::string(s) : single_quoted(s); }

}  // namespace atk::yaml_text
