#pragma once

// Argument parsing and tabular output (CSV, newline-delimited JSON).

#include <cctype>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "diophlab/arith.hpp"
#include "diophlab/errors.hpp"
#include "diophlab/poly_roots.hpp"

namespace diophlab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Nonnegative integer from "1000000", "1_000_000", "1e6" or "2.5e6". The
/// value must be an exact integer that fits in 64 bits.
inline u64 parse_count(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != '_') s.push_back(c);
  }
  auto fail = [&](const char* why) { return DomainError("cannot parse '" + std::string(text) + "' as a count: " + why); };
  if (s.empty()) throw fail("empty");
  std::string mantissa = s;
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    const std::string ex = s.substr(e + 1);
    if (ex.empty() || ex.size() > 3) throw fail("bad exponent");
    std::size_t i = (ex[0] == '+' || ex[0] == '-') ? 1 : 0;
    if (i == ex.size()) throw fail("bad exponent");
    for (std::size_t j = i; j < ex.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(ex[j]))) throw fail("bad exponent");
    }
    exponent = std::stol(ex);
  }
  std::string digits;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) throw fail("two decimal points");
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) --exponent;
    } else {
      throw fail("unexpected character");
    }
  }
  if (digits.empty()) throw fail("no digits");
  // Trailing zeros absorb a negative exponent.
  while (exponent < 0 && digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
    ++exponent;
  }
  if (exponent < 0) {
    if (digits.find_first_not_of('0') != std::string::npos) throw fail("not an integer");
    return 0;
  }
  u128 value = 0;
  constexpr u128 kMax = std::numeric_limits<u64>::max();
  for (char c : digits) {
    value = value * 10 + static_cast<u128>(c - '0');
    if (value > kMax) throw fail("exceeds 64 bits");
  }
  for (long i = 0; i < exponent && value != 0; ++i) {
    value *= 10;
    if (value > kMax) throw fail("exceeds 64 bits");
  }
  return static_cast<u64>(value);
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

/// Comma-separated counts.
inline std::vector<u64> parse_count_list(std::string_view text) {
  std::vector<u64> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_count(part));
  return out;
}

inline i64 parse_signed(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  const bool negative = !s.empty() && s.front() == '-';
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.erase(s.begin());
  const u64 mag = parse_count(s);
  if (mag > static_cast<u64>(std::numeric_limits<i64>::max())) {
    throw DomainError("coefficient '" + std::string(text) + "' exceeds 63 bits");
  }
  return negative ? -static_cast<i64>(mag) : static_cast<i64>(mag);
}

/// "c2,c1,c0" as c2 t^2 + c1 t + c0, decomposed.
inline ReducibleQuadratic parse_poly(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw DomainError("polynomial must be three coefficients c2,c1,c0: '" + std::string(text) + "'");
  return decompose(parse_signed(parts[0]), parse_signed(parts[1]), parse_signed(parts[2]));
}

enum class Format { csv, json };

inline Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw DomainError("format must be csv or json, got '" + std::string(text) + "'");
}

inline std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// Writes a header record and then one row per call. All rows must share
/// the first row's keys; CSV takes its column line from them.
class TableWriter {
 public:
  TableWriter(std::ostream& out, Format format, Json header) : out_(out), format_(format), header_(std::move(header)) {
    if (format_ == Format::json) {
      Json rec = {{"record", "header"}};
      for (const auto& [k, v] : header_.items()) rec[k] = v;
      out_ << rec.dump() << '\n';
    } else {
      out_ << '#';
      for (const auto& [k, v] : header_.items()) out_ << ' ' << k << '=' << cell(v);
      out_ << '\n';
    }
  }

  void row(const Json& r) {
    if (format_ == Format::json) {
      out_ << r.dump() << '\n';
      return;
    }
    if (columns_.empty()) {
      for (const auto& [k, v] : r.items()) columns_.push_back(k);
      for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
      out_ << '\n';
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      out_ << (i ? "," : "") << (r.contains(columns_[i]) ? cell(r.at(columns_[i])) : "");
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  Format format_;
  Json header_;
  std::vector<std::string> columns_;
};

}  // namespace diophlab::io
