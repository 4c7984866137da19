#include "lcw/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lcw {

std::string format_double17(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write(const Json &j, int indent, int depth, std::string &out) {
  auto newline = [&](int d) {
    if (indent < 0)
      return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
  case Json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first)
        out += ',';
      first = false;
      newline(depth + 1);
      out += Json(it.key()).dump();
      out += indent < 0 ? ":" : ": ";
      write(it.value(), indent, depth + 1, out);
    }
    newline(depth);
    out += '}';
    return;
  }
  case Json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    // Arrays of scalars stay on one line.
    bool flat = std::all_of(j.begin(), j.end(), [](const Json &e) { return e.is_primitive(); });
    out += '[';
    bool first = true;
    for (const auto &e : j) {
      if (!first)
        out += flat && indent >= 0 ? ", " : ",";
      first = false;
      if (!flat)
        newline(depth + 1);
      write(e, indent, depth + 1, out);
    }
    if (!flat)
      newline(depth);
    out += ']';
    return;
  }
  case Json::value_t::number_float: {
    double v = j.get<double>();
    // JSON has no representation for non-finite values.
    if (!std::isfinite(v))
      out += "null";
    else {
      // Keep integral floats as floats when read back.
      std::string t = format_double17(v);
      if (t.find_first_of(".eE") == std::string::npos)
        t += ".0";
      out += t;
    }
    return;
  }
  default:
    out += j.dump();
    return;
  }
}

} // namespace

std::string dump_json(const Json &j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  if (indent >= 0)
    out += '\n';
  return out;
}

} // namespace lcw
