#include "nyqenv/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "nyqenv/error.hpp"

namespace nyqenv {

using nlohmann::json;

std::string_view to_string(OutputFormat format) noexcept { return format == OutputFormat::Json ? "json" : "csv"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("output.format", fmt::format("unknown format '{}' (expected csv or json)", name));
}

json to_json(const ExperimentConfig& c) {
  json potential = {{"kind", c.potential.kind}, {"A", c.potential.A}, {"w", c.potential.w}};
  if (c.potential.kind == "tabulated") potential["values"] = c.potential.values;
  return {
      {"grid", {{"x_min", c.grid.x_min}, {"L", c.grid.L}, {"h", c.grid.h}}},
      {"potential", potential},
      {"scheme", std::string(to_string(c.scheme))},
      {"k", c.k},
      {"refine", c.refine},
      {"output", {{"format", std::string(to_string(c.output.format))}, {"path", c.output.path}}},
  };
}

namespace {

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) throw ConfigError(prefix + key, "unknown field");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path, fmt::format("wrong type ({})", e.what()));
  }
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  const json& s = doc.at(key);
  if (!s.is_object()) throw ConfigError(key, "expected an object");
  return s;
}

double parse_double(std::string_view path, std::string_view text) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(path), fmt::format("'{}' is not a number", text));
  }
}

int parse_int(std::string_view path, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(path), fmt::format("'{}' is not an integer", text));
  }
  return v;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  reject_unknown(doc, "", {"grid", "potential", "scheme", "k", "refine", "output"});
  ExperimentConfig c;

  const json& g = section(doc, "grid");
  reject_unknown(g, "grid.", {"x_min", "L", "h"});
  read(g, "x_min", "grid.x_min", c.grid.x_min);
  read(g, "L", "grid.L", c.grid.L);
  read(g, "h", "grid.h", c.grid.h);

  const json& p = section(doc, "potential");
  reject_unknown(p, "potential.", {"kind", "A", "w", "values"});
  read(p, "kind", "potential.kind", c.potential.kind);
  read(p, "A", "potential.A", c.potential.A);
  read(p, "w", "potential.w", c.potential.w);
  read(p, "values", "potential.values", c.potential.values);

  if (doc.contains("scheme")) {
    std::string scheme;
    read(doc, "scheme", "scheme", scheme);
    try {
      c.scheme = parse_scheme(scheme);
    } catch (const InvalidArgument& e) {
      throw ConfigError("scheme", e.what());
    }
  }
  read(doc, "k", "k", c.k);
  read(doc, "refine", "refine", c.refine);

  const json& o = section(doc, "output");
  reject_unknown(o, "output.", {"format", "path"});
  if (o.contains("format")) {
    std::string format;
    read(o, "format", "output.format", format);
    c.output.format = parse_format(format);
  }
  read(o, "path", "output.path", c.output.path);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", fmt::format("cannot open '{}'", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
  return config_from_json(doc);
}

void apply_override(ExperimentConfig& c, std::string_view path, std::string_view value) {
  if (path == "grid.x_min") {
    c.grid.x_min = parse_double(path, value);
  } else if (path == "grid.L") {
    c.grid.L = parse_double(path, value);
  } else if (path == "grid.h") {
    c.grid.h = parse_double(path, value);
  } else if (path == "potential.kind") {
    c.potential.kind = std::string(value);
  } else if (path == "potential.A") {
    c.potential.A = parse_double(path, value);
  } else if (path == "potential.w") {
    c.potential.w = parse_double(path, value);
  } else if (path == "scheme") {
    try {
      c.scheme = parse_scheme(value);
    } catch (const InvalidArgument& e) {
      throw ConfigError("scheme", e.what());
    }
  } else if (path == "k") {
    c.k = parse_int(path, value);
  } else if (path == "refine") {
    c.refine = parse_int(path, value);
  } else if (path == "output.format" || path == "format") {
    c.output.format = parse_format(value);
  } else if (path == "output.path" || path == "out") {
    c.output.path = std::string(value);
  } else {
    throw ConfigError(std::string(path), "unknown field");
  }
}

void validate(const ExperimentConfig& c) {
  if (!std::isfinite(c.grid.x_min)) throw ConfigError("grid.x_min", "must be finite");
  if (!(c.grid.L > 0.0) || !std::isfinite(c.grid.L)) throw ConfigError("grid.L", "must be positive");
  if (!(c.grid.h > 0.0) || !std::isfinite(c.grid.h)) throw ConfigError("grid.h", "must be positive");
  const Grid grid = [&] {
    try {
      return Grid::make(c.grid.x_min, c.grid.L, c.grid.h, NyquistSupport::Required);
    } catch (const InvalidArgument& e) {
      throw ConfigError("grid.h", e.what());
    }
  }();
  if (grid.size() < 3) throw ConfigError("grid.h", fmt::format("N={} < 3 grid points", grid.size()));
  if (grid.size() > 4096) throw ConfigError("grid.h", fmt::format("N={} exceeds the dense solver limit 4096", grid.size()));

  if (c.potential.kind == "sech") {
    if (!std::isfinite(c.potential.A)) throw ConfigError("potential.A", "must be finite");
    if (!(c.potential.w > 0.0) || !std::isfinite(c.potential.w)) throw ConfigError("potential.w", "must be positive");
  } else if (c.potential.kind == "tabulated") {
    if (c.potential.values.size() != grid.size()) {
      throw ConfigError("potential.values",
                        fmt::format("{} values for a grid of {} points", c.potential.values.size(), grid.size()));
    }
    for (double v : c.potential.values) {
      if (!std::isfinite(v)) throw ConfigError("potential.values", "values must be finite");
    }
  } else {
    throw ConfigError("potential.kind", fmt::format("unknown kind '{}' (expected sech or tabulated)", c.potential.kind));
  }

  if (c.k < 1 || static_cast<std::size_t>(c.k) > grid.size()) {
    throw ConfigError("k", fmt::format("must lie in [1, {}], got {}", grid.size(), c.k));
  }
  if (c.refine < 1) throw ConfigError("refine", fmt::format("must be >= 1, got {}", c.refine));
}

Grid build_grid(const ExperimentConfig& c) {
  return Grid::make(c.grid.x_min, c.grid.L, c.grid.h, NyquistSupport::Required);
}

Potential build_potential(const ExperimentConfig& c) {
  if (c.potential.kind == "tabulated") return Potential::tabulated(c.potential.values, build_grid(c));
  return Potential::sech(c.potential.A, c.potential.w);
}

}  // namespace nyqenv
