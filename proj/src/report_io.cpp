#include "nyqenv/report_io.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "nyqenv/error.hpp"

namespace nyqenv {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string short_num(double v) { return fmt::format("{:#.12g}", v); }
const char* flag(bool b) { return b ? "true" : "false"; }

std::string timestamp() {
  std::int64_t seconds = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    seconds = std::strtoll(epoch, nullptr, 10);
  } else {
    seconds = std::chrono::duration_cast<std::chrono::seconds>(
                  std::chrono::system_clock::now().time_since_epoch()).count();
  }
  const std::chrono::sys_seconds t{std::chrono::seconds{seconds}};
  const auto days = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{t - days};
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count());
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output.path", fmt::format("cannot write '{}'", path.string()));
  return out;
}

void write_json(const fs::path& path, const json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

fs::path sidecar(const fs::path& path) {
  fs::path meta = path;
  meta.replace_extension(".meta.json");
  return meta;
}

template <typename Report, typename CsvWriter>
std::vector<fs::path> write_table(const Report& report, OutputFormat format, const fs::path& path, CsvWriter csv) {
  if (format == OutputFormat::Json) {
    write_json(path, to_json(report));
    return {path};
  }
  {
    auto out = open_output(path);
    csv(out, report);
  }
  write_json(sidecar(path), metadata_json(report.metadata));
  return {path, sidecar(path)};
}

json match_json(const EnvelopeMatch& m) {
  return {{"gap", m.gap},
          {"correlation", m.correlation},
          {"delta_lambda_fd", m.delta_lambda_fd},
          {"nodes_fd", m.nodes_fd},
          {"nodes_expected", m.nodes_expected},
          {"nodes_match", m.nodes_match}};
}

json deviation_json(const WkbDeviation& d) {
  return {{"rank", d.rank},
          {"lambda", d.lambda},
          {"method", to_string(d.method)},
          {"partner_rank", d.partner_rank},
          {"max_deviation", d.max_deviation},
          {"error_scale", d.error_scale},
          {"relative_to_scale", d.max_deviation / d.error_scale},
          {"wkb_wiggle", d.wkb_wiggle},
          {"amplitude_fd", d.amplitude_fd},
          {"amplitude_wkb", d.amplitude_wkb}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Tables

void print_spectrum(std::ostream& out, const SpectrumReport& r) {
  fmt::print(out, "{:>4}  {:>20}  {:>20}  {:>9}  {:>20}  {:>20}\n", "rank", "lambda", "delta_lambda", "localized",
             "tail_mass", "residual");
  for (const auto& row : r.rows) {
    fmt::print(out, "{:>4}  {:>20}  {:>20}  {:>9}  {:>20}  {:>20}\n", row.rank, short_num(row.lambda),
               short_num(row.delta_lambda), flag(row.localized), short_num(row.tail_mass), short_num(row.residual));
  }
}

void print_predict(std::ostream& out, const PredictReport& r) {
  fmt::print(out, "bound states {} (localized {}), FD localized modes {}\n", r.bound_state_count, r.localized_count,
             r.fd_localized_count);
  fmt::print(out, "{:>4}  {:>20}  {:>5}  {:>20}  {:>20}  {:>20}\n", "rank", "delta_lambda_pred", "nodes", "delta_lambda_fd",
             "gap", "correlation");
  for (const auto& row : r.rows) {
    fmt::print(out, "{:>4}  {:>20}  {:>5}  {:>20}  {:>20}  {:>20}\n", row.rank, short_num(row.delta_lambda_pred),
               row.node_count, short_num(row.match.delta_lambda_fd), short_num(row.match.gap),
               short_num(row.match.correlation));
  }
}

void print_sweep(std::ostream& out, const SweepReport& r) {
  fmt::print(out, "{:>12}  {:>8}  {:>8}  {:>12}  {:>20}  {:>20}\n", to_string(r.parameter), "fd_count", "bound",
             "bound_local", "lambda_1", "gap_rank1");
  for (const auto& row : r.rows) {
    fmt::print(out, "{:>12}  {:>8}  {:>8}  {:>12}  {:>20}  {:>20}\n", short_num(row.value), row.fd_localized,
               row.oracle_bound, row.oracle_localized, short_num(row.lambda_1), short_num(row.gap_rank1));
  }
  if (r.monotone) fmt::print(out, "monotone: {}\n", flag(*r.monotone));
  fmt::print(out, "counts agree: {}\n", flag(r.counts_agree));
  for (double ratio : r.gap_ratios) fmt::print(out, "gap ratio: {}\n", short_num(ratio));
}

void print_wkb(std::ostream& out, const WkbReport& r) {
  const auto line = [&](const char* label, const WkbDeviation& d) {
    fmt::print(out, "{}: rank {} lambda {} method {} max deviation {} (scale {})\n", label, d.rank, short_num(d.lambda),
               to_string(d.method), short_num(d.max_deviation), short_num(d.error_scale));
  };
  line("mode", r.deviation);
  line("V=0 control", r.control);
}

void print_figure(std::ostream& out, const FigureDataset& d) {
  fmt::print(out, "{}: lambda_max repulsive {} attractive {}\n", to_string(d.figure),
             short_num(d.lambda_max_repulsive), short_num(d.lambda_max_attractive));
  for (const auto& m : d.modes) {
    fmt::print(out, "  {:<18} rank {} lambda {} delta_lambda {} localized {} tail_mass {}\n", m.name, m.rank,
               short_num(m.lambda), short_num(m.delta_lambda), flag(m.localized), short_num(m.tail_mass));
  }
}

// ---------------------------------------------------------------------------
// CSV

void write_spectrum_csv(std::ostream& out, const SpectrumReport& r) {
  out << "rank,lambda,delta_lambda,localized,tail_mass,residual\n";
  for (const auto& row : r.rows) {
    out << fmt::format("{},{},{},{},{},{}\n", row.rank, num(row.lambda), num(row.delta_lambda), flag(row.localized),
                       num(row.tail_mass), num(row.residual));
  }
}

void write_predict_csv(std::ostream& out, const PredictReport& r) {
  out << "rank,delta_lambda_pred,node_count,tail_mass,localized,delta_lambda_fd,gap,correlation,nodes_fd\n";
  for (const auto& row : r.rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", row.rank, num(row.delta_lambda_pred), row.node_count,
                       num(row.tail_mass), flag(row.localized), num(row.match.delta_lambda_fd), num(row.match.gap),
                       num(row.match.correlation), row.match.nodes_fd);
  }
}

void write_sweep_csv(std::ostream& out, const SweepReport& r) {
  out << fmt::format("{},fd_localized,oracle_bound,oracle_localized,lambda_1,delta_lambda_1,gap_rank1\n",
                     to_string(r.parameter));
  for (const auto& row : r.rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", num(row.value), row.fd_localized, row.oracle_bound,
                       row.oracle_localized, num(row.lambda_1), num(row.delta_lambda_1), num(row.gap_rank1));
  }
}

// ---------------------------------------------------------------------------
// JSON

json metadata_json(const RunMetadata& m) {
  return {{"config", to_json(m.config)},
          {"solver_residual_max", m.solver_residual_max},
          {"gershgorin_bounds", {m.gershgorin_lower, m.gershgorin_upper}},
          {"code_version", code_version()},
          {"generated_at", timestamp()}};
}

json to_json(const SpectrumReport& r) {
  json modes = json::array();
  for (const auto& row : r.rows) {
    modes.push_back({{"rank", row.rank},
                     {"lambda", row.lambda},
                     {"delta_lambda", row.delta_lambda},
                     {"localized", row.localized},
                     {"tail_mass", row.tail_mass},
                     {"residual", row.residual}});
  }
  return {{"modes", modes}, {"metadata", metadata_json(r.metadata)}};
}

json to_json(const FigureDataset& d) {
  json modes = json::array();
  for (const auto& m : d.modes) {
    modes.push_back({{"name", m.name},
                     {"panel", m.panel},
                     {"A", m.amplitude},
                     {"rank", m.rank},
                     {"lambda", m.lambda},
                     {"delta_lambda", m.delta_lambda},
                     {"localized", m.localized},
                     {"tail_mass", m.tail_mass},
                     {"x", m.x},
                     {"envelope_abs", m.envelope_abs},
                     {"envelope_signed", m.envelope_signed},
                     {"V_normalized", m.V_normalized}});
  }
  json meta = metadata_json(d.metadata);
  meta["figure"] = std::string(to_string(d.figure));
  meta["lambda_max_repulsive"] = d.lambda_max_repulsive;
  meta["lambda_max_attractive"] = d.lambda_max_attractive;
  json doc = {{"modes", modes}, {"metadata", meta}};
  if (d.carrier) {
    doc["metadata"]["carrier_window"] = {d.carrier->x_lo, d.carrier->x_hi};
    doc["carrier"] = {{"rank", d.carrier->rank}, {"x", d.carrier->x}, {"psi", d.carrier->psi}};
  }
  return doc;
}

json to_json(const PredictReport& r) {
  json modes = json::array();
  for (const auto& row : r.rows) {
    modes.push_back({{"rank", row.rank},
                     {"delta_lambda_pred", row.delta_lambda_pred},
                     {"node_count", row.node_count},
                     {"tail_mass", row.tail_mass},
                     {"localized", row.localized},
                     {"comparison", match_json(row.match)}});
  }
  json meta = metadata_json(r.metadata);
  meta["bound_state_count"] = r.bound_state_count;
  meta["localized_count"] = r.localized_count;
  meta["fd_localized_count"] = r.fd_localized_count;
  return {{"modes", modes}, {"metadata", meta}};
}

json to_json(const SweepReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"value", row.value},
                    {"fd_localized", row.fd_localized},
                    {"oracle_bound", row.oracle_bound},
                    {"oracle_localized", row.oracle_localized},
                    {"lambda_1", row.lambda_1},
                    {"delta_lambda_1", row.delta_lambda_1},
                    {"gap_rank1", row.gap_rank1}});
  }
  json meta = metadata_json(r.metadata);
  meta["parameter"] = std::string(to_string(r.parameter));
  meta["monotone"] = r.monotone ? json(*r.monotone) : json(nullptr);
  meta["counts_agree"] = r.counts_agree;
  meta["gap_ratios"] = r.gap_ratios;
  return {{"modes", rows}, {"metadata", meta}};
}

json to_json(const WkbReport& r) {
  json meta = metadata_json(r.metadata);
  meta["resolved_lambda_limit"] = r.resolved_limit;
  return {{"modes", json::array({deviation_json(r.deviation)})},
          {"control", deviation_json(r.control)},
          {"metadata", meta}};
}

// ---------------------------------------------------------------------------
// Files

std::vector<fs::path> write_report(const SpectrumReport& r, OutputFormat format, const fs::path& path) {
  return write_table(r, format, path, write_spectrum_csv);
}

std::vector<fs::path> write_report(const PredictReport& r, OutputFormat format, const fs::path& path) {
  return write_table(r, format, path, write_predict_csv);
}

std::vector<fs::path> write_report(const SweepReport& r, OutputFormat format, const fs::path& path) {
  return write_table(r, format, path, write_sweep_csv);
}

std::vector<fs::path> write_report(const WkbReport& r, const fs::path& path) {
  write_json(path, to_json(r));
  return {path};
}

std::vector<fs::path> write_report(const FigureDataset& d, OutputFormat format, const fs::path& directory) {
  const std::string stem(to_string(d.figure));
  if (format == OutputFormat::Json) {
    const auto path = directory / (stem + ".json");
    write_json(path, to_json(d));
    return {path};
  }

  std::vector<fs::path> written;
  {
    const auto path = directory / (stem + "_modes.csv");
    auto out = open_output(path);
    out << "name,panel,A,rank,lambda,delta_lambda,localized,tail_mass\n";
    for (const auto& m : d.modes) {
      out << fmt::format("{},{},{},{},{},{},{},{}\n", m.name, m.panel, num(m.amplitude), m.rank, num(m.lambda),
                         num(m.delta_lambda), flag(m.localized), num(m.tail_mass));
    }
    written.push_back(path);
  }
  for (const auto& m : d.modes) {
    const auto path = directory / fmt::format("{}_{}.csv", stem, m.name);
    auto out = open_output(path);
    out << "x,envelope_abs,envelope_signed,V_normalized\n";
    for (std::size_t i = 0; i < m.x.size(); ++i) {
      out << fmt::format("{},{},{},{}\n", num(m.x[i]), num(m.envelope_abs[i]), num(m.envelope_signed[i]),
                         num(m.V_normalized[i]));
    }
    written.push_back(path);
  }
  if (d.carrier) {
    const auto path = directory / (stem + "_carrier.csv");
    auto out = open_output(path);
    out << "x,psi\n";
    for (std::size_t i = 0; i < d.carrier->x.size(); ++i) {
      out << fmt::format("{},{}\n", num(d.carrier->x[i]), num(d.carrier->psi[i]));
    }
    written.push_back(path);
  }
  const auto meta_path = directory / (stem + ".meta.json");
  json meta = to_json(d);
  meta.erase("modes");
  meta.erase("carrier");
  write_json(meta_path, meta["metadata"]);
  written.push_back(meta_path);
  return written;
}

}  // namespace nyqenv
