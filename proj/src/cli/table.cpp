#include <charconv>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dephaseprobe/cli.hpp"

namespace dephaseprobe::cli {

namespace {

constexpr const char* kBanner = "dephaseprobe";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string::size_type begin = 0;
  while (true) {
    const auto pos = line.find(sep, begin);
    parts.push_back(line.substr(begin, pos - begin));
    if (pos == std::string::npos) break;
    begin = pos + 1;
  }
  return parts;
}

double parse_number(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw std::invalid_argument("read_csv: bad number '" + text + "'");
  return value;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buffer, ptr);
}

void write_csv(const Table& table, std::ostream& out) {
  out << "# " << kBanner << ' ' << table.command << '\n';
  for (const auto& [key, value] : table.config) out << "# " << key << '=' << value << '\n';
  for (const auto& note : table.notes) out << "# note: " << note << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  bool have_header = false;
  const std::string banner = std::string("# ") + kBanner + ' ';
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind(banner, 0) == 0) {
        table.command = line.substr(banner.size());
      } else if (line.rfind("# note: ", 0) == 0) {
        table.notes.push_back(line.substr(8));
      } else if (line.rfind("# ", 0) == 0) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("read_csv: bad config line");
        table.config.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      }
      continue;
    }
    if (!have_header) {
      table.columns = split(line, ',');
      have_header = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != table.columns.size()) {
      throw std::invalid_argument("read_csv: row width does not match header");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) row.push_back(parse_number(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = table.command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.config) config[key] = value;
  doc["config"] = std::move(config);
  doc["notes"] = table.notes;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json entry = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::isfinite(row[c])) {
        entry[table.columns[c]] = row[c];
      } else {
        entry[table.columns[c]] = nullptr;
      }
    }
    rows.push_back(std::move(entry));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace dephaseprobe::cli
