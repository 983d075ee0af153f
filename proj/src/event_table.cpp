#include "chshsim/event_table.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "chshsim/errors.hpp"

namespace chshsim {

namespace {

std::string format_lambda(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && s[start] == ' ') ++start;
  return s.substr(start);
}

}  // namespace

std::string format_product(int product) { return product > 0 ? "+1" : "-1"; }

std::vector<EventRow> emit_event_table(std::span<const TrialRecord> records, bool include_lambda) {
  std::vector<EventRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    EventRow row;
    row.event = r.index;
    row.products[r.pair.ordinal()] = r.product.value();
    if (include_lambda && r.lambda) row.lambda = r.lambda->radians();
    rows.push_back(row);
  }
  return rows;
}

void write_event_csv(std::ostream& out, std::span<const EventRow> rows) {
  out << kEventCsvHeader << '\n';
  std::string line;
  for (const auto& row : rows) {
    line = std::to_string(row.event);
    for (const auto& cell : row.products) {
      line += ',';
      if (cell) line += format_product(*cell);
    }
    line += ',';
    line += row.lambda ? format_lambda(*row.lambda) : "unknown";
    line += '\n';
    out << line;
  }
}

std::string render_event_text(std::span<const EventRow> rows) {
  std::vector<std::array<std::string, 6>> cells;
  cells.push_back({"Event#", "A1B1", "A1B2", "A2B1", "A2B2", "lambda"});
  for (const auto& row : rows) {
    std::array<std::string, 6> line;
    line[0] = std::to_string(row.event);
    for (int i = 0; i < 4; ++i) line[i + 1] = row.products[i] ? format_product(*row.products[i]) : "***";
    line[5] = row.lambda ? format_lambda(*row.lambda) : "unknown";
    cells.push_back(line);
  }
  std::array<std::size_t, 6> width{};
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < 6; ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < 6; ++i) {
      if (i > 0) out += " | ";
      out += cells[r][i];
      if (i + 1 < 6) out.append(width[i] - cells[r][i].size(), ' ');
    }
    out += '\n';
    if (r == 0) {
      for (std::size_t i = 0; i < 6; ++i) {
        if (i > 0) out += "-+-";
        out.append(width[i], '-');
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<TrialRecord> read_event_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip(line).empty()) {
    throw InsufficientData("event table is empty: no header and no events");
  }
  if (strip(line) != kEventCsvHeader) {
    throw InvalidInput("event table header must be '" + std::string(kEventCsvHeader) + "'");
  }
  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    const auto where = " on line " + std::to_string(line_no);
    const auto cells = split_csv_line(line);
    if (cells.size() != 6) {
      throw InvalidInput("event table row must have 6 cells" + where);
    }
    TrialRecord record;
    const auto& ev = cells[0];
    if (std::from_chars(ev.data(), ev.data() + ev.size(), record.index).ec != std::errc{} || record.index == 0) {
      throw InvalidInput("bad event number" + where);
    }
    int populated = 0;
    for (int i = 0; i < 4; ++i) {
      const std::string cell = strip(cells[i + 1]);
      if (cell.empty()) continue;
      ++populated;
      if (cell == "+1" || cell == "1") {
        record.product = Outcome::plus();
      } else if (cell == "-1") {
        record.product = Outcome::minus();
      } else {
        throw InvalidInput("product must be +1 or -1" + where);
      }
      record.pair = SettingPair::from_ordinal(i);
    }
    if (populated != 1) {
      throw InvalidInput("exactly one product column must be populated" + where);
    }
    const std::string lambda = strip(cells[5]);
    if (lambda != "unknown") {
      try {
        std::size_t used = 0;
        const double value = std::stod(lambda, &used);
        if (used != lambda.size()) throw std::invalid_argument("trailing");
        record.lambda = Angle(value);
      } catch (const std::logic_error&) {
        throw InvalidInput("lambda must be a number or 'unknown'" + where);
      }
    }
    records.push_back(record);
  }
  return records;
}

}  // namespace chshsim
