#include "ellip/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace ellip {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      width = cells.size();
      bool any_numeric = false;
      for (const auto& c : cells) any_numeric = any_numeric || parse_number(c).has_value();
      if (!any_numeric) {
        table.header = cells;
        continue;
      }
    }
    if (cells.size() != width) {
      throw CsvError(line_no, 0, "row " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw CsvError(line_no, c + 1, "row " + std::to_string(line_no) + ", column " +
                                           std::to_string(c + 1) + ": not a finite number: '" +
                                           cells[c] + "'");
      }
      row[c] = *v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(0, 0, "no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < width; ++c) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, 0, "cannot open '" + path + "'");
  return parse_csv(in);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& values,
               const std::vector<std::string>& header) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  if (!header.empty()) out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) out << (c ? "," : "") << format_double(values(i, c));
    out << '\n';
  }
}

void write_csv(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& values,
               const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Domain, "cannot write '" + path + "'");
  write_csv(out, values, header);
  if (!out) throw Error(ErrorCode::Domain, "write to '" + path + "' failed");
}

}  // namespace ellip
