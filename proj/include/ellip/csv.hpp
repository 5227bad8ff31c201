#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "ellip/error.hpp"

namespace ellip {

/// Malformed CSV input. Row and column are 1-based positions in the file
/// (0 when not applicable).
class CsvError : public Error {
 public:
  CsvError(std::size_t row, std::size_t column, const std::string& what)
      : Error(ErrorCode::Domain, what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

struct CsvTable {
  std::vector<std::string> header;  // empty if the file had none
  Eigen::MatrixXd values;
};

/// Comma-separated numeric table. The first row is a header iff none of its
/// cells parses as a number. Blank lines are skipped.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

/// Shortest round-trip text ("%.17g").
std::string format_double(double x);

void write_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& values,
               const std::vector<std::string>& header);
void write_csv(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& values,
               const std::vector<std::string>& header);

}  // namespace ellip
