#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ellip/csv.hpp"

using namespace ellip;

namespace {

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

}  // namespace

TEST(Csv, HeaderDetection) {
  const CsvTable with = parse("a,b\n1,2\n3,4\n");
  EXPECT_EQ(with.header, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(with.values.rows(), 2);
  const CsvTable without = parse("1,2\n3,4\n");
  EXPECT_TRUE(without.header.empty());
  EXPECT_EQ(without.values(1, 0), 3.0);
}

TEST(Csv, SkipsBlankLinesBomAndCarriageReturns) {
  const CsvTable t = parse("\xEF\xBB\xBFx,y\r\n\r\n1.5, -2e3\r\n\n4,5\n");
  EXPECT_EQ(t.header.size(), 2u);
  ASSERT_EQ(t.values.rows(), 2);
  EXPECT_EQ(t.values(0, 1), -2000.0);
}

TEST(Csv, TextCellReportsPosition) {
  try {
    parse("a,b\n1,2\n3,oops\n");
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(Csv, RaggedRowsAndEmptyInput) {
  EXPECT_THROW(parse("1,2\n3\n"), CsvError);
  EXPECT_THROW(parse(""), CsvError);
  EXPECT_THROW(parse("a,b\n"), CsvError);
  EXPECT_THROW(parse("1,nan\n2,3\n"), CsvError);
}

TEST(Csv, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1e3);
  Eigen::MatrixXd m(50, 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  m(0, 0) = std::numeric_limits<double>::denorm_min();
  m(1, 1) = -0.1;
  m(2, 2) = 1e300;
  std::ostringstream out;
  write_csv(out, m, {"c1", "c2", "c3", "c4"});
  const CsvTable back = parse(out.str());
  EXPECT_EQ(back.header.front(), "c1");
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    EXPECT_EQ(back.values.data()[i], m.data()[i]);
  }
}

TEST(Csv, FormatDouble) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
}

TEST(Csv, MissingFile) {
  EXPECT_THROW(read_csv("/nonexistent/dir/file.csv"), Error);
}
