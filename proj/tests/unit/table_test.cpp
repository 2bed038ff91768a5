#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "ptwell_cli/table.hpp"

namespace ptwell::cli {
namespace {

TEST(Table, CsvRoundTripsDoubles) {
  Table t;
  t.columns = {"a", "b"};
  t.add_row({0.1, 1.0 / 3.0});
  std::ostringstream os;
  write_csv(t, os);
  EXPECT_EQ(os.str(), "a,b\n0.10000000000000001,0.33333333333333331\n");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Table, CsvMetadataLine) {
  Table t;
  t.columns = {"x"};
  t.meta = {{"k", 2.0}, {"E", 4.0}};
  t.add_row({1.0});
  std::ostringstream os;
  write_csv(t, os);
  EXPECT_EQ(os.str(), "# k=2,E=4\nx\n1\n");
}

TEST(Table, RowWidthMustMatch) {
  Table t;
  t.columns = {"x", "y"};
  EXPECT_THROW(t.add_row({1.0}), std::logic_error);
}

TEST(Table, JsonIsColumnOriented) {
  Table t;
  t.columns = {"x", "y"};
  t.meta = {{"k", 1.5}};
  t.add_row({1.0, 2.0});
  t.add_row({3.0, std::numeric_limits<double>::quiet_NaN()});
  std::ostringstream os;
  write_json(t, os);
  const auto j = nlohmann::json::parse(os.str());
  EXPECT_EQ(j["meta"]["k"], 1.5);
  EXPECT_EQ(j["columns"]["x"][1], 3.0);
  EXPECT_TRUE(j["columns"]["y"][1].is_null());
}

}  // namespace
}  // namespace ptwell::cli
