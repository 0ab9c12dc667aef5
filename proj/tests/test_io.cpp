#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "metamine/error.hpp"
#include "metamine/gadgets.hpp"
#include "metamine/io.hpp"
#include "metamine/report.hpp"

using namespace metamine;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("metamine_io_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Csv, Quoting) {
  EXPECT_EQ(read_csv("a,b\n1,2\n"), (CsvRows{{"a", "b"}, {"1", "2"}}));
  EXPECT_EQ(read_csv("a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n"), (CsvRows{{"a", "b"}, {"x,y", "say \"hi\""}}));
  EXPECT_EQ(read_csv("\"multi\nline\",z"), (CsvRows{{"multi\nline", "z"}}));
  EXPECT_EQ(read_csv("a,,c\n\n\"\"\n"), (CsvRows{{"a", "", "c"}, {""}}));
  EXPECT_THROW(read_csv("\"open"), ParseError);
  EXPECT_THROW(read_csv("\"a\"b,c"), ParseError);
}

TEST(Csv, WriteReadRoundTrip) {
  std::mt19937 rng(99);
  const std::string alphabet = "ab ,\"\n\r1";
  for (int iter = 0; iter < 200; ++iter) {
    CsvRows rows(1 + rng() % 4);
    const std::size_t width = 1 + rng() % 3;
    for (auto& row : rows)
      for (std::size_t c = 0; c < width; ++c) {
        std::string cell;
        for (std::size_t k = rng() % 5; k > 0; --k) cell += alphabet[rng() % alphabet.size()];
        row.push_back(cell);
      }
    EXPECT_EQ(read_csv(write_csv(rows)), rows);
  }
}

TEST(DatabaseDir, RoundTrip) {
  const auto dir = scratch("roundtrip");
  const Database db = gen_fig2();
  save_database(db, dir);
  EXPECT_TRUE(fs::exists(dir / "UsPT.csv"));
  EXPECT_EQ(load_database(dir), db);
  auto g = gen_semiacyclic_3col(Graph{{"1", "2", "3"}, {{"1", "2"}, {"2", "3"}}});
  const auto gdir = scratch("gadget");
  save_database(g.db, gdir);
  EXPECT_EQ(load_database(gdir), g.db);
}

TEST(DatabaseDir, Fixture) {
  const Database db = load_database(fs::path(METAMINE_TEST_DATA) / "fig1");
  EXPECT_EQ(db.size(), 3u);
  EXPECT_EQ(db.at("cate").size(), 6u);
  EXPECT_EQ(db.at("usca").row(2)[0].text(), "Anastasia A.");
}

TEST(DatabaseDir, Errors) {
  EXPECT_THROW(load_database("/nonexistent/metamine"), IoError);
  const auto dir = scratch("errors");
  fs::create_directories(dir);
  write_file(dir / "r.csv", "a,b\n1,2\n3\n");
  EXPECT_THROW(load_database(dir), ValidationError);
  write_file(dir / "r.csv", "a,b\n\"1,2\n");
  EXPECT_THROW(load_database(dir), ParseError);
  write_file(dir / "r.csv", "");
  EXPECT_THROW(load_database(dir), ValidationError);
  write_file(dir / "r.csv", "a\n1\n1\n");
  write_file(dir / "notes.txt", "ignored");
  const Database db = load_database(dir);
  EXPECT_EQ(db.size(), 1u);
  EXPECT_EQ(db.at("r").size(), 1u);
}

TEST(Report, Analysis) {
  const auto mq1 = render_analysis(parse_metaquery("P(X,Y) <- P(Y,Z), Q(Z,W)."), Format::text);
  EXPECT_NE(mq1.find("acyclic: yes\n"), std::string::npos);
  EXPECT_NE(mq1.find("full reducer:"), std::string::npos);
  const auto mq2 = render_analysis(parse_metaquery("P(X,Y) <- Q(Y,Z), P(Z,W)."), Format::text);
  EXPECT_NE(mq2.find("acyclic: no\n"), std::string::npos);
  const auto w2 = render_analysis(parse_metaquery("T(A) <- P(A,B), Q(B,C), R(C,D), S(B,D)."), Format::text);
  EXPECT_NE(w2.find("hypertree width: 2\n"), std::string::npos);
  EXPECT_EQ(w2.find("full reducer:"), std::string::npos);
}
