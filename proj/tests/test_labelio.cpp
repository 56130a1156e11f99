#include <doctest.h>

#include <set>

#include "isocurve/labelio.hpp"

using namespace isocurve;

TEST_CASE("labels") {
  const auto l = parse_label("49.196.9.1");
  CHECK(l.level == 49);
  CHECK(l.index == 196);
  CHECK(l.genus == 9);
  CHECK(l.tiebreak == 1);
  for (const char* bad : {"", "49.196.9", "49.196.9.1.2", "49.x.9.1", "48.2.0.1", "-7.2.0.1", "7..0.1"})
    CHECK_THROWS_AS(parse_label(bad), ParseError);
}

TEST_CASE("generator records") {
  const auto recs = parse_generators(
      "# comment\n"
      "\n"
      "7.8.0.1|7|1,1,0,1;3,0,0,1;1,0,0,3\n"
      "7.28.0.1|7|0,1,1,0;3,0,0,1|7Ns\n");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].modulus.value() == 7);
  CHECK(recs[0].generators.size() == 3);
  CHECK(recs[1].alias == "7Ns");
  CHECK(parse_generators(serialize_generators(recs))[1].generators == recs[1].generators);
  CHECK(serialize_record(recs[1]) == "7.28.0.1|7|0,1,1,0;3,0,0,1|7Ns");
}

TEST_CASE("generator parse errors carry line numbers") {
  auto fails_on = [](const std::string& text, std::size_t line) {
    try {
      parse_generators(text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      return true;
    }
    return false;
  };
  CHECK(fails_on("7.8.0.1|7|1,1,0\n", 1));
  CHECK(fails_on("# ok\n7.8.0.1|6|1,1,0,1\n", 2));
  CHECK(fails_on("7.8.0.1|7|1,1,0,7\n", 1));          // entry out of range
  CHECK(fails_on("7.8.0.1|7|1,1,1,1\n", 1));          // singular
  CHECK(fails_on("7.8.0.1|7|1,1,0,1\n7.8.0.1|7|1,0,0,3\n", 2));  // duplicate
  CHECK(fails_on("7.8.0.1\n", 1));
  CHECK(fails_on("7.8.0.1|7|a,1,0,1\n", 1));
}

TEST_CASE("bundled data validates") {
  const auto recs = read_generators_file(ISOCURVE_TEST_DATA);
  CHECK(recs.size() >= 20);
  std::set<std::string> labels;
  for (const auto& r : recs) {
    CAPTURE(r.label);
    const auto v = validate_record(r);
    CHECK(v.ok());
    CHECK(labels.insert(r.label).second);
  }
  CHECK(labels.count("49.196.9.1"));
  CHECK(labels.count("17.72.1.2"));
  CHECK_THROWS(read_generators_file("/nonexistent/file.txt"));
}

TEST_CASE("validation reports mismatches") {
  ImageRecord bad{"7.9.0.1", parse_modulus(7), parse_matrix_list("1,1,0,1;3,0,0,1;1,0,0,3", parse_modulus(7)), ""};
  const auto v = validate_record(bad);
  CHECK_FALSE(v.ok());
  CHECK(v.index == 8);
  CHECK(v.to_text().find("MISMATCH") != std::string::npos);
}

TEST_CASE("known j-invariants") {
  std::size_t g1 = 0, g0 = 0;
  for (const auto& r : known_isolated_j()) (r.family == CurveFamily::Gamma1 ? g1 : g0)++;
  CHECK(g1 == 15);
  CHECK(g0 == 19);
  CHECK(to_string(Rational{"-297756989", "2"}) == "-297756989/2");
  CHECK(to_string(Rational{"-121", "1"}) == "-121");
}

TEST_CASE("report parsing") {
  const auto reps = parse_reports(
      "# header\n"
      "x\tgamma1\t17\t4\tkept\tnone\n"
      "NOTE\tx\t17 4\tcited\n"
      "RESULT\t17 4\n"
      "y\tgamma0\t1\t1\teliminated\tgenus_zero_image: genus of X_G mod 1 is 0\n"
      "RESULT\n");
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].result == std::vector<std::pair<Int, Int>>{{17, 4}});
  CHECK(reps[0].notes.size() == 1);
  CHECK(reps[1].result.empty());
  CHECK_FALSE(reps[1].pairs[0].kept);
  CHECK_THROWS_AS(parse_reports("x\tgamma1\t17\t4\tkept\tnone\n"), ParseError);
  CHECK_THROWS_AS(parse_reports("x\tgamma2\t17\t4\tkept\tnone\nRESULT\n"), ParseError);
}
