#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "isocurve/cli.hpp"
#include "isocurve/labelio.hpp"

using namespace isocurve;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "isocurve");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("info") {
  const auto r = run({"info", "--label", "49.196.9.1"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("196") != std::string::npos);
  CHECK(run({"info", "--cartan", "borel", "--mod", "25"}).code == cli::kExitOk);
  CHECK(run({"info", "--gens", "1,1,0,1", "--mod", "7"}).code == cli::kExitOk);
}

TEST_CASE("argument errors") {
  CHECK(run({}).code != 0);
  CHECK(run({"info"}).code == cli::kExitError);
  auto unknown = run({"info", "--label", "3.99.0.1"});
  CHECK(unknown.code == cli::kExitError);
  CHECK(unknown.err.find("unknown label") != std::string::npos);
  CHECK(run({"info", "--cartan", "borel"}).code == cli::kExitError);
  CHECK(run({"info", "--cartan", "nope", "--mod", "7"}).code != 0);
  CHECK(run({"info", "--gens", "1,1,1,1", "--mod", "7"}).code == cli::kExitError);
  CHECK(run({"info", "--label", "7.8.0.1", "--cartan", "borel"}).code != 0);
  CHECK(run({"filter", "--label", "7.8.0.1", "--family", "gamma2"}).code != 0);
  CHECK(run({"filter", "--label", "7.8.0.1", "--max-enum", "10"}).code != 0);
  CHECK(run({"info", "--label", "7.8.0.1", "--gens-file", "/nonexistent"}).code == cli::kExitError);
}

TEST_CASE("filter exit codes follow the final set") {
  CHECK(run({"filter", "--label", "7.8.0.1"}).code == cli::kExitOk);
  const auto r = run({"filter", "--label", "17.72.1.2", "--format", "lines"});
  CHECK(r.code == cli::kExitNonempty);
  const auto parsed = parse_reports(r.out);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].result == std::vector<std::pair<Int, Int>>{{17, 4}});
}

TEST_CASE("batch output is parseable and ordered") {
  const auto r = run({"batch", "--family", "gamma0", "--format", "lines", "--threads", "3"});
  CHECK(r.code == cli::kExitNonempty);
  const auto parsed = parse_reports(r.out);
  const auto recs = read_generators_file(cli::default_data_file());
  REQUIRE(parsed.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(parsed[i].pairs.front().label == recs[i].label);
  CHECK(r.out.find("# summary gamma0") != std::string::npos);
}

TEST_CASE("validate and --out") {
  const std::string path = "isocurve_cli_test_out.txt";
  CHECK(run({"validate", "--out", path}).code == cli::kExitOk);
  std::ifstream in(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    CHECK(line.find("\tok") != std::string::npos);
    ++n;
  }
  CHECK(n == read_generators_file(cli::default_data_file()).size());
  std::remove(path.c_str());
}

TEST_CASE("lattice-check certificate") {
  const auto r = run({"lattice-check", "--label", "49.196.9.1", "--threads", "2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("VERDICT\tclasses=1") != std::string::npos);
  CHECK(r.out.find("VERDICT\tcontained\tindex=7") != std::string::npos);
  CHECK(r.out.find("VERDICT\trigid") != std::string::npos);
  const auto gl = run({"lattice-check", "--cartan", "full", "--mod", "3", "--bound", "8", "--any-reduction"});
  CHECK(gl.out.find("VERDICT\tclasses=6") != std::string::npos);
}
