#include <doctest.h>

#include <stdexcept>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using fsc::cli::run;

namespace {

const std::string kFixtures = FSC_FIXTURES;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "fsc");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fsc_cli_test_" + name)).string();
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(call({}).code == 1);
  CHECK(call({"nonsense"}).code == 1);
  CHECK(call({"cutset", "--k", "3"}).code == 1);
  CHECK(call({"verify", kFixtures + "/missing.fsc"}).code == 1);
}

TEST_CASE("verify passes on the exact-repair fixture") {
  const auto r = call({"verify", kFixtures + "/example1.fsc"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict pass") != std::string::npos);
  const auto j = nlohmann::json::parse(call({"verify", kFixtures + "/example1.fsc", "--json"}).out);
  CHECK(j["verdict"] == "pass");
  CHECK(j["states"] == 4);
}

TEST_CASE("verify fails on the corrupted fixture") {
  const auto r = call({"verify", kFixtures + "/example1_corrupt.fsc"});
  CHECK(r.code == 2);
  CHECK(r.out.find("failing collection") != std::string::npos);
  CHECK(r.out.find("verdict fail") != std::string::npos);
  const auto j = nlohmann::json::parse(call({"verify", kFixtures + "/example1_corrupt.fsc", "--json"}).out);
  CHECK(j["verdict"] == "fail");
  CHECK(j["failing_collection"].is_string());
}

TEST_CASE("parse errors exit 1 with a line number") {
  const auto path = temp_path("bad.fsc");
  std::ofstream(path) << "FSC 1\nfield 2 1\nambient 3\nsubspace A\nrow 1 0\nend\n";
  const auto r = call({"verify", path});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 5") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("cutset") {
  const auto r = call({"cutset", "--k", "3", "--r", "3", "--alpha", "2", "--beta", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("5\n", 0) == 0);
  CHECK(r.out.find("m_rs(3,1) = 5") != std::string::npos);
}

TEST_CASE("partition") {
  const auto path = temp_path("partition.fsc");
  const auto r = call({"partition", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("56 states verified, unique newcomer per collection") != std::string::npos);
  CHECK(call({"verify", path}).code == 0);
  std::remove(path.c_str());
}

TEST_CASE("good-check") {
  CHECK(call({"good-check", kFixtures + "/partition_seed.fsc", "--r", "3", "--s", "1"}).code == 0);
  CHECK(call({"good-check", kFixtures + "/example1.fsc", "--r", "3", "--s", "1"}).code == 1);
}

TEST_CASE("family without closure") {
  const auto r = call({"family", "--r", "3", "--s", "1", "--q", "2", "--steps", "50", "--skip-closure"});
  CHECK(r.code == 0);
  CHECK(r.out.find("m_rs 5") != std::string::npos);
  CHECK(r.out.find("every replacement good") != std::string::npos);
  CHECK(call({"family", "--r", "4", "--s", "1", "--q", "2", "--skip-closure"}).code == 1);
}

TEST_CASE("family closure cap exits 3") {
  CHECK(call({"family", "--r", "3", "--s", "1", "--q", "2", "--steps", "0", "--cap", "100"}).code == 3);
}

TEST_CASE("family closure verifies for (2,1)") {
  const auto r = call({"family", "--r", "2", "--s", "1", "--q", "2", "--steps", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict pass") != std::string::npos);
}

TEST_CASE("simulate") {
  const auto transcript = temp_path("transcript.txt");
  const auto r = call({"simulate", kFixtures + "/example1.fsc", "--data", "1011", "--steps", "100", "--seed", "4",
                       "--json", "--transcript", transcript});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "pass");
  CHECK(j["downloads"] == 300);
  CHECK(j["states"] == 4);
  std::ifstream in(transcript);
  std::stringstream first;
  first << in.rdbuf();
  call({"simulate", kFixtures + "/example1.fsc", "--data", "1011", "--steps", "100", "--seed", "4", "--transcript",
        transcript});
  std::ifstream again(transcript);
  std::stringstream second;
  second << again.rdbuf();
  CHECK(first.str() == second.str());
  CHECK(first.str().find("event 1\n") == 0);
  std::remove(transcript.c_str());
  CHECK(call({"simulate", kFixtures + "/example1.fsc", "--data", "10", "--steps", "1"}).code == 1);
  CHECK(call({"simulate", kFixtures + "/example1_corrupt.fsc", "--data", "1011", "--steps", "1"}).code == 2);
}

TEST_CASE("search caps exit 3") {
  CHECK(call({"search", kFixtures + "/partition_seed.fsc", "--max-nodes", "10"}).code == 3);
}
