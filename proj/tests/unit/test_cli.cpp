#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmeq/cli.hpp"
#include "qmeq/machine_format.hpp"
#include "qmeq/walk.hpp"

using namespace qmeq;

namespace {

const std::string kData = QMEQ_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "qmeq_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("check reports the case 1 witness") {
  const auto r = run({"check", kData + "/walk4_H.qmm", kData + "/walk4_H.qmm", "--state1", "0c0p",
                      "--state2", "0c2p"});
  CHECK(r.code == kExitNotEquivalent);
  CHECK(r.out.find("verdict: not-equivalent") != std::string::npos);
  CHECK(r.out.find("witness: +00 / 000") != std::string::npos);
  CHECK(r.out.find("gap: 0.5\n") != std::string::npos);
}

TEST_CASE("check reports equivalence for case 6") {
  const auto r = run({"check", kData + "/walk4_H.qmm", kData + "/walk4_Y.qmm", "--state1", "0c0p",
                      "--state2", "0c0p"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("verdict: equivalent") != std::string::npos);
}

TEST_CASE("JSON reports are complete and reproducible") {
  const auto a = scratch("a.json");
  const auto b = scratch("b.json");
  for (const auto& path : {a, b}) {
    const auto r = run({"check", kData + "/walk4_H.qmm", kData + "/walk4_H.qmm", "--state1", "0c0p",
                        "--state2", "0c2p", "--json", path.string(), "--no-timing"});
    CHECK(r.code == kExitNotEquivalent);
  }
  CHECK(slurp(a) == slurp(b));
  const auto j = nlohmann::json::parse(slurp(a));
  for (const char* key : {"schema", "verdict", "witness", "p1", "p2", "basis_size", "elapsed_s"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK(j["witness"]["inputs"] == nlohmann::json::array({"+", "e0", "e0"}));
  CHECK(j["witness"]["outputs"] == nlohmann::json::array({"0", "0", "0"}));
  CHECK(j["p1"].get<double>() == doctest::Approx(0.5));
  CHECK(j["elapsed_s"].get<double>() == 0.0);

  const auto eq = run({"check", kData + "/walk4_H.qmm", kData + "/walk4_Y.qmm", "--state1", "0c0p",
                       "--state2", "0c0p", "--json", "-", "--no-timing"});
  const auto k = nlohmann::json::parse(eq.out.substr(eq.out.find('{')));
  CHECK(k["witness"]["inputs"].empty());
  CHECK(k["p1"].is_null());
}

TEST_CASE("circuits and machines can be mixed") {
  const auto r = run({"check", kData + "/walk4_H_gates.qc", kData + "/walk4_H.qmm", "--state1", "+c1p",
                      "--state2", "+c1p"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("oracle-check") {
  const std::vector<std::string> base = {"oracle-check", kData + "/walk4_H.qmm", kData + "/walk4_H.qmm",
                                         "--state1", "0c0p", "--state2", "0c2p"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  CHECK(with({"--max-len", "2"}).code == kExitOk);
  const auto found = with({"--max-len", "3"});
  CHECK(found.code == kExitNotEquivalent);
  CHECK(found.out.find("witness: +00 / 000") != std::string::npos);
  const auto capped = with({"--max-len", "12"});
  CHECK(capped.code == kExitResource);
  CHECK(capped.err.find("cap") != std::string::npos);
}

TEST_CASE("simulate is seeded") {
  const std::vector<std::string> args = {"simulate", kData + "/walk4_H.qmm", "--state", "0c0p", "--inputs",
                                         "+00", "--seed", "3", "--shots", "2000"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("000  ") != std::string::npos);
  CHECK(a.out.find("exact 0.5") != std::string::npos);
}

TEST_CASE("gen-walk reproduces the shipped files") {
  const auto out = scratch("walk4_Y.qmm");
  CHECK(run({"gen-walk", "--size", "4", "--coin", "Y", "-o", out.string()}).code == kExitOk);
  CHECK(slurp(out) == slurp(kData + "/walk4_Y.qmm"));
  CHECK(run({"gen-walk", "--size", "6", "--coin", "H"}).code == kExitUsage);
  CHECK(run({"gen-walk", "--size", "4", "--coin", "Q"}).code == kExitUsage);
}

TEST_CASE("compile-circuit output parses to the walk machine") {
  const auto out = scratch("gates.qmm");
  CHECK(run({"compile-circuit", kData + "/walk4_H_gates.qc", "-o", out.string()}).code == kExitOk);
  const auto m = parse_machine_file(out);
  CHECK(max_abs_diff(m.machine.unitary(), build_walk_machine(4, hadamard_coin()).machine.unitary()) <= 1e-12);
}

TEST_CASE("selftest subset") {
  const auto r = run({"selftest", "--cases", "1,6", "--jobs", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("case 1:") < r.out.find("case 6:"));
  CHECK(r.out.find("2/2 cases match") != std::string::npos);
  CHECK(run({"selftest", "--cases", "9"}).code == kExitUsage);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"check", kData + "/walk4_H.qmm"}).code == kExitUsage);
  CHECK(run({"check", kData + "/missing.qmm", kData + "/walk4_H.qmm", "--state1", "0c0p", "--state2",
             "0c0p"}).code == kExitUsage);
  CHECK(run({"check", kData + "/walk4_H.qmm", kData + "/walk4_H.qmm", "--state1", "nope", "--state2",
             "0c0p"}).code == kExitUsage);
  CHECK(run({"check", kData + "/walk4_H.qmm", kData + "/walk8_H.qmm", "--state1", "0c0p", "--state2",
             "0c0p"}).code == kExitNotEquivalent);  // sizes may differ

  const auto broken = scratch("broken.qmm");
  std::ofstream(broken) << "dims 2 1\noutcomes 0 1\nunitary\n1 0\n0 1 2\n";
  const auto r = run({"check", broken.string(), broken.string(), "--state1", "a", "--state2", "a"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 5") != std::string::npos);

  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("QMEQ_TOL overrides the span tolerance") {
  const std::vector<std::string> args = {"check", kData + "/walk4_H.qmm", kData + "/walk4_H.qmm",
                                         "--state1", "0c0p", "--state2", "0c2p"};
  ::setenv("QMEQ_TOL", "abc", 1);
  CHECK(run(args).code == kExitUsage);
  // A threshold above every probability gap hides the difference.
  ::setenv("QMEQ_TOL", "0.9", 1);
  CHECK(run(args).code == kExitOk);
  ::unsetenv("QMEQ_TOL");
  CHECK(run(args).code == kExitNotEquivalent);
}
