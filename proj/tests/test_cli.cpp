#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "golden_families.hpp"

namespace fs = std::filesystem;
using meanstream::cli::run_cli;
using nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(args, in, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "meanstream_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("eval prints the shortest round-trip value") {
  auto r = run({"eval", "--family", "gini", "--p", "2", "--q", "1"}, "3\n4\n");
  CHECK(r.status == 0);
  CHECK(r.out == "3.5714285714285716\n");
  CHECK(run({"eval", "--family", "power", "--p", "1"}, "5\n").out == "5\n");
  CHECK(run({"eval", "--spec", R"({"family":"hamy","r":2})"}, "4,9\n").out == "6\n");
}

TEST_CASE("eval input protocol") {
  CHECK(run({"eval", "--family", "power", "--p", "1"}, "1, 2\n\n3\n#\n100\n").out == "2\n");
  CHECK(run({"eval", "--family", "power", "--p", "1"}, "2\r\n4\r\n").out == "3\n");

  const auto csv = scratch("in.csv");
  std::ofstream(csv) << "a,b\n1,10\n2,20\n3,60\n";
  CHECK(run({"eval", "--family", "power", "--p", "1", "--input", csv.string(), "--column", "b"}).out == "30\n");
  CHECK(run({"eval", "--family", "power", "--p", "1", "--input", csv.string(), "--column", "c"}).status == 2);
  const auto plain = scratch("in_plain.csv");
  std::ofstream(plain) << "1,10\n2,20\n";
  CHECK(run({"eval", "--family", "power", "--p", "1", "--input", plain.string(), "--column", "0"}).out == "1.5\n");
}

TEST_CASE("eval exit codes") {
  CHECK(run({"eval", "--family", "power", "--p", "1"}, "").status == 4);
  CHECK(run({"eval", "--family", "power", "--p", "1"}, "#\n5\n").status == 4);
  const auto parse = run({"eval", "--family", "power", "--p", "1"}, "1\n2\nabc\n");
  CHECK(parse.status == 2);
  CHECK(parse.err.find("line 3") != std::string::npos);
  const auto domain = run({"eval", "--family", "power", "--p", "1"}, "1\n-2\n");
  CHECK(domain.status == 3);
  CHECK(domain.err.find("line 2") != std::string::npos);
  CHECK(run({"eval", "--family", "piecewise_h"}, "5\n").status == 3);
  CHECK(run({"eval", "--family", "nope"}, "1\n").status == 1);
  CHECK(run({"eval", "--family", "power", "--p", "1", "--input", "/nonexistent/x"}).status == 1);
  CHECK(run({"frobnicate"}).status == 1);
}

TEST_CASE("eval writes states and merge combines them") {
  const auto a = scratch("a.json");
  const auto b = scratch("b.json");
  const auto m = scratch("m.json");
  const std::vector<std::string> gini{"--family", "gini", "--p", "2", "--q", "1"};
  auto args = std::vector<std::string>{"eval"};
  args.insert(args.end(), gini.begin(), gini.end());
  auto with_out = [&](const fs::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  CHECK(run(with_out(a), "3\n").status == 0);
  CHECK(run(with_out(b), "4\n").status == 0);
  const auto merged = run({"merge", a.string(), b.string(), "--print-value"});
  CHECK(merged.status == 0);
  const auto lines = merged.out.substr(merged.out.find('\n') + 1);
  CHECK(lines == "3.5714285714285716\n");
  CHECK(json::parse(merged.out.substr(0, merged.out.find('\n')))["reals"] == json({"0x1.9p+4", "0x1.cp+2"}));

  CHECK(run({"merge", a.string(), "--out", m.string()}).status == 0);
  CHECK(json::parse(slurp(m)) == json::parse(slurp(a)));

  const auto empty = scratch("empty.json");
  CHECK(run(with_out(empty), "").status == 0);
  CHECK(run({"merge", a.string(), empty.string(), "--print-value"}).out.ends_with("3\n"));

  const auto p = scratch("p.json");
  CHECK(run({"eval", "--family", "power", "--p", "1", "--out", p.string()}, "4\n").status == 0);
  CHECK(run({"merge", a.string(), p.string()}).status == 5);
  const auto g3 = scratch("g3.json");
  CHECK(run({"eval", "--family", "gini", "--p", "3", "--q", "1", "--out", g3.string()}, "4\n").status == 0);
  CHECK(run({"merge", a.string(), g3.string()}).status == 5);

  const auto broken = scratch("broken.json");
  std::ofstream(broken) << slurp(a).substr(0, 20);
  CHECK(run({"merge", a.string(), broken.string()}).status == 2);
  CHECK(run({"merge"}).status == 1);
}

TEST_CASE("classify matches the golden file") {
  std::string text;
  for (const auto& flags : kGoldenFamilies) {
    std::vector<std::string> args{"classify"};
    args.insert(args.end(), flags.begin(), flags.end());
    const auto r = run(args);
    REQUIRE(r.status == 0);
    text += r.out + "\n";
  }
  const fs::path golden = fs::path(MEANSTREAM_GOLDEN_DIR) / "classify.txt";
  if (std::getenv("MEANSTREAM_UPDATE_GOLDEN")) std::ofstream(golden) << text;
  CHECK(text == slurp(golden));
}

TEST_CASE("classify json") {
  const auto r = run({"classify", "--family", "biplanar", "--p", "2", "--q", "3", "--c", "3", "--d", "3",
                      "--format", "json"});
  const auto j = json::parse(r.out);
  CHECK(j["type"] == "T5+");
  CHECK(j["k"] == 5);
  CHECK(j["chain_position"] == 9);
  const auto m = json::parse(run({"classify", "--family", "median", "--format", "json"}).out);
  CHECK(m["type"] == "no finite type");
  CHECK(m["k"].is_null());
  CHECK(run({"classify", "--family", "median", "--format", "yaml"}).status == 1);
}

TEST_CASE("verify emits one JSON report per line") {
  const auto r = run({"verify", "--family", "gini", "--p", "2", "--q", "1", "--format", "json"});
  CHECK(r.status == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto j = json::parse(line);
    CHECK(j.contains("holds"));
    ++count;
  }
  CHECK(count == 8);
  const auto table = run({"verify", "--family", "hamy", "--r", "2"});
  CHECK(table.out.find("repetition_invariance") != std::string::npos);
}

TEST_CASE("verify seed handling") {
  const std::vector<std::string> base{"verify", "--family", "power", "--p", "1", "--format", "json"};
  auto seeded = base;
  seeded.insert(seeded.end(), {"--seed", "5"});
  CHECK(run(seeded).out == run(seeded).out);
  ::setenv("MEANSTREAM_SEED", "5", 1);
  const auto from_env = run(base).out;
  ::unsetenv("MEANSTREAM_SEED");
  CHECK(from_env == run(seeded).out);
  ::setenv("MEANSTREAM_SEED", "abc", 1);
  CHECK(run(base).status == 1);
  ::unsetenv("MEANSTREAM_SEED");
}

TEST_CASE("myhill profile output") {
  const auto r = run({"myhill", "--family", "quasi_arithmetic", "--f", "identity", "--alphabet", "0,1,2",
                      "--max-len", "8", "--probe-len", "2", "--format", "json"});
  CHECK(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["counts"] == json({3, 5, 7, 9, 11, 13, 15, 17}));
  CHECK(j["growth"]["classification"] == "bounded-linear");
  CHECK(run({"myhill", "--family", "power", "--p", "1", "--alphabet", "0,1"}).status == 3);
  CHECK(run({"myhill", "--family", "median", "--max-len", "3", "--format", "json"}).status == 0);
  CHECK(run({"myhill", "--family", "median", "--alphabet", "0,x"}).status == 2);
}
