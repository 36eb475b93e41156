#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "orbicert/cli.hpp"
#include "orbicert/text_format.hpp"
#include "support/fixtures.hpp"

using namespace orbicert;
using namespace orbicert::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "orbicert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("orbicert_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    write_text_file(dir / name, text);
    return file(name);
  }
  std::string arrangement(const std::string& name, const Arrangement& a) const {
    return write(name, canonical_dump(to_json(a)));
  }
};

std::string slurp(const std::string& path) {
  return canonical_dump(read_json_file(path));
}

}  // namespace

TEST_CASE("thresholds and standard lines") {
  Run r = run({"thresholds", "--n", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("d_quadric=6") != std::string::npos);
  CHECK(r.out.find("m_min=6") != std::string::npos);
  r = run({"thresholds", "--n", "2", "--m", "3"});
  CHECK(r.out.find("d_big=20") != std::string::npos);
  r = run({"standard-lines", "--n", "2", "--k", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("none exist") != std::string::npos);
  r = run({"standard-lines", "--n", "3", "--k", "1"});
  CHECK(r.out.find("{0,1}|{2,3,4}") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
  Workdir w;
  CHECK(run({"check", "--input", w.write("bad.json", "{bad")}).code == 2);
  CHECK(run({"check", "--input", w.write("zero.json", R"({"n":1,"covectors":[["0","0"]]})")})
            .code == 2);
  CHECK(run({"check", "--input", w.write("ragged.json", R"({"n":2,"covectors":[["1","0"]]})")})
            .code == 2);
  CHECK(run({"check", "--input", w.file("missing.json")}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"thresholds", "--n", "1"}).code == 2);
  const std::string arr = w.arrangement("a.json", noguchi_arrangement());
  CHECK(run({"certify", "--input", arr, "--output", w.file("c.json")}).code == 2);
}

TEST_CASE("randomized modes require a seed") {
  Workdir w;
  const std::string arr = w.arrangement("a.json", noguchi_arrangement());
  CHECK(run({"check", "--input", arr, "--randomized", "--trials", "5"}).code == 2);
  CHECK(run({"verify-identities", "--input", arr, "--m", "6", "--sampled"}).code == 2);
  CHECK(run({"baselocus-sample", "--input", arr, "--m", "6"}).code == 2);
  const Run r = run({"check", "--input", arr, "--randomized", "--seed", "3", "--trials", "5",
                     "--output", w.file("r.json")});
  CHECK(r.code == 3);
  const Json j = read_json_file(w.file("r.json"));
  CHECK(j["linear"]["seed"] == 3);
  CHECK(j["linear"]["verdict"] == "undecided");
}

TEST_CASE("check reports both general position verdicts") {
  Workdir w;
  Run r = run({"check", "--input", w.arrangement("a.json", noguchi_arrangement()), "--quadrics"});
  CHECK(r.code == 0);
  CHECK(r.out.find("quadric general position: pass") != std::string::npos);
  r = run({"check", "--input", w.arrangement("c.json", dual_conic_arrangement()), "--quadrics"});
  CHECK(r.code == 1);
}

TEST_CASE("cover, normalize and differential write artifacts") {
  Workdir w;
  const std::string arr = w.arrangement("a.json", noguchi_arrangement());
  CHECK(run({"normalize", "--input", arr, "--output", w.file("n.json")}).code == 0);
  CHECK(read_json_file(w.file("n.json"))["k"] == 3);
  CHECK(run({"cover", "--input", arr, "--m", "6", "--output", w.file("cov.json")}).code == 0);
  const FermatCover cov = cover_from_json(read_json_file(w.file("cov.json")));
  CHECK(cov.k() == 3);
  CHECK(cov.m == 6);
  const Run d = run({"differential", "--input", arr, "--m", "6", "--rows", "3,5", "--chart", "1",
                     "--output", w.file("d.json")});
  CHECK(d.code == 0);
  const Json dj = read_json_file(w.file("d.json"));
  CHECK(dj["chart"] == 1);
  CHECK(dj["rows"] == Json::array({3, 5}));
  CHECK(dj["twist_exponent"] == -1);
}

TEST_CASE("verify-identities exact and sampled") {
  Workdir w;
  const std::string arr = w.arrangement("a.json", noguchi_arrangement());
  Run r = run({"verify-identities", "--input", arr, "--m", "6", "--exact", "--output",
               w.file("v.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const Json v = read_json_file(w.file("v.json"));
  CHECK(v["bw_factorization"].size() == 9);
  CHECK(v["verdict"] == "pass");
  r = run({"verify-identities", "--input", arr, "--m", "6", "--sampled", "--seed", "4",
           "--samples", "20", "--output", w.file("s.json")});
  CHECK(r.code == 0);
  const Json s = read_json_file(w.file("s.json"));
  CHECK(s["prime"] == default_prime(6));
  CHECK(s["prime_defaulted"] == true);
  CHECK(s["seed"] == 4);
  CHECK(s.contains("trials"));
}

TEST_CASE("baselocus-sample is reproducible") {
  Workdir w;
  const std::string arr = w.arrangement("a.json", noguchi_arrangement());
  const std::vector<std::string> args{"baselocus-sample", "--input", arr, "--m", "6",
                                      "--samples", "50", "--seed", "8", "--output"};
  auto a1 = args, a2 = args;
  a1.push_back(w.file("b1.json"));
  a2.push_back(w.file("b2.json"));
  CHECK(run(a1).code == 0);
  CHECK(run(a2).code == 0);
  CHECK(slurp(w.file("b1.json")) == slurp(w.file("b2.json")));
  const Json b = read_json_file(w.file("b1.json"));
  CHECK(b["counterexamples"] == 0);
  CHECK(b["verdict"] == "evidence-only");
  const Run low = run({"baselocus-sample", "--input", arr, "--m", "5", "--seed", "1"});
  CHECK(low.code == 2);
  CHECK(low.out.find("twist not negative") != std::string::npos);
}

TEST_CASE("certify exit codes and byte-identical output") {
  Workdir w;
  const Arrangement a = noguchi_arrangement();
  const std::string good = w.arrangement(
      "good.json", a.with_multiplicities(std::vector<Multiplicity>(6, Multiplicity::finite(6))));
  std::vector<Multiplicity> low(6, Multiplicity::finite(6));
  low[1] = Multiplicity::finite(5);
  const std::string bad = w.arrangement("bad.json", a.with_multiplicities(low));

  CHECK(run({"certify", "--input", good, "--output", w.file("c1.json"), "--with-evidence",
             "--seed", "2", "--samples", "20"})
            .code == 0);
  CHECK(run({"certify", "--input", good, "--output", w.file("c2.json"), "--with-evidence",
             "--seed", "2", "--samples", "20"})
            .code == 0);
  CHECK(slurp(w.file("c1.json")) == slurp(w.file("c2.json")));
  const Run f = run({"certify", "--input", bad, "--output", w.file("c3.json")});
  CHECK(f.code == 1);
  CHECK(f.out.find("\"check\":\"thresholds\"") != std::string::npos);
  CHECK(run({"certify", "--input", good, "--output", w.file("c4.json"), "--max-strata", "2"})
            .code == 3);
  CHECK(run({"certify", "--input", good, "--output", w.file("c5.json"), "--with-evidence"})
            .code == 2);
}

TEST_CASE("help documents every subcommand") {
  const Run r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* sub : {"check", "normalize", "cover", "differential", "verify-identities",
                          "baselocus-sample", "standard-lines", "thresholds", "certify"})
    CHECK(r.out.find(sub) != std::string::npos);
  const Run c = run({"certify", "--help"});
  CHECK(c.out.find("--with-evidence") != std::string::npos);
  CHECK(c.out.find("--max-strata") != std::string::npos);
}
