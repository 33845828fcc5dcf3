#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "swapbell/io.hpp"

using namespace swapbell;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run swapbell_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "swapbell");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("swapbell_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 2") {
    CHECK(swapbell_cli({}).code == cli::kExitUsage);
    CHECK(swapbell_cli({"frobnicate"}).code == cli::kExitUsage);
    CHECK(swapbell_cli({"decompose", "--phi1", "abc"}).code == cli::kExitUsage);
    CHECK(swapbell_cli({"refute", "--kappa", "0"}).code == cli::kExitUsage);
    CHECK(swapbell_cli({"refute", "--method", "sat"}).code == cli::kExitUsage);
    CHECK(swapbell_cli({"decompose", "--json", "--table"}).code == cli::kExitUsage);
    CHECK(swapbell_cli({"solve"}).code == cli::kExitUsage);
    CHECK(swapbell_cli({"--help"}).code == cli::kExitOk);
  }

  TEST_CASE("decompose") {
    const auto r = swapbell_cli({"decompose", "--phi1", "0.3", "--phi2", "-0.2", "--phi3", "1.1", "--phi4", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("max_deviation") != std::string::npos);

    const auto j = swapbell_cli({"decompose", "--json", "--degrees", "--phi2", "45", "--phi4", "45"});
    REQUIRE(j.code == 0);
    const auto doc = io::parse_report(j.out);
    CHECK(doc.command == "decompose");
    CHECK(doc.body.dump().find("max_deviation") != std::string::npos);
  }

  TEST_CASE("verify-qm passes and catches a corrupted closed form") {
    std::ostringstream out;
    cli::VerifyQmOptions small;
    small.grid = 64;
    small.families = 5;
    small.events = 2000;
    CHECK(cli::verify_qm(small, out) == cli::kExitOk);
    CHECK(io::parse_report(out.str()).body.at("passed") == true);

    cli::QmModel broken;
    broken.closed_form = [](const AngleSettings& a) {
      auto amps = bell_bell_amplitudes_closed_form(a);
      amps.coeffs[0][3] = -amps.coeffs[0][3];
      return amps;
    };
    std::ostringstream bad;
    CHECK(cli::verify_qm(small, bad, broken) == cli::kExitViolation);
    const auto body = io::parse_report(bad.str()).body;
    CHECK(body.at("passed") == false);
    CHECK_FALSE(body.at("violations").empty());

    CHECK(swapbell_cli({"verify-qm", "--grid", "16", "--families", "2", "--events", "100"}).code == 0);
  }

  TEST_CASE("simulate") {
    TempDir tmp;
    const std::vector<std::string> base{"simulate", "--phi1", "0.3", "--phi2", "-0.2", "--phi3",
                                        "1.1",      "--phi4", "0.5",  "--seed", "7"};
    SUBCASE("zero events writes only the header") {
      auto args = base;
      args.insert(args.end(), {"--events", "0", "--out", tmp.file("zero.csv")});
      CHECK(swapbell_cli(args).code == 0);
      CHECK(slurp(tmp.file("zero.csv")) == std::string(io::kEventCsvHeader) + "\n");
    }
    SUBCASE("same seed gives a byte-identical file") {
      auto a = base, b = base;
      a.insert(a.end(), {"--events", "5000", "--out", tmp.file("a.csv")});
      b.insert(b.end(), {"--events", "5000", "--out", tmp.file("b.csv")});
      REQUIRE(swapbell_cli(a).code == 0);
      REQUIRE(swapbell_cli(b).code == 0);
      CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
      CHECK(slurp(tmp.file("a.csv")).size() > 5000);
    }
    SUBCASE("stdout holds only the CSV") {
      auto args = base;
      args.insert(args.end(), {"--events", "6"});
      const auto r = swapbell_cli(args);
      CHECK(r.code == 0);
      CHECK(r.out == slurp(SWAPBELL_TEST_DATA_DIR "/events_seed7.csv"));
      CHECK(r.err.find("sector_product_violations=0") != std::string::npos);
    }
    SUBCASE("perfect-correlation setting reports zero violations") {
      const auto r = swapbell_cli({"simulate", "--degrees", "--phi2", "45", "--phi3", "45", "--events",
                                   "20000", "--out", tmp.file("p.csv")});
      CHECK(r.code == 0);
      CHECK(r.out.find("zeta+=zero_or_pi") != std::string::npos);
      std::ifstream in(tmp.file("p.csv"));
      for (const auto& e : io::read_events_csv(in))
        if (e.kappa == 1) CHECK(e.product == 1);
    }
  }

  TEST_CASE("refute") {
    CHECK(swapbell_cli({"refute", "--alpha", "0", "--beta", "0", "--kappa", "1", "--method", "enumerate"}).code == 0);
    const auto r = swapbell_cli({"refute", "--alpha", "1.1", "--beta", "2.3", "--kappa", "-1", "--method", "gf2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("unsat") != std::string::npos);
    CHECK(swapbell_cli({"refute", "--fig2"}).code == 0);
    CHECK(swapbell_cli({"refute", "--fig2", "--method", "enumerate", "--kappa", "-1"}).code == 0);
  }

  TEST_CASE("compile and solve") {
    TempDir tmp;
    const std::string four = SWAPBELL_DATA_DIR "/four_settings.json";

    SUBCASE("four-setting file with factorization is Unsat") {
      REQUIRE(swapbell_cli({"compile", "--settings", four, "--factorize", "--out", tmp.file("c.json")}).code == 0);
      const auto cs = io::constraint_set_from_json(json::parse(slurp(tmp.file("c.json"))));
      CHECK(cs.constraint_count() == 6);
      for (const std::string method : {"gf2", "enumerate"}) {
        const auto r = swapbell_cli({"solve", "--in", tmp.file("c.json"), "--method", method, "--out",
                                     tmp.file("r.json")});
        CHECK(r.code == 0);
        const auto res = io::solve_result_from_json(json::parse(slurp(tmp.file("r.json"))));
        CHECK(res.status == SolveStatus::Unsat);
        CHECK(verify_certificate(cs, res));
      }
      CHECK(swapbell_cli({"solve", "--in", tmp.file("c.json"), "--expect", "sat"}).code == cli::kExitViolation);
    }
    SUBCASE("generic settings give an empty Sat set") {
      write_file(tmp.file("g.json"), R"({"format_version": 1, "settings": [[0.1, 0.7, -0.3, 1.9]]})");
      REQUIRE(swapbell_cli({"compile", "--settings", tmp.file("g.json"), "--out", tmp.file("c.json")}).code == 0);
      const auto cs = io::constraint_set_from_json(json::parse(slurp(tmp.file("c.json"))));
      CHECK(cs.constraint_count() == 0);
      const auto r = swapbell_cli({"solve", "--in", tmp.file("c.json"), "--expect", "sat"});
      CHECK(r.code == 0);
      CHECK(json::parse(r.out).at("status") == "sat");
    }
    SUBCASE("Bell/Bell compile is Sat") {
      REQUIRE(swapbell_cli({"compile", "--settings", four, "--fig", "2", "--out", tmp.file("c.json")}).code == 0);
      CHECK(swapbell_cli({"solve", "--in", tmp.file("c.json"), "--expect", "sat", "--method", "enumerate"}).code == 0);
      // without --expect only the verification decides the exit code
      const auto r = swapbell_cli({"solve", "--in", tmp.file("c.json")});
      CHECK(r.code == 0);
      CHECK(json::parse(r.out).at("status") == "sat");
      CHECK(swapbell_cli({"solve", "--in", tmp.file("c.json"), "--expect", "unsat"}).code == cli::kExitViolation);
    }
    SUBCASE("degrees and kappa flags") {
      write_file(tmp.file("d.json"), R"({"format_version": 1, "settings": [[0, 45, 45, 0], [0, 45, 0, 45]]})");
      REQUIRE(swapbell_cli({"compile", "--settings", tmp.file("d.json"), "--degrees", "--kappa", "-1", "--out",
                            tmp.file("c.json")})
                  .code == 0);
      const auto cs = io::constraint_set_from_json(json::parse(slurp(tmp.file("c.json"))));
      REQUIRE(cs.constraint_count() == 2);
      CHECK(cs.constraint(0).required_sign == -1);
      CHECK(cs.context().kappa == -1);
    }
    SUBCASE("bad input files exit 2") {
      write_file(tmp.file("bad.json"), "{\"format_version\": 7}");
      CHECK(swapbell_cli({"compile", "--settings", tmp.file("bad.json")}).code == cli::kExitUsage);
      CHECK(swapbell_cli({"solve", "--in", tmp.file("bad.json")}).code == cli::kExitUsage);
      CHECK(swapbell_cli({"solve", "--in", tmp.file("missing.json")}).code == cli::kExitUsage);
    }
  }
}
