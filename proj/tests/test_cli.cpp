#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("raag_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write(const std::string& name, const std::string& content) {
  fs::path p = work_dir() / name;
  std::ofstream(p) << content;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ostringstream ss;
  ss << std::ifstream(p).rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  std::string cmd = std::string(RAAG_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  return RunResult{WEXITSTATUS(status), slurp(out)};
}

const std::string kC5 =
    "vertex a\nvertex b\nvertex c\nvertex d\nvertex e\n"
    "edge a b\nedge b c\nedge c d\nedge d e\nedge e a\n";
const std::string kEdge = "vertex x\nvertex y\nedge x y\n";
const std::string kP3 = "vertex p\nvertex q\nvertex r\nedge p q\nedge q r\n";

}  // namespace

TEST_CASE("check-graph") {
  fs::path g = write("c5.graph", kC5);
  RunResult r = run("check-graph --graph " + g.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("anti-connected: yes") != std::string::npos);

  fs::path bad = write("bad.graph", "vertex a\nvertex a\n");
  CHECK(run("check-graph --graph " + bad.string()).exit_code == 2);
  CHECK(run("check-graph --graph /nonexistent.graph").exit_code == 2);
}

TEST_CASE("nf and classify and star-length") {
  fs::path g = write("c5.graph", kC5);
  RunResult nf = run("nf --graph " + g.string() + " --word 'b a c b^-1'");
  CHECK(nf.exit_code == 0);
  CHECK(nf.out.find("normal form: a c") != std::string::npos);

  RunResult cls = run("classify --graph " + g.string() + " --word 'a c'");
  CHECK(cls.exit_code == 0);
  CHECK(cls.out.find("elliptic") != std::string::npos);

  RunResult lox = run("classify --graph " + g.string() + " --word 'a b c d' --json");
  CHECK(lox.exit_code == 0);
  CHECK(nlohmann::json::parse(lox.out)["kind"] == "loxodromic");

  fs::path p3 = write("p3.graph", kP3);
  CHECK(run("classify --graph " + p3.string() + " --word p").exit_code == 2);

  RunResult star = run("star-length --graph " + g.string() + " --word 'a b c d'");
  CHECK(star.exit_code == 0);
  CHECK(star.out.find("star length: 2") != std::string::npos);

  CHECK(run("classify --graph " + g.string() + " --word 'z'").exit_code == 2);
}

TEST_CASE("stability and verify-cert round trip") {
  fs::path g = write("c5.graph", kC5);
  fs::path gens = write("abcd.gens", "a b c d\n");
  fs::path cert = work_dir() / "abcd.cert.json";

  RunResult st = run("stability --graph " + g.string() + " --gens " + gens.string() +
                     " --cert " + cert.string() + " --json");
  CHECK(st.exit_code == 0);
  auto report = nlohmann::json::parse(st.out);
  CHECK(report["verdict"] == "stable");
  CHECK(report.contains("certificate"));

  RunResult vr = run("verify-cert --graph " + g.string() + " --gens " + gens.string() +
                     " --cert " + cert.string());
  CHECK(vr.exit_code == 0);
  CHECK(vr.out.find("certificate verified") != std::string::npos);

  // Tamper with a load-bearing field.
  auto cert_json = nlohmann::json::parse(slurp(cert));
  cert_json["evidence"]["cycles_checked"] = cert_json["evidence"]["cycles_checked"].get<int>() + 1;
  fs::path tampered = write("tampered.cert.json", cert_json.dump());
  RunResult bad = run("verify-cert --graph " + g.string() + " --gens " + gens.string() +
                      " --cert " + tampered.string());
  CHECK(bad.exit_code == 0);
  CHECK(bad.out.find("REJECTED") != std::string::npos);

  fs::path garbage = write("garbage.cert.json", "{\"schema\": \"nope\"}");
  CHECK(run("verify-cert --graph " + g.string() + " --gens " + gens.string() + " --cert " +
            garbage.string())
            .exit_code == 2);
}

TEST_CASE("stability not_stable and exit codes") {
  fs::path g = write("c5.graph", kC5);
  RunResult r = run("stability --graph " + g.string() + " --gen 'a c'");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("not_stable") != std::string::npos);
}

TEST_CASE("morse: decided and budget-exhausted exit codes") {
  fs::path edge = write("edge.graph", kEdge);
  RunResult fin = run("morse --graph " + edge.string() + " --gen 'x^2' --gen y --json");
  CHECK(fin.exit_code == 0);
  auto rep = nlohmann::json::parse(fin.out);
  CHECK(rep["route"] == "via_finite_index");

  fs::path g = write("c5.graph", kC5);
  RunResult out_of_budget = run("morse --graph " + g.string() + " --gen a --budget 10000");
  CHECK(out_of_budget.exit_code == 3);
}

TEST_CASE("cosets with table dump and resume") {
  fs::path edge = write("edge.graph", kEdge);
  fs::path csv = work_dir() / "table.csv";
  RunResult r = run("cosets --graph " + edge.string() + " --gen 'x^2' --gen 'y^3' --table " +
                    csv.string() + " --json");
  CHECK(r.exit_code == 0);
  auto rep = nlohmann::json::parse(r.out);
  CHECK(rep["index"] == 6);
  CHECK(slurp(csv).find("coset,generator,image") == 0);

  fs::path g = write("c5.graph", kC5);
  fs::path ckpt = work_dir() / "partial.ckpt";
  RunResult partial = run("cosets --graph " + g.string() + " --gen a --budget 100 --checkpoint " +
                          ckpt.string());
  CHECK(partial.exit_code == 3);
  RunResult resumed = run("cosets --graph " + g.string() + " --gen a --budget 200 --resume " +
                          ckpt.string());
  CHECK(resumed.exit_code == 3);  // still infinite index, but it kept going
}

TEST_CASE("complex subcommand") {
  fs::path g = write("c5.graph", kC5);
  fs::path cx = work_dir() / "abcd.cplx";
  RunResult sat = run("complex --graph " + g.string() +
                      " --gen 'a b c d' --saturate --verify --scan --out " + cx.string());
  CHECK(sat.exit_code == 0);
  CHECK(sat.out.find("local isometry: passes") != std::string::npos);
  CHECK(sat.out.find("join-word scan: pure") != std::string::npos);

  RunResult reread = run("complex --graph " + g.string() + " --in " + cx.string() +
                         " --verify --trace 'b a c d'");
  CHECK(reread.exit_code == 0);
  CHECK(reread.out.find("traces loop at basepoint: yes") != std::string::npos);

  RunResult squeezed =
      run("complex --graph " + g.string() + " --gen 'a b c d' --saturate --budget 1");
  CHECK(squeezed.exit_code == 3);
}

TEST_CASE("probe subcommand") {
  fs::path g = write("c5.graph", kC5);
  RunResult r = run("probe --graph " + g.string() +
                    " --gen a --lambda-max 1 --epsilon-max 1 --delta 1 --json");
  CHECK(r.exit_code == 0);
  auto rep = nlohmann::json::parse(r.out);
  CHECK(rep["heuristic"] == true);
  CHECK(rep["pairs"].size() == 2);
  for (const auto& p : rep["pairs"]) CHECK(p["outcome"] == "failed");
}
