#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

// End-to-end checks of the command line front end, driving the built
// binary through a shell.

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(QAW_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.stdout_text.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/qaw_cli_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("classify emits a verdict and exit code 0 on definite input") {
  std::string spec = write_temp(
      "gauss.json",
      R"({"kind":"radial","dimension":2,"profile":{"family":"gaussian","C":1,"sigma":1}})");
  RunResult r = run_cli("classify --weight " + spec);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"class\": \"QuasiAnalytic\"") !=
        std::string::npos);
  CHECK(r.stdout_text.find("\"basis\"") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical output") {
  std::string spec = write_temp(
      "replog.json",
      R"({"kind":"radial","profile":{"family":"replog","C":1,"a":[1,1],"p":[1,0.5]}})");
  RunResult a = run_cli("classify --weight " + spec + " --seed 7");
  RunResult b = run_cli("classify --weight " + spec + " --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("unknown command and bad spec exit with 1") {
  RunResult r1 = run_cli("frobnicate");
  CHECK(r1.exit_code != 0);
  std::string bad = write_temp("bad.json", "{\"kind\":\"nope\"}");
  RunResult r2 = run_cli("classify --weight " + bad);
  CHECK(r2.exit_code == 1);
}

TEST_CASE("pathology sum reports two divergent summands and a non-QA sum") {
  RunResult r = run_cli("pathology sum --blocks 2");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"summand_1\"") != std::string::npos);
  CHECK(r.stdout_text.find("Diverges") != std::string::npos);
  CHECK(r.stdout_text.find("\"NotQuasiAnalytic\"") != std::string::npos);
}

TEST_CASE("hall on a non-QA family certifies non-density") {
  std::string spec = write_temp(
      "replog_nu1.json",
      R"({"kind":"radial","profile":{"family":"replog","C":1,"a":[1,1],"p":[1,2]}})");
  RunResult r = run_cli("hall --weight " + spec);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"conclusion\": \"Converges\"") !=
        std::string::npos);
  CHECK(r.stdout_text.find("not dense") != std::string::npos);
}

TEST_CASE("approx writes artifacts to the output directory") {
  std::string spec = write_temp(
      "expdecay.json",
      R"({"kind":"radial","profile":{"family":"expdecay","C":1,"eps":1}})");
  std::string out_dir = "/tmp/qaw_cli_artifacts";
  std::string cmd = "approx --weight " + spec +
                    " --family poly --max-degree 8 --grid 20:401 --out " +
                    out_dir;
  RunResult r = run_cli(cmd);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"family\": \"polynomial\"") != std::string::npos);
  std::ifstream csv(out_dir + "/approx.csv");
  CHECK(csv.good());
  std::ifstream svg(out_dir + "/approx.svg");
  CHECK(svg.good());
}

TEST_CASE("determinacy certifies the Gaussian against ExpDecay") {
  std::string wspec = write_temp(
      "expdecay2.json",
      R"({"kind":"radial","profile":{"family":"expdecay","C":1,"eps":1}})");
  std::string mspec = write_temp(
      "gauss_measure.json",
      R"({"form":"density","family":"gaussian","mean":[0],"sigma":1})");
  RunResult r =
      run_cli("determinacy --weight " + wspec + " --measure " + mspec);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"certified\": true") != std::string::npos);
  CHECK(r.stdout_text.find("determinate") != std::string::npos);
}
