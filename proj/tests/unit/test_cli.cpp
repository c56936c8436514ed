#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kSrc = DYADIC_FORGE_SOURCE_DIR;

int run(const std::string& args) {
  std::string cmd = std::string(DYADIC_FORGE_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("exit codes") {
  fs::path bad = fs::temp_directory_path() / ("dyadic_forge_bad_" + std::to_string(::getpid()) + ".json");
  std::ofstream(bad) << "{\"intervals\": [";
  CHECK(run("decompose " + bad.string()) == 2);
  fs::remove(bad);

  CHECK(run("decompose " + kSrc + "/fixtures/chain10.json -n 4") == 0);
  CHECK(run("haar_bound " + kSrc + "/fixtures/haar_pair.json") == 0);
  CHECK(run("t4_demo --multiplier power:2 --calibration " + kSrc + "/calibration/builtin.json") == 2);
  CHECK(run("t4_demo --calibration /nonexistent/builtin.json") == 4);
  CHECK(run("wavelet_check --mother " + kSrc + "/fixtures/haar_mother.json --depth 4") == 3);
  CHECK(run("rc_demo --k-max 6 --depth 10") == 3);
  CHECK(run("no_such_command") != 0);
}
