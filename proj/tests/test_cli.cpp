#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "sqcorr/record_io.hpp"
#include "sqcorr/simulate.hpp"

using namespace sqcorr;
namespace fs = std::filesystem;

namespace {

const char* tool_path() { return SQCORR_TOOL_PATH; }

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "sqcorr_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run_tool(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(tool_path()) + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

}  // namespace

TEST_CASE("simulate writes a record of the documented size") {
  const fs::path cfg = write_config("opa.cfg",
                                    "preset=opa\n"
                                    "digitizer.n_samples=100000\n"
                                    "digitizer.seed=42\n");
  const fs::path rec = work_dir() / "opa.sqc";
  const RunResult r =
      run_tool("simulate " + cfg.string() + " --out " + rec.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("n_samples=100000") != std::string::npos);
  CHECK(r.out.find("seed=42") != std::string::npos);
  CHECK(fs::file_size(rec) == 16 + 16 * 100000ull);
  CHECK(fs::exists(rec.string() + ".meta"));
}

TEST_CASE("simulate reruns and worker counts are bit-identical") {
  const fs::path cfg = write_config("det.cfg",
                                    "preset=opa\n"
                                    "digitizer.n_samples=200000\n"
                                    "digitizer.seed=777\n");
  const fs::path a = work_dir() / "a.sqc";
  const fs::path b = work_dir() / "b.sqc";
  const fs::path c = work_dir() / "c.sqc";
  CHECK(run_tool("simulate " + cfg.string() + " --out " + a.string() +
                 " --threads 1").exit_code == 0);
  CHECK(run_tool("simulate " + cfg.string() + " --out " + b.string() +
                 " --threads 1").exit_code == 0);
  CHECK(run_tool("simulate " + cfg.string() + " --out " + c.string() +
                 " --threads 8").exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK(slurp(a.string() + ".meta") == slurp(c.string() + ".meta"));
}

TEST_CASE("unwritable output paths exit 3") {
  const fs::path cfg = write_config("io.cfg", "digitizer.n_samples=16\n");
  const fs::path rec = work_dir() / "no_such_dir" / "x.sqc";
  CHECK(run_tool("simulate " + cfg.string() + " --out " + rec.string())
            .exit_code == 3);
}

TEST_CASE("config errors name the offending key and exit 2") {
  const fs::path cfg = write_config("bad.cfg",
                                    "preset=opa\n"
                                    "digitizer.n_samples=1\n");
  const fs::path rec = work_dir() / "bad.sqc";
  const RunResult r =
      run_tool("simulate " + cfg.string() + " --out " + rec.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("digitizer.n_samples") != std::string::npos);

  const fs::path unknown = write_config("unknown.cfg", "state.tx=1\n");
  const RunResult r2 =
      run_tool("simulate " + unknown.string() + " --out " + rec.string());
  CHECK(r2.exit_code == 2);
  CHECK(r2.err.find("state.tx") != std::string::npos);
}

TEST_CASE("estimate prints the statistics of a handcrafted record") {
  SampleRecord rec;
  rec.ch1 = Eigen::ArrayXd(2);
  rec.ch2 = Eigen::ArrayXd(2);
  rec.ch1 << 0.0, 1.0;
  rec.ch2 << 0.0, 1.0;
  const fs::path p = work_dir() / "pair.sqc";
  write_record(rec, p);

  const RunResult r = run_tool("estimate " + p.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("cov=0.5\n") != std::string::npos);
  CHECK(r.out.find("n=2\n") != std::string::npos);
}

TEST_CASE("estimate rejects truncated records with exit 4") {
  Scenario s;
  s.digitizer.n_samples = 64;
  const fs::path p = work_dir() / "trunc.sqc";
  write_record(simulate_record(s), p);
  fs::resize_file(p, fs::file_size(p) - 3);
  CHECK(run_tool("estimate " + p.string()).exit_code == 4);
}

TEST_CASE("estimate requires a calibration for squeezing methods") {
  Scenario s;
  s.digitizer.n_samples = 64;
  const fs::path p = work_dir() / "nosnl.sqc";
  write_record(simulate_record(s), p);
  const RunResult r = run_tool("estimate " + p.string() + " --method cov");
  CHECK(r.exit_code == 2);
}

TEST_CASE("estimate applies the covariance formula to an external record") {
  // cov = 0 by construction; slope-4 calibration at power 1 gives s = 1.
  SampleRecord rec;
  rec.ch1 = Eigen::ArrayXd(4);
  rec.ch2 = Eigen::ArrayXd(4);
  rec.ch1 << 0.0, 1.0, 0.0, 1.0;
  rec.ch2 << 0.0, 0.0, 1.0, 1.0;
  const fs::path p = work_dir() / "zerocov.sqc";
  write_record(rec, p);
  fs::remove(p.string() + ".meta");  // external: no sidecar, power from flag

  const fs::path cal = write_config("flat.cal", "slope=4\nen_total=0\n");
  const RunResult r = run_tool("estimate " + p.string() + " --snl " +
                               cal.string() + " --method cov --power 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("s=1\n") != std::string::npos);
  CHECK(r.out.find("s_db=0\n") != std::string::npos);

  // Without --power an external record cannot be normalized.
  CHECK(run_tool("estimate " + p.string() + " --snl " + cal.string() +
                 " --method cov").exit_code == 2);
}

TEST_CASE("calibrate writes a reloadable calibration") {
  const fs::path cfg = write_config("cal.cfg",
                                    "digitizer.n_samples=200000\n"
                                    "digitizer.seed=5\n");
  const fs::path out = work_dir() / "snl.cal";
  const RunResult r = run_tool("calibrate " + cfg.string() +
                               " --powers 100,400 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("slope=") != std::string::npos);
  const std::string body = slurp(out);
  CHECK(body.find("slope=") != std::string::npos);
  CHECK(body.find("powers=100,400") != std::string::npos);

  CHECK(run_tool("calibrate " + cfg.string() + " --powers 100 --out " +
                 out.string()).exit_code == 2);
}

TEST_CASE("sweep writes deterministic tables plus an xy companion") {
  const fs::path cfg = write_config("swp.cfg",
                                    "state.vx=0.5\n"
                                    "state.vy=2\n"
                                    "loss.mode=lo_only\n"
                                    "digitizer.seed=99\n");
  const fs::path csv1 = work_dir() / "sweep1.csv";
  const fs::path csv2 = work_dir() / "sweep2.csv";
  const std::string args = " --sweep attenuation --values 0.25,0.5,1"
                           " --seeds 2 --samples 20000 --out ";
  CHECK(run_tool("sweep " + cfg.string() + args + csv1.string() +
                 " --threads 1").exit_code == 0);
  CHECK(run_tool("sweep " + cfg.string() + args + csv2.string() +
                 " --threads 8").exit_code == 0);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(slurp(csv1).find("# fitted_exponent=") != std::string::npos);
  CHECK(fs::exists(work_dir() / "sweep1.xy"));

  const RunResult bad = run_tool("sweep " + cfg.string() +
                                 " --sweep sideways --out " + csv1.string());
  CHECK(bad.exit_code == 2);
}

TEST_CASE("seed precedence: flag beats environment beats config") {
  const fs::path cfg = write_config("seed.cfg",
                                    "digitizer.n_samples=100\n"
                                    "digitizer.seed=42\n");
  const fs::path rec = work_dir() / "seed.sqc";

  setenv("SQCORR_SEED", "7", 1);
  CHECK(run_tool("simulate " + cfg.string() + " --out " + rec.string())
            .exit_code == 0);
  CHECK(slurp(rec.string() + ".meta").find("digitizer.seed=7") !=
        std::string::npos);

  CHECK(run_tool("simulate " + cfg.string() + " --out " + rec.string() +
                 " --seed 9").exit_code == 0);
  CHECK(slurp(rec.string() + ".meta").find("digitizer.seed=9") !=
        std::string::npos);
  unsetenv("SQCORR_SEED");

  CHECK(run_tool("simulate " + cfg.string() + " --out " + rec.string())
            .exit_code == 0);
  CHECK(slurp(rec.string() + ".meta").find("digitizer.seed=42") !=
        std::string::npos);
}
