#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;
std::string g_dir;
int g_run_id = 0;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
  const std::string capture = g_dir + "/cli_out_" + std::to_string(g_run_id++) + ".txt";
  const std::string cmd = g_binary + " " + args + " > " + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(capture, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  r.output = os.str();
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Drops the final (wall-clock) field of every line so byte comparison sees
// only the deterministic columns.
std::string strip_wall(const std::string& csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t nl = csv.find('\n', pos);
    if (nl == std::string::npos) nl = csv.size();
    const std::string line = csv.substr(pos, nl - pos);
    const std::size_t comma = line.find_last_of(',');
    out += (comma == std::string::npos) ? line : line.substr(0, comma);
    out += '\n';
    pos = nl + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("argument errors are rejected without running anything") {
  CHECK(run_cli("").exit_code != 0);
  CHECK(run_cli("frobnicate").exit_code != 0);
  CHECK(run_cli("simulate").exit_code != 0);  // --config is required
  CHECK(run_cli("rate").exit_code != 0);
}

TEST_CASE("config problems exit with the failure code 2") {
  CHECK(run_cli("simulate --config " + g_dir + "/no_such_file.json").exit_code == 2);

  const std::string bad = g_dir + "/bad_key.json";
  write_file(bad, R"({"kind":"zero-count-law","laws":["gaussian"],"m_values":[4],"typo":1})");
  const CliResult r = run_cli("simulate --config " + bad);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("unknown key") != std::string::npos);

  CHECK(run_cli("validate --inject-bug no-such-fault").exit_code == 2);
}

TEST_CASE("validate runs green, fails under an injected fault, and writes reports") {
  const CliResult ok = run_cli("validate --seed 42");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("18/18 suites passed") != std::string::npos);

  const std::string report_path = g_dir + "/report.txt";
  const CliResult bad = run_cli("validate --inject-bug tampered-sinc --out " + report_path);
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("fault injected: tampered-sinc") != std::string::npos);
  CHECK(bad.output.find("FAIL") != std::string::npos);
  const std::string report = read_file(report_path);
  CHECK(report.find("suites passed") != std::string::npos);
}

TEST_CASE("simulate writes the table and companion document") {
  const std::string cfg = g_dir + "/sim.json";
  const std::string out = g_dir + "/sim_out.csv";
  write_file(cfg, R"({"kind":"zero-count-law","laws":["gaussian"],"m_values":[4,8],)"
                  R"("n_reps":150,"master_seed":4242,"output_path":")" + out + R"("})");
  const CliResult r = run_cli("simulate --config " + cfg + " --threads 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("wrote") != std::string::npos);

  const std::string csv = read_file(out);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "m,law,metric,value,ci_low,ci_high,n_reps,mean_count,se_count,wall_ms");
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 3);  // header + one row per m
  CHECK(csv.find("gaussian") != std::string::npos);

  const std::string companion = read_file(g_dir + "/sim_out.json");
  CHECK(companion.find("\"rows\"") != std::string::npos);
  CHECK(companion.find("\"config\"") != std::string::npos);

  // --out redirects both files.
  const CliResult r2 = run_cli("simulate --config " + cfg + " --out " + g_dir + "/alt.csv");
  CHECK(r2.exit_code == 0);
  CHECK(std::filesystem::exists(g_dir + "/alt.csv"));
  CHECK(std::filesystem::exists(g_dir + "/alt.json"));
}

TEST_CASE("seed and thread options: same seed same bytes, new seed new bytes") {
  const std::string cfg = g_dir + "/seeds.json";
  write_file(cfg, R"({"kind":"zero-count-law","laws":["rademacher"],"m_values":[6],)"
                  R"("n_reps":200,"output_path":")" + g_dir + R"(/seed_run.csv"})");

  CHECK(run_cli("simulate --config " + cfg + " --seed 1111 --threads 1 --out " + g_dir +
                "/s1.csv")
            .exit_code == 0);
  CHECK(run_cli("simulate --config " + cfg + " --seed 1111 --threads 3 --out " + g_dir +
                "/s2.csv")
            .exit_code == 0);
  CHECK(run_cli("simulate --config " + cfg + " --seed 2222 --threads 1 --out " + g_dir +
                "/s3.csv")
            .exit_code == 0);

  const std::string s1 = strip_wall(read_file(g_dir + "/s1.csv"));
  const std::string s2 = strip_wall(read_file(g_dir + "/s2.csv"));
  const std::string s3 = strip_wall(read_file(g_dir + "/s3.csv"));
  CHECK(s1 == s2);
  CHECK(s1 != s3);
}

TEST_CASE("the subcommand decides the experiment kind, not the config") {
  const std::string cfg = g_dir + "/kind.json";
  write_file(cfg, R"({"kind":"zero-count-law","laws":["gaussian"],"m_values":[8],)"
                  R"("n_reps":5,"output_path":")" + g_dir + R"(/kind_out.csv"})");
  const CliResult r = run_cli("theta --config " + cfg + " --out " + g_dir + "/theta_out.csv");
  CHECK(r.exit_code == 0);
  const std::string csv = read_file(g_dir + "/theta_out.csv");
  CHECK(csv.find("sup_err") != std::string::npos);
  CHECK(csv.find("smooth-quadratic") != std::string::npos);
  CHECK(csv.find("rough-walk-4096") != std::string::npos);
}

TEST_CASE("rate subcommand produces distances and a fitted rate") {
  const std::string cfg = g_dir + "/rate.json";
  const std::string out = g_dir + "/rate_out.csv";
  write_file(cfg, R"({"kind":"rate-curve","laws":["rademacher"],"m_values":[4,8,16],)"
                  R"("surrogate_M":60,"n_reps":150,"metric":"W1","bootstrap_B":120,)"
                  R"("master_seed":777,"output_path":")" + out + R"("})");
  const CliResult r = run_cli("rate --config " + cfg);
  CHECK(r.exit_code == 0);
  const std::string csv = read_file(out);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 4);
  CHECK(csv.find(",W1,") != std::string::npos);
  const std::string companion = read_file(g_dir + "/rate_out.json");
  CHECK(companion.find("\"fitted_rate\"") != std::string::npos);
  CHECK(companion.find("G-surrogate(60)") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-cli-binary> [doctest options]\n");
    return 1;
  }
  g_binary = argv[1];
  g_dir = (std::filesystem::temp_directory_path() /
           ("rtpzero_cli_" + std::to_string(static_cast<long long>(::getpid()))))
              .string();
  std::filesystem::create_directories(g_dir);
  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);
  return ctx.run();
}
