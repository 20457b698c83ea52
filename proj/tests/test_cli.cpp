#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef MEMGC_CLI_PATH
#error "MEMGC_CLI_PATH must point at the command line binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the binary through the shell; env is a prefix like "MEMGC_SEED=7".
RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out_path = "/tmp/memgc_cli_stdout.txt";
  const std::string err_path = "/tmp/memgc_cli_stderr.txt";
  std::string cmd = env.empty() ? std::string() : env + " ";
  cmd += std::string(MEMGC_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

struct Workspace {
  std::string dir;
  Workspace() {
    char tmpl[] = "/tmp/memgc_cli_XXXXXX";
    dir = mkdtemp(tmpl);
  }
  ~Workspace() { std::filesystem::remove_all(dir); }
  std::string path(const std::string& name) const { return dir + "/" + name; }
};

const std::string kGenArgs =
    " --n-text 80 --segments 4 --dim 6 --entities 6 --topics 3 --seed 5";

}  // namespace

TEST_CASE("cli: --help exits cleanly, bad input exits with the usage code") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 1);                  // missing subcommand
  CHECK(run_cli("frobnicate").exit_code == 1);        // unknown subcommand
  CHECK(run_cli("gen").exit_code == 1);               // missing required --out
  CHECK(run_cli("compress --in x").exit_code == 1);   // missing required flags
  CHECK(run_cli("gen --out /tmp/x.json --bogus 1").exit_code == 1);
}

TEST_CASE("cli: data errors exit with code 2") {
  Workspace ws;
  CHECK(run_cli("inspect --in " + ws.path("missing.json")).exit_code == 2);
  CHECK(run_cli("gen --out " + ws.path("g.json") + " --n-text 0").exit_code == 2);

  std::ofstream(ws.path("broken.json")) << "{ nope";
  const auto r = run_cli("retrieve --in " + ws.path("broken.json") + " --query-inline 1,0");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("cli: gen, inspect, compress and retrieve work end to end") {
  Workspace ws;
  const std::string graph = ws.path("g.json");

  auto r = run_cli("gen --out " + graph + kGenArgs);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("80 text nodes") != std::string::npos);

  r = run_cli("inspect --in " + graph + " --format tabular");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("text_nodes,80") != std::string::npos);
  CHECK(r.out.find("segments,4") != std::string::npos);
  CHECK(r.out.find("isolated,40") != std::string::npos);

  const std::string small = ws.path("small.json");
  const std::string report = ws.path("report.json");
  r = run_cli("compress --in " + graph + " --out " + small + " --ratio 0.5 --report " + report);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("retained 40/80") != std::string::npos);
  CHECK(slurp(report).find("\"method\": \"streammeco\"") != std::string::npos);

  r = run_cli("retrieve --in " + small + " --query-inline 1,0,0,0,0,0 --k 5 --format tabular");
  CHECK(r.exit_code == 0);
  std::stringstream lines(r.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "id,score");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.find(',') != std::string::npos);
  }
  CHECK(rows == 5);

  // human format carries a rank column
  r = run_cli("retrieve --in " + small + " --query-inline 1,0,0,0,0,0 --k 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("rank\tid\tscore") != std::string::npos);

  // exactly one query source must be given
  CHECK(run_cli("retrieve --in " + small).exit_code == 2);
}

TEST_CASE("cli: compression is deterministic and ratio 0 is the identity") {
  Workspace ws;
  const std::string graph = ws.path("g.json");
  REQUIRE(run_cli("gen --out " + graph + kGenArgs).exit_code == 0);

  const std::string a = ws.path("a.json"), b = ws.path("b.json");
  CHECK(run_cli("compress --in " + graph + " --out " + a + " --ratio 0.5 --seed 3").exit_code == 0);
  CHECK(run_cli("compress --in " + graph + " --out " + b + " --ratio 0.5 --seed 3").exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  const std::string full = ws.path("full.json");
  CHECK(run_cli("compress --in " + graph + " --out " + full + " --ratio 0").exit_code == 0);
  CHECK(slurp(full) == slurp(graph));  // canonical save of the same node set
}

TEST_CASE("cli: MEMGC_SEED fills in when --seed is absent") {
  Workspace ws;
  const std::string graph = ws.path("g.json");
  REQUIRE(run_cli("gen --out " + graph + kGenArgs).exit_code == 0);

  const std::string env_out = ws.path("env.json"), flag_out = ws.path("flag.json");
  CHECK(run_cli("compress --in " + graph + " --out " + env_out + " --ratio 0.5 --method random",
                "MEMGC_SEED=7")
            .exit_code == 0);
  CHECK(run_cli("compress --in " + graph + " --out " + flag_out +
                " --ratio 0.5 --method random --seed 7")
            .exit_code == 0);
  CHECK(slurp(env_out) == slurp(flag_out));

  // an explicit flag wins over the environment
  const std::string win_out = ws.path("win.json");
  CHECK(run_cli("compress --in " + graph + " --out " + win_out +
                " --ratio 0.5 --method random --seed 7",
                "MEMGC_SEED=99")
            .exit_code == 0);
  CHECK(slurp(win_out) == slurp(flag_out));

  CHECK(run_cli("compress --in " + graph + " --out " + ws.path("x.json") + " --ratio 0.5",
                "MEMGC_SEED=banana")
            .exit_code == 2);
}

TEST_CASE("cli: every baseline method runs") {
  Workspace ws;
  const std::string graph = ws.path("g.json");
  REQUIRE(run_cli("gen --out " + graph + kGenArgs).exit_code == 0);
  for (const char* method :
       {"random", "clustering", "dart", "adjacent-fifo", "capacity-evict"}) {
    const auto r = run_cli("compress --in " + graph + " --out " + ws.path("m.json") +
                           " --ratio 0.5 --method " + method);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find(method) != std::string::npos);
  }
  CHECK(run_cli("compress --in " + graph + " --out " + ws.path("m.json") +
                " --ratio 0.5 --method lru")
            .exit_code == 2);
}

TEST_CASE("cli: bench sweep writes metrics.csv and summary.json") {
  Workspace ws;
  const std::string graph = ws.path("g.json");
  REQUIRE(run_cli("gen --out " + graph + kGenArgs).exit_code == 0);

  const std::string qdir = ws.path("queries");
  REQUIRE(std::system(("mkdir -p " + qdir).c_str()) == 0);
  std::ofstream(qdir + "/q0.vec") << "1\n0\n0\n0\n0\n0\n";
  std::ofstream(qdir + "/q1.vec") << "0\n1\n0\n0\n0\n0\n";

  const std::string out_dir = ws.path("bench");
  const auto r = run_cli("bench --in " + graph + " --queries " + qdir +
                         " --ratios 0,0.5 --methods streammeco,random --repeats 3 --k 5 --out " +
                         out_dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("4 cells") != std::string::npos);
  CHECK(r.out.find("2 queries") != std::string::npos);

  const std::string csv = slurp(out_dir + "/metrics.csv");
  CHECK(csv.find("policy,ratio,metric,value,seed") == 0);
  CHECK(csv.find("streammeco,0.5,overlap_topk,") != std::string::npos);
  CHECK(csv.find("random,0,text_nodes,") != std::string::npos);
  const std::string json = slurp(out_dir + "/summary.json");
  CHECK(json.find("\"cells\"") != std::string::npos);

  // a query of the wrong dimension is a data error
  std::ofstream(qdir + "/q2.vec") << "1\n0\n";
  CHECK(run_cli("bench --in " + graph + " --queries " + qdir + " --out " + out_dir)
            .exit_code == 2);
}
