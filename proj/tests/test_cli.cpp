#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "registry.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("qpan_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::path p = work_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

CliResult run_cli(const std::string& args) {
    const fs::path dir = work_dir();
    const fs::path out_file = dir / "stdout.txt";
    const fs::path err_file = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + QPAN_CLI_PATH + "\" " + args +
                            " > \"" + out_file.string() + "\" 2> \"" +
                            err_file.string() + "\"";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

const char* kStandardParams =
    R"("params": {"A": [1, 0], "B": [1, 0], "C": [0.3, 0], "D": [0.7, 0], "q": [0.5, 0]})";

} // namespace

TEST_CASE("operation registry binds every operation to exactly one command") {
    using qpan::cli::kCommands;
    using qpan::cli::kOpRegistry;

    CHECK(kOpRegistry.size() == 30);

    std::set<std::string_view> ops;
    std::set<std::string_view> used_commands;
    for (const auto& binding : kOpRegistry) {
        CHECK_MESSAGE(ops.insert(binding.op).second,
                      "operation bound twice: " << binding.op);
        const bool known =
            std::find(kCommands.begin(), kCommands.end(), binding.command) !=
            kCommands.end();
        CHECK_MESSAGE(known, "unknown command in registry: " << binding.command);
        used_commands.insert(binding.command);
    }
    CHECK(ops.size() == kOpRegistry.size());

    // every command carries at least one operation
    CHECK(used_commands.size() == kCommands.size());

    // spot checks pinning the shape of the mapping
    auto command_of = [&](std::string_view op) -> std::string_view {
        for (const auto& b : kOpRegistry)
            if (b.op == op) return b.command;
        return "";
    };
    CHECK(command_of("solve_entire") == "solve");
    CHECK(command_of("solve_laurent_at") == "laurent");
    CHECK(command_of("evaluate_continued") == "continue");
    CHECK(command_of("mul") == "residual");
    CHECK(command_of("ep_leading_witness") == "expoly-check");
    CHECK(command_of("growth_lower_bound") == "pole-orbit");
    CHECK(command_of("verify_mokhonko") == "nevanlinna");
    CHECK(command_of("classify") == "classify");
}

TEST_CASE("solve example emits the expected coefficient table") {
    const fs::path cfg = write_config("solve.json", R"({
  "command": "solve",
  "params": {"A": [1, 0], "B": [1, 0], "C": [0, 0], "D": [0, 0], "q": [0.5, 0]},
  "options": {"a0": [1, 0], "N": 8}
})");
    const fs::path art = work_dir() / "solve_out.csv";
    const CliResult r = run_cli(quoted(cfg) + " -o " + quoted(art));
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out.find("\"command\": \"solve\"") != std::string::npos);

    const std::string csv = slurp(art);
    CHECK(csv.substr(0, 9) == "n,re,im\n0");
    CHECK(csv.find("\n0,1,0\n") != std::string::npos);
    CHECK(csv.find("\n1,2,0\n") != std::string::npos);
    CHECK(csv.find("\n2,2.5,0\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10); // header + n = 0..8
}

TEST_CASE("laurent example yields the bare pole row") {
    const fs::path cfg = write_config("laurent.json", R"({
  "command": "laurent",
  "params": {"A": [1, 0], "B": [1, 0], "C": [-2, 0], "D": [0, 0], "q": [0.5, 0]},
  "options": {"N": 24}
})");
    const fs::path art = work_dir() / "laurent_out.csv";
    const CliResult r = run_cli(quoted(cfg) + " -o " + quoted(art));
    CHECK(r.code == 0);
    CHECK(slurp(art) == "n,re,im\n-1,-1,0\n");
    CHECK(r.out.find("\"rows\": 1") != std::string::npos);
}

TEST_CASE("classify example reports that no entire solutions exist") {
    const fs::path cfg = write_config("classify.json", R"({
  "command": "classify",
  "params": {"A": [1, 0], "B": [0, 0], "C": [0.5, 0], "D": [1, 0], "q": [2, 0]},
  "options": {"kind": "entire"}
})");
    const fs::path art = work_dir() / "classify_out.json";
    const CliResult r = run_cli(quoted(cfg) + " -o " + quoted(art));
    CHECK(r.code == 0);

    const std::string verdict = slurp(art);
    CHECK(verdict.find("no entire solutions") != std::string::npos);
    CHECK(verdict.find("\"citation\": \"II.i\"") != std::string::npos);
    CHECK(verdict.find("\"no_solution_of_this_kind\": true") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical artifacts and status") {
    const fs::path cfg = write_config("repeat.json", std::string(R"({
  "command": "residual",
  )") + kStandardParams + R"(,
  "options": {"a0": [0.1, 0], "N": 64, "radius": 0.2, "samples": 32}
})");
    const fs::path art1 = work_dir() / "rep1.csv";
    const fs::path art2 = work_dir() / "rep2.csv";
    const CliResult r1 = run_cli(quoted(cfg) + " -o " + quoted(art1));
    const CliResult r2 = run_cli(quoted(cfg) + " -o " + quoted(art2));
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    const std::string a1 = slurp(art1);
    CHECK(!a1.empty());
    CHECK(a1 == slurp(art2));

    // status lines agree once the artifact path is factored out
    std::string s1 = r1.out;
    std::string s2 = r2.out;
    const auto scrub = [](std::string& s, const std::string& path) {
        const auto pos = s.find(path);
        REQUIRE(pos != std::string::npos);
        s.erase(pos, path.size());
    };
    scrub(s1, art1.string());
    scrub(s2, art2.string());
    CHECK(s1 == s2);
}

TEST_CASE("precision flag switches the backend") {
    const std::string body = R"({
  "command": "solve",
  "params": {"A": [1, 0], "B": [1, 0], "C": [0, 0], "D": [0, 0], "q": [0.5, 0]},
  "options": {"a0": [1, 0], "N": 8},
  "precision": ")";
    const fs::path cfg_d = write_config("prec_d.json", body + "double\"\n}");
    const fs::path cfg_e = write_config("prec_e.json", body + "extended\"\n}");
    const fs::path art_d = work_dir() / "prec_d.csv";
    const fs::path art_e = work_dir() / "prec_e.csv";
    CHECK(run_cli(quoted(cfg_d) + " -o " + quoted(art_d)).code == 0);
    CHECK(run_cli(quoted(cfg_e) + " -o " + quoted(art_e)).code == 0);
    const std::string d = slurp(art_d);
    const std::string e = slurp(art_e);
    // a3 = 77/24 rounds differently in the two backends
    CHECK(d.find("3,3.2083333333333335,0\n") != std::string::npos);
    CHECK(e.find("3,3.2083333333333333,0\n") != std::string::npos);
}

TEST_CASE("validation problems exit with code 2") {
    SUBCASE("unknown top-level key") {
        const fs::path cfg = write_config("unknown_key.json", std::string(R"({
  "command": "solve",
  )") + kStandardParams + R"(,
  "options": {"a0": [1, 0]},
  "typo": 1
})");
        const CliResult r = run_cli(quoted(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("unknown key 'typo'") != std::string::npos);
    }
    SUBCASE("unknown option key") {
        const fs::path cfg = write_config("unknown_opt.json", std::string(R"({
  "command": "solve",
  )") + kStandardParams + R"(,
  "options": {"a0": [1, 0], "seed": 3}
})");
        CHECK(run_cli(quoted(cfg)).code == 2);
    }
    SUBCASE("unknown command") {
        const fs::path cfg = write_config("unknown_cmd.json", std::string(R"({
  "command": "prove",
  )") + kStandardParams + R"(
})");
        const CliResult r = run_cli(quoted(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("unknown command") != std::string::npos);
    }
    SUBCASE("config is not JSON") {
        const fs::path cfg = write_config("broken.json", "command: solve\n");
        const CliResult r = run_cli(quoted(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("not valid JSON") != std::string::npos);
    }
    SUBCASE("missing config file") {
        CHECK(run_cli(quoted(work_dir() / "absent.json")).code == 2);
    }
    SUBCASE("complex value that is not a pair") {
        const fs::path cfg = write_config("scalar_complex.json", std::string(R"({
  "command": "solve",
  )") + kStandardParams + R"(,
  "options": {"a0": 1}
})");
        const CliResult r = run_cli(quoted(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("[re, im]") != std::string::npos);
    }
    SUBCASE("output path equal to the config path") {
        const fs::path cfg = write_config("selfclobber.json", std::string(R"({
  "command": "solve",
  )") + kStandardParams + R"(,
  "options": {"a0": [1, 0]}
})");
        const CliResult r = run_cli(quoted(cfg) + " -o " + quoted(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("overwrite the config") != std::string::npos);
    }
}

TEST_CASE("numerical failures exit with code 3") {
    const fs::path cfg = write_config("near_pole.json", std::string(R"({
  "command": "continue",
  )") + kStandardParams + R"(,
  "options": {"a0": [0, 0], "N": 128, "at": [0.9, 0.2], "k": 1,
              "known_poles": [[0.45, 0.1]]}
})");
    const CliResult r = run_cli(quoted(cfg));
    CHECK(r.code == 3);
    CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("formal expansions are refused with code 4") {
    const fs::path cfg = write_config("formal.json", std::string(R"({
  "command": "residual",
  )") + kStandardParams + R"(,
  "options": {"source": "laurent-at", "z0": [1, 0], "b0": [0.2, 0],
              "N": 32, "radius": 0.1}
})");
    const CliResult r = run_cli(quoted(cfg));
    CHECK(r.code == 4);
    CHECK(r.err.find("formal refusal") != std::string::npos);
}

TEST_CASE("pole-orbit artifact carries the orbit and the status the verdict") {
    const fs::path cfg = write_config("orbit.json", R"({
  "command": "pole-orbit",
  "params": {"A": [1, 0], "B": [1, 0], "C": [0.3, 0], "D": [0.7, 0], "q": [2, 0]},
  "options": {"degrees": [2, 0], "kind": "pole", "t": 1, "z0": [1, 0], "steps": 5}
})");
    const fs::path art = work_dir() / "orbit_out.csv";
    const CliResult r = run_cli(quoted(cfg) + " -o " + quoted(art));
    CHECK(r.code == 0);
    CHECK(slurp(art) ==
          "n,re_point,im_point,order\n"
          "1,2,0,2\n"
          "2,4,0,4\n"
          "3,8,0,8\n"
          "4,16,0,16\n"
          "5,32,0,32\n");
    CHECK(r.out.find("\"verdict\": \"forces-positive-order\"") != std::string::npos);
    CHECK(r.out.find("\"growth_lower_bound\": 1") != std::string::npos);
    CHECK(r.out.find("\"assumes_generic_points\": true") != std::string::npos);
}

TEST_CASE("nevanlinna curve lists r, m, N, T columns") {
    const fs::path cfg = write_config("curve.json", R"({
  "command": "nevanlinna",
  "params": {"A": [1, 0], "B": [1, 0], "C": [0.3, 0], "D": [0.7, 0], "q": [2, 0]},
  "options": {"mode": "curve",
              "f": {"num": [[1, 0], [0, 0], [1, 0]], "den": [[-3, 0], [1, 0]]},
              "radii": [10, 100]}
})");
    const fs::path art = work_dir() / "curve_out.csv";
    const CliResult r = run_cli(quoted(cfg) + " -o " + quoted(art));
    CHECK(r.code == 0);
    const std::string csv = slurp(art);
    CHECK(csv.substr(0, 8) == "r,m,N,T\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    // T(100) for (z^2+1)/(z-3) is 2 log 100 - log 3
    CHECK(csv.find("\n100,") != std::string::npos);
    CHECK(csv.find(",8.11172808") != std::string::npos);
}

TEST_CASE("expoly-check flags a non-solution with a witness") {
    const fs::path cfg = write_config("expoly.json", std::string(R"({
  "command": "expoly-check",
  )") + kStandardParams + R"(,
  "options": {"terms": [{"prefactor": [[1, 0], [2, 0]],
                         "exponent": [[0, 0], [0, 0], [1, 0]]}]}
})");
    const fs::path art = work_dir() / "expoly_out.json";
    const CliResult r = run_cli(quoted(cfg) + " -o " + quoted(art));
    CHECK(r.code == 0);
    const std::string report = slurp(art);
    CHECK(report.find("\"solves\": false") != std::string::npos);
    CHECK(report.find("\"witness\": {") != std::string::npos);
    CHECK(r.out.find("\"solves\": false") != std::string::npos);
}

TEST_CASE("help text documents the column orders and exit codes") {
    const CliResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("n,re,im") != std::string::npos);
    CHECK(r.out.find("i,re_z,im_z,abs_residual") != std::string::npos);
    CHECK(r.out.find("n,re_point,im_point,order") != std::string::npos);
    CHECK(r.out.find("r,m,N,T") != std::string::npos);
    CHECK(r.out.find("17 significant digits") != std::string::npos);
    CHECK(r.out.find("exit codes") != std::string::npos);
}
