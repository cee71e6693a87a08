#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "anomal/cli.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli_process(const std::string& args) {
    const std::string cmd = std::string(ANOMAL_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

} // namespace

TEST_CASE("profile command emits the documented CSV with the heat value") {
    const auto r = run_cli_process("profile --gamma 0 --dim 1 --alpha 1 --eta-max 6 --samples 13");
    CHECK(r.exit_code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 19);
    CHECK(lines[0] == "# anomal profile");
    CHECK(lines[5] == "eta,f_closed,f_prime_closed,f_oracle,segment_index");
    // row at eta = 2 is line 6 + 4
    const auto cells = split(lines[10], ',');
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[0]) == doctest::Approx(2.0));
    CHECK(std::stod(cells[1]) == doctest::Approx(0.3678794).epsilon(1e-6));
    CHECK(std::stod(cells[3]) == doctest::Approx(0.3678794).epsilon(1e-5));
}

TEST_CASE("profile below the first-root threshold lists no breakpoints") {
    const auto r = run_cli_process("profile --gamma 0.4 --dim 3 --alpha 0.5 --samples 5");
    CHECK(r.exit_code == 0);
    bool found = false;
    for (const auto& line : split(r.out, '\n'))
        if (line == "# breakpoints = ") found = true;
    CHECK(found);
}

TEST_CASE("profile closed form tracks the oracle column") {
    const auto r = run_cli_process("profile --gamma 0.5 --dim 1 --alpha 2 --eta-max 8 --samples 81");
    CHECK(r.exit_code == 0);
    double worst = 0.0;
    for (const auto& line : split(r.out, '\n')) {
        if (line.empty() || line[0] == '#' || line[0] == 'e') continue;
        const auto cells = split(line, ',');
        REQUIRE(cells.size() == 5);
        const double fc = std::stod(cells[1]), fo = std::stod(cells[3]);
        worst = std::max(worst, std::abs(fc - fo) / std::max(std::abs(fo), 1e-3));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("exponents command recovers N + 2k at gamma = 0") {
    const auto r = run_cli_process("exponents --gamma 0 --dim 1 --k-max 3");
    CHECK(r.exit_code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 9);
    CHECK(lines[4] == "k,alpha_k,gauss_rate,certificate_pass,n_roots,eta_roots");
    const double want[4] = {1.0, 3.0, 5.0, 7.0};
    for (int k = 0; k <= 3; ++k) {
        const auto cells = split(lines[5 + k], ',');
        REQUIRE(cells.size() == 6);
        CHECK(std::stod(cells[1]) == doctest::Approx(want[k]).epsilon(1e-8));
        CHECK(cells[3] == "true");
    }
    const auto r3 = run_cli_process("exponents --gamma 0 --dim 3 --k-max 2");
    const auto lines3 = split(r3.out, '\n');
    CHECK(std::stod(split(lines3[5], ',')[1]) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(std::stod(split(lines3[6], ',')[1]) == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(std::stod(split(lines3[7], ',')[1]) == doctest::Approx(7.0).epsilon(1e-8));
}

TEST_CASE("exponents at gamma = 0.5 pass the certificate with alpha_0 > N") {
    const auto r = run_cli_process("exponents --gamma 0.5 --dim 1 --k-max 0");
    CHECK(r.exit_code == 0);
    const auto lines = split(r.out, '\n');
    const auto cells = split(lines[5], ',');
    CHECK(std::stod(cells[1]) > 1.0);
    CHECK(cells[3] == "true");
}

TEST_CASE("json output round-trips and validates") {
    const auto r = run_cli_process("exponents --gamma 0 --dim 1 --k-max 1 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "exponents");
    CHECK(j["entries"].size() == 2);
    CHECK(std::abs(j["entries"][0]["alpha_k"].get<double>() - 1.0) <= 1e-8);
    CHECK(j["entries"][0]["certificate"]["pass"].get<bool>());
}

TEST_CASE("classify command labels the gamma=0 power-law case") {
    const auto r = run_cli_process("classify --gamma 0 --dim 1 --alpha 2 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["tail_kind"] == "power_law");
    CHECK(j["zero_count"] == 1);
    CHECK(j["zero_count_theorem2"] == 0);
    CHECK(std::abs(j["bracket_alpha_lo"].get<double>() - 1.0) <= 1e-8);
    CHECK(std::abs(j["bracket_alpha_hi"].get<double>() - 3.0) <= 1e-8);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli_process("profile --gamma 1.5 --dim 1 --alpha 1").exit_code == 2);
    CHECK(run_cli_process("profile --gamma 0 --dim 1").exit_code == 2);  // missing --alpha
    CHECK(run_cli_process("profile --gamma 0 --dim 1 --alpha 1 --tol 1").exit_code == 2);
    CHECK(run_cli_process("nonsense").exit_code == 2);
    CHECK(run_cli_process("exponents --gamma 0 --dim 1 --k-max 1 --samples 1").exit_code == 2);
}

TEST_CASE("numerical failures exit with code 3") {
    // degenerate basis at alpha = N + 2l with gamma != 0
    const auto r = run_cli_process("profile --gamma 0.5 --dim 1 --alpha 3");
    CHECK(r.exit_code == 3);
}

TEST_CASE("validate subcommand filter") {
    const auto r = run_cli_process("validate --suite special_units");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[PASS] special_units") != std::string::npos);
    const auto r2 = run_cli_process("validate --suite wronskian");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("[PASS] wronskian") != std::string::npos);
    CHECK(r2.out.find("worst=") != std::string::npos);
}

TEST_CASE("byte-identical repeated runs") {
    const std::string flags = "exponents --gamma 0.3 --dim 1 --k-max 1";
    const auto r1 = run_cli_process(flags);
    const auto r2 = run_cli_process(flags);
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
    const std::string pflags = "profile --gamma -0.25 --dim 3 --alpha 2.2 --samples 41";
    CHECK(run_cli_process(pflags).out == run_cli_process(pflags).out);
}

TEST_CASE("output path writes the same bytes as stdout") {
    const std::string path = "/tmp/anomal_test_out.csv";
    std::remove(path.c_str());
    const auto direct = run_cli_process("profile --gamma 0 --dim 1 --alpha 1 --samples 9");
    const auto filed = run_cli_process(
        "profile --gamma 0 --dim 1 --alpha 1 --samples 9 --output " + path);
    CHECK(filed.exit_code == 0);
    CHECK(filed.out.empty());
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == direct.out);
    std::remove(path.c_str());
}

TEST_CASE("sweep emits tidy long-format rows") {
    const auto r = run_cli_process("sweep --gammas 0,0.5 --dims 1 --k-max 0");
    CHECK(r.exit_code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 4);
    CHECK(lines[1] == "gamma,dim,alpha,quantity,value");
    CHECK(split(lines[2], ',')[3] == "alpha_0");
    CHECK(std::stod(split(lines[2], ',')[4]) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::stod(split(lines[3], ',')[4]) == doctest::Approx(1.6972728568).epsilon(1e-8));

    const auto r2 = run_cli_process("sweep --gammas 0 --dims 1 --alphas 0.5,2");
    const auto lines2 = split(r2.out, '\n');
    CHECK(r2.exit_code == 0);
    CHECK(split(lines2[2], ',')[3] == "tail_coefficient");
    CHECK(split(lines2[3], ',')[3] == "zero_count");
    CHECK(std::stod(split(lines2[5], ',')[4]) == doctest::Approx(1.0));  // zeros at alpha=2
}

TEST_CASE("help exits zero") {
    CHECK(run_cli_process("--help").exit_code == 0);
}

TEST_CASE("in-process command determinism") {
    anomal::RunConfig cfg;
    cfg.command = "exponents";
    cfg.gamma = 0.25;
    cfg.dim = 1;
    cfg.k_max = 1;
    std::ostringstream a, b;
    CHECK(anomal::cmd_exponents(cfg, a) == 0);
    CHECK(anomal::cmd_exponents(cfg, b) == 0);
    CHECK(a.str() == b.str());
}
