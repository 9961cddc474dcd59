#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dkposc/cli.hpp"
#include "dkposc/sweep.hpp"

using namespace dkposc;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = cli::cli_main(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.find_first_of("0123456789") != 0) continue;
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

TEST_CASE("cli help exits cleanly") {
    const CliResult r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("spectrum") != std::string::npos);
    CHECK(r.out.find("validate") != std::string::npos);
}

TEST_CASE("cli rejects unknown flags and missing subcommands with code 2") {
    CHECK(run_cli({"spectrum", "--nonsense"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"spectrum", "--mode", "bogus"}).code == 2);
}

TEST_CASE("cli spectrum prints an increasing level table") {
    const CliResult r = run_cli({"spectrum", "--levels", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("n,E,residual\n") != std::string::npos);
    // default parameters have a = 1, so the advisory fires on stderr
    CHECK(r.err.find("advisory") != std::string::npos);
    const std::vector<std::string> rows = data_lines(r.out);
    REQUIRE(rows.size() == 3);
    double prev = -1e300;
    for (const std::string& row : rows) {
        const double e = std::stod(row.substr(row.find(',') + 1));
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("cli spectrum reads a config file") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "dkposc_cli_test.cfg";
    {
        std::ofstream cfg(path);
        cfg << "a=0\nm=0\nk=0\ndelta2=0\n";
    }
    const CliResult r = run_cli({"spectrum", "--config", path.string(), "--levels", "1"});
    fs::remove(path);
    REQUIRE(r.code == 0);
    CHECK(r.err.find("advisory") == std::string::npos);  // a = 0: no advisory
    const std::vector<std::string> rows = data_lines(r.out);
    REQUIRE(rows.size() == 1);
    const double e = std::stod(rows[0].substr(2));
    CHECK(std::abs(e - std::sqrt(3.0)) < 1e-10);
}

TEST_CASE("cli spectrum with a broken config exits with 2") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "dkposc_cli_bad.cfg";
    {
        std::ofstream cfg(path);
        cfg << "masses=1\n";
    }
    const CliResult r = run_cli({"spectrum", "--config", path.string()});
    fs::remove(path);
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown key") != std::string::npos);
    CHECK(run_cli({"spectrum", "--config", "/no/such/file.cfg"}).code == 2);
}

TEST_CASE("cli sweep preset emits parseable CSV with the documented trend") {
    const CliResult r = run_cli({"sweep", "--preset", "fig1", "--steps", "6", "--levels", "2"});
    REQUIRE(r.code == 0);
    const SweepTable table = read_csv_string(r.out);
    CHECK(table.spec.swept == SweptParam::alpha);
    CHECK(table.rows.size() == 12);
    for (int n = 0; n < 2; ++n) {
        double prev = 1e300;
        for (const SweepRow& row : table.rows) {
            if (row.n != n) continue;
            REQUIRE(row.error.empty());
            CHECK(row.energy < prev);  // energies fall as alpha grows
            prev = row.energy;
        }
    }
}

TEST_CASE("cli sweep writes --out files byte-identically across runs") {
    namespace fs = std::filesystem;
    const fs::path p1 = fs::temp_directory_path() / "dkposc_sweep1.csv";
    const fs::path p2 = fs::temp_directory_path() / "dkposc_sweep2.csv";
    const std::vector<std::string> args = {"sweep", "--preset", "fig3", "--steps", "4",
                                           "--levels", "1", "--jobs", "3"};
    std::vector<std::string> a1 = args;
    a1.push_back("--out");
    a1.push_back(p1.string());
    std::vector<std::string> a2 = args;
    a2.push_back("--out");
    a2.push_back(p2.string());
    REQUIRE(run_cli(a1).code == 0);
    REQUIRE(run_cli(a2).code == 0);
    std::ifstream f1(p1), f2(p2);
    const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    fs::remove(p1);
    fs::remove(p2);
    CHECK(!s1.empty());
    CHECK(s1 == s2);
}

TEST_CASE("cli sweep argument validation") {
    CHECK(run_cli({"sweep"}).code == 2);  // neither preset nor custom range
    CHECK(run_cli({"sweep", "--preset", "fig1", "--param", "alpha"}).code == 2);
    CHECK(run_cli({"sweep", "--preset", "fig9"}).code == 2);
    CHECK(run_cli({"sweep", "--param", "alpha", "--from", "0.5", "--to", "1.5"}).code == 2);
    const CliResult custom =
        run_cli({"sweep", "--param", "omega", "--from", "0.5", "--to", "1.0", "--steps", "3",
                 "--levels", "1"});
    CHECK(custom.code == 0);
    CHECK(read_csv_string(custom.out).rows.size() == 3);
}

TEST_CASE("cli wavefunction emits sample rows") {
    const CliResult r =
        run_cli({"wavefunction", "--levels", "2", "--samples", "40"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("n,r,phi1,density\n") != std::string::npos);
    CHECK(data_lines(r.out).size() == 80);
}

TEST_CASE("cli wavefunction honors an explicit r-max") {
    const CliResult r = run_cli(
        {"wavefunction", "--levels", "1", "--samples", "10", "--r-max", "25"});
    REQUIRE(r.code == 0);
    const std::vector<std::string> rows = data_lines(r.out);
    REQUIRE(rows.size() == 10);
    const std::string& last = rows.back();
    const std::size_t first_comma = last.find(',');
    const double r_last = std::stod(last.substr(first_comma + 1));
    CHECK(r_last == 25.0);
    // an r-max inside the Gaussian tail violates the normalization contract
    CHECK(run_cli({"wavefunction", "--levels", "1", "--r-max", "2"}).code == 1);
}
