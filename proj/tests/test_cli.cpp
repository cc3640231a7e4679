#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pfx_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + PFX_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Non-comment CSV lines split into fields.
std::vector<std::vector<std::string>> table(const fs::path& p) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        out.push_back(fields);
    }
    return out;
}

std::map<std::string, std::string> first_row(const fs::path& p) {
    const auto t = table(p);
    REQUIRE(t.size() >= 2);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < t[0].size(); ++i) row[t[0][i]] = t[1][i];
    return row;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("exit codes") {
        const fs::path dir = scratch("exit");
        CHECK(run("point --out " + dir.string() + " --set qubit_p.g_over_omega=0 --set qubit_f.g_over_omega=0") == 0);
        CHECK(run("point --out " + dir.string() + " --set bogus=1") == 1);
        CHECK(run("") == 1);
        CHECK(run("point --frobnicate") == 1);
        CHECK(run("point --config /nonexistent/pfx.json") == 1);
        CHECK(run("point --strict --out " + dir.string() + " --set t_on_ns=0.55") == 2);
        CHECK(run("point --out " + dir.string() + " --set t_on_ns=0.55") == 0);
        CHECK(run("--version") == 0);
        fs::remove_all(dir);
    }

    TEST_CASE("config file and point output") {
        const fs::path dir = scratch("point");
        fs::create_directories(dir);
        {
            std::ofstream cfg(dir / "long_distance.json");
            cfg << R"({"r_over_lambda": 2, "qubit_p": {"g_over_omega": 0.09}, "qubit_f": {"g_over_omega": 0.09},
                       "t_on_ns": 0.1, "t_off_ns": 0})";
        }
        REQUIRE(run("point --config " + (dir / "long_distance.json").string() + " --out " + dir.string()) == 0);
        const auto row = first_row(dir / "point.csv");
        CHECK(row.at("region") == "I");
        CHECK(std::stod(row.at("concurrence")) < 1e-3);
        CHECK(slurp(dir / "point.csv").find("# config_hash=") != std::string::npos);
        fs::remove_all(dir);
    }

    TEST_CASE("sweep grid size") {
        const fs::path dir = scratch("sweep");
        REQUIRE(run("sweep --out " + dir.string() +
                    " --set sweep.axis1.path=t_on_ns --set sweep.axis1.min=0.01 --set sweep.axis1.max=0.1"
                    " --set sweep.axis1.n=3 --set sweep.axis2.path=t_off_ns --set sweep.axis2.min=0"
                    " --set sweep.axis2.max=0.1 --set sweep.axis2.n=3 --workers 2") == 0);
        const auto t = table(dir / "sweep.csv");
        CHECK(t.size() == 1 + 9);
        CHECK(t[0][0] == "axis1");
        CHECK(fs::exists(dir / "sweep_long.csv"));
        CHECK(fs::exists(dir / "boundaries.csv"));
        CHECK(run("sweep --out " + dir.string()) == 1);
        fs::remove_all(dir);
    }

    TEST_CASE("regions and circuit") {
        const fs::path dir = scratch("regions");
        REQUIRE(run("regions --out " + dir.string()) == 0);
        std::set<std::string> curves;
        for (const auto& r : table(dir / "boundaries.csv"))
            if (r[0] != "curve") curves.insert(r[0]);
        CHECK(curves.size() == 3);
        REQUIRE(run("circuit --out " + dir.string()) == 0);
        bool found = false;
        for (const auto& r : table(dir / "circuit_f3.csv"))
            if (r[0] == "0.5") {
                found = true;
                CHECK(std::abs(std::stod(r[1])) < 1e-15);
            }
        CHECK(found);
        CHECK(fs::exists(dir / "circuit_potential.csv"));
        CHECK(fs::exists(dir / "circuit_switch.csv"));
        fs::remove_all(dir);
    }

    TEST_CASE("repeated runs produce identical files") {
        const fs::path a = scratch("repeat_a");
        const fs::path b = scratch("repeat_b");
        const std::string sets =
            " --set sweep.axis1.path=t_off_ns --set sweep.axis1.min=0 --set sweep.axis1.max=0.2 --set sweep.axis1.n=7";
        REQUIRE(run("sweep --workers 1 --out " + a.string() + sets) == 0);
        REQUIRE(run("sweep --workers 3 --out " + b.string() + sets) == 0);
        for (const char* f : {"sweep.csv", "sweep_long.csv"}) CHECK(slurp(a / f) == slurp(b / f));
        fs::remove_all(a);
        fs::remove_all(b);
    }
}
