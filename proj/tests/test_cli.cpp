#include "doctest.h"

#include "support/process.hpp"

#include <json.hpp>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

using fastami::test::run_cli;

fastami::test::RunResult run(const std::string& args, const std::string& env = "") { return run_cli(args, env); }

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("fastami_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& body) const {
        const auto p = path_ / name;
        std::ofstream(p) << body;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

TEST_SUITE("compare") {
    TEST_CASE("identical files give fast-ami 1") {
        TempDir dir;
        const auto a = dir.file("a.txt", "x\nx\ny\nz\ny\nz\n");
        const auto r = run("compare " + a + " " + a + " --seed 3");
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["value"].get<double>() == 1.0);
        CHECK(j["metric"] == "fast-ami");
        CHECK(j["log_base"] == "e");
        CHECK(j["seed"] == 3);
        for (const char* key : {"std_error", "n_samples", "wall_time_s", "degenerate"}) CHECK(j.contains(key));
    }

    TEST_CASE("crossed design exact-ami is -1/2") {
        TempDir dir;
        const auto a = dir.file("a.txt", "0\n0\n1\n1\n");
        const auto b = dir.file("b.txt", "0\n1\n0\n1\n");
        const auto r = run("compare " + a + " " + b + " --metric exact-ami");
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["value"].get<double>() == doctest::Approx(-0.5));
        CHECK(j["std_error"].is_null());
        CHECK(j["n_samples"].is_null());
    }

    TEST_CASE("single-vs-single fast-smi is degenerate") {
        TempDir dir;
        const auto a = dir.file("a.txt", "q\nq\n");
        const auto r = run("compare " + a + " " + a + " --metric fast-smi");
        CHECK(r.code == 1);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["degenerate"] == true);
        CHECK(j["value"].is_null());
    }

    TEST_CASE("other metrics and tsv") {
        TempDir dir;
        const auto a = dir.file("a.txt", "a\nb\nc\nd\n");
        const auto b = dir.file("b.txt", "d\nc\nb\na\n");
        auto r = run("compare " + a + " " + b + " --metric mi");
        CHECK(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["value"].get<double>() == doctest::Approx(std::log(4.0)));
        r = run("compare " + a + " " + b + " --metric emi --format tsv");
        CHECK(r.code == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].rfind("metric\tvalue\t", 0) == 0);
        CHECK(rows[1].rfind("emi\t", 0) == 0);
        const auto c = dir.file("c.txt", "0\n0\n1\n1\n1\n0\n");
        const auto d = dir.file("d.txt", "0\n0\n1\n1\n2\n2\n");
        CHECK(run("compare " + c + " " + d + " --metric pairwise-ami").code == 0);
        CHECK(run("compare " + c + " " + d + " --metric fast-ami --norm max --precision 0.05").code == 0);
    }

    TEST_CASE("seed flag, environment fallback and determinism") {
        TempDir dir;
        const auto a = dir.file("a.txt", "0\n0\n1\n1\n2\n2\n0\n1\n");
        const auto b = dir.file("b.txt", "0\n1\n1\n0\n2\n1\n0\n2\n");
        const auto x = run("compare " + a + " " + b + " --seed 11");
        const auto y = run("compare " + a + " " + b + " --seed 11");
        CHECK(nlohmann::json::parse(x.out)["value"] == nlohmann::json::parse(y.out)["value"]);
        const auto via_env = run("compare " + a + " " + b, "FASTAMI_SEED=11");
        const auto j = nlohmann::json::parse(via_env.out);
        CHECK(j["seed"] == 11);
        CHECK(j["value"] == nlohmann::json::parse(x.out)["value"]);
        CHECK(nlohmann::json::parse(run("compare " + a + " " + b + " --seed 4", "FASTAMI_SEED=11").out)["seed"] == 4);
    }

    TEST_CASE("input errors exit 2") {
        TempDir dir;
        const auto a = dir.file("a.txt", "0\n0\n1\n");
        const auto b = dir.file("b.txt", "0\n1\n");
        const auto empty = dir.file("e.txt", "");
        CHECK(run("compare " + a + " " + b).code == 2);
        CHECK(run("compare " + a + " " + dir.path("missing.txt")).code == 2);
        CHECK(run("compare " + empty + " " + empty).code == 2);
        CHECK(run("compare " + a + " " + a + " --metric nope").code == 2);
        CHECK(run("compare " + a + " " + a + " --precision -1").code == 2);
        CHECK(run("compare " + a).code == 2);
    }
}

TEST_SUITE("bench") {
    TEST_CASE("row count") {
        TempDir dir;
        const auto out = dir.path("bench.csv");
        const auto r = run("bench --n 1000 --r 100,500 --pairs 5 --methods exact,fast --seed 1 --out " + out);
        CHECK(r.code == 0);
        const auto rows = lines(slurp(out));
        REQUIRE(rows.size() == 22);
        CHECK(rows[0] == "# fastami-bench schema v1");
        CHECK(rows[1] == "method,n,r,c,value,std_error,n_samples,wall_time_s,peak_mem_bytes,seed,status");
    }

    TEST_CASE("same seed gives the same bytes") {
        TempDir dir;
        const std::string flags = "bench --n 500 --r 50,400 --pairs 3 --methods exact,pairwise,fast --seed 5 --no-timing --out ";
        CHECK(run(flags + dir.path("one.csv")).code == 0);
        CHECK(run(flags + dir.path("two.csv")).code == 0);
        CHECK(slurp(dir.path("one.csv")) == slurp(dir.path("two.csv")));
        CHECK_FALSE(slurp(dir.path("one.csv")).empty());
    }

    TEST_CASE("timeouts are recorded per row") {
        const auto r = run("bench --methods exact --r 900 --n 1000 --pairs 2 --timeout 0.001");
        CHECK(r.code == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 4);
        for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i].substr(rows[i].rfind(',') + 1) == "timeout");
    }

    TEST_CASE("bad flags and unwritable output exit 2") {
        CHECK(run("bench --n 100 --r 10 --pairs 1 --methods exact --out /nonexistent/dir/x.csv").code == 2);
        CHECK(run("bench --n abc --r 10").code == 2);
        CHECK(run("bench --n 100 --r 10 --methods slow").code == 2);
    }
}

TEST_SUITE("sample") {
    TEST_CASE("partition outputs") {
        std::set<std::string> seen;
        for (int s = 0; s < 40; ++s) {
            const auto r = run("sample partition --n 4 --parts 2 --count 1 --seed " + std::to_string(s));
            CHECK(r.code == 0);
            seen.insert(r.out);
        }
        CHECK(seen == std::set<std::string>{"3 1\n", "2 2\n"});
        CHECK(run("sample partition --n 3 --parts 3").out == "1 1 1\n");
        const auto many = run("sample partition --n 50 --parts 7 --count 5 --seed 2");
        CHECK(lines(many.out).size() == 5);
        CHECK(many.out == run("sample partition --n 50 --parts 7 --count 5 --seed 2").out);
    }

    TEST_CASE("clustering outputs") {
        const auto r = run("sample clustering --n 4 --parts 2 --seed 9");
        CHECK(r.code == 0);
        std::istringstream in(r.out);
        std::set<int> labels;
        int count = 0;
        int l = 0;
        while (in >> l) {
            labels.insert(l);
            ++count;
        }
        CHECK(count == 4);
        CHECK(labels.size() == 2);
    }

    TEST_CASE("flaw probability") {
        const auto r = run("sample --flaw-prob --n 100 --c 30");
        CHECK(r.code == 0);
        CHECK(std::stod(r.out) == doctest::Approx(0.665).epsilon(0.0015));
    }

    TEST_CASE("errors") {
        CHECK(run("sample partition --n 3 --parts 4").code == 2);
        CHECK(run("sample partition --n 3").code == 2);
        CHECK(run("sample --flaw-prob --n 3").code == 2);
    }
}
