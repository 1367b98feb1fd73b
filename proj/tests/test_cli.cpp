#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dioph/cli.hpp"

using dioph::cli::run;

#ifndef DIOPH_FIXTURES
#define DIOPH_FIXTURES "fixtures"
#endif

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(DIOPH_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("bound prints the tower") {
    const auto r = call({"bound", "--domain", "integer", "x1 - 1 = 0"});
    CHECK(r.code == 0);
    CHECK(r.out == "2^(2^8)\n");
    const auto j = call({"bound", "x1 - 1 = 0", "--format", "json"});
    CHECK(j.out == R"j({"equation":"x1 - 1 = 0","domain":"integer","card_T":"9","bound":"2^(2^8)"})j" "\n");
    CHECK(call({"bound", "--n", "7"}).out == "2^(2^6)\n");
    CHECK(call({"bound", "--n", "3", "--psi", "2^(2^n)"}).out == "256\n");  // small values print in decimal
    CHECK(call({"bound", "--domain", "nonneg", "x1 = 2"}).out == "2^(2^(9^1875-1))\n");
    CHECK(call({"bound", "--domain", "rational", "2*x1 = 1"}).code == 0);
}

TEST_CASE("count and solve on fixtures") {
    auto r = call({"count", "--box", "65536", fixture("thm7_n10.json")});
    CHECK(r.code == 0);
    CHECK(r.out == "1156\n");
    r = call({"count", "--box", "65536", "--threads", "3", fixture("thm7_n10.json")});
    CHECK(r.out == "1156\n");
    r = call({"solve", "--box", "256", fixture("chain.json"), "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == "1");
    r = call({"solve", "--box", "4294967296", fixture("chain.json")});
    CHECK(r.out == "(0, 0, 0, 0, 0, 0)\n(2, 4, 16, 256, 65536, 4294967296)\ncount 2\n");
}

TEST_CASE("gallery example JSON") {
    const auto r = call({"gallery", "example", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 7);
    CHECK(j["bound"] == "2^64");
    CHECK(j["solutions"].size() == 12);
    CHECK(j["solutions"].back() == nlohmann::json::array({30, 4930}));
    CHECK(j["scan"] == nlohmann::json::array({-2, 7132}));
    CHECK(call({"gallery", "example", "--format", "json", "--threads", "4"}).out == r.out);
}

TEST_CASE("gallery systems match the shipped fixtures") {
    const auto read = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    CHECK(call({"gallery", "chain", "--format", "json"}).out == read(fixture("chain.json")));
    CHECK(call({"gallery", "thm7", "--format", "json"}).out == read(fixture("thm7_n10.json")));
    CHECK(call({"gallery", "thm8", "--depth", "2", "--format", "json"}).out == read(fixture("thm8_depth2.json")));
    CHECK(call({"gallery", "thm8", "--depth", "4", "--format", "json"}).out == read(fixture("thm8_depth4.json")));
    const auto a = call({"gallery", "thm8", "--depth", "2", "--assemble", "--format", "json"});
    CHECK(nlohmann::json::parse(a.out)["verified"] == true);
}

TEST_CASE("other subcommands") {
    CHECK(call({"parse", "x1^5 - x1 = x2^2 - x2"}).out == "x1^5 - x1 = x2^2 - x2\n");
    auto r = call({"lower", "x1*x1 = 2"});
    CHECK(r.out.rfind("n=3 {x3=1, x3+x3=x2, x1*x1=x2}\n", 0) == 0);
    r = call({"lower", "--mode", "canonical", "x1 = 1", "--format", "json"});
    CHECK(nlohmann::json::parse(r.out)["system"]["n"] == 9);
    r = call({"tilde", fixture("thm7_n10.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("x1*x10=x10") != std::string::npos);
    CHECK(call({"hat", "x1 = 2"}).code == 0);
    r = call({"probe", "5", "--horizon", "10"});
    CHECK(r.out == "WitnessFound (6)\n");
    r = call({"probe", "--horizon", "10", "--", "-5"});
    CHECK(r.out == "WitnessFound (6)\n");
    r = call({"semi", "x1 - x2 = 0", "--override-start", "3", "--cutoff", "10"});
    CHECK(r.out == "Terminated start=3 shell=3 witness=(3, 3)\n");
    r = call({"semi", "x1 - 1 = 0", "--cutoff", "10"});
    CHECK(r.out == "StartNotEnumerable start=2^(2^8)+1\n");
    r = call({"survey", "--n", "1", "--growth-box", "100", "--format", "json"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        CHECK(nlohmann::json::parse(line).contains("status"));
        ++count;
    }
    CHECK(count == 8);
}

TEST_CASE("rationalize") {
    const auto dir = std::filesystem::temp_directory_path() / "dioph_cli_rat";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "idem.json").string();
    std::ofstream(path) << R"({"n":1,"eqs":[["mul",1,1,1]]})";
    const auto r = call({"rationalize", path, "--box", "2", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["num_vars"] == 12);
    CHECK(j["solutions"] == nlohmann::json::parse(R"([["0/1"],["1/1"]])"));
    CHECK(nlohmann::json::parse(call({"rationalize", path, "--verbatim", "--format", "json"}).out)["encoding"] ==
          "verbatim");
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"bound", "--bogus", "x1 = 0"}).code == 2);
    CHECK(call({"count", "--box", "5"}).code == 2);
    CHECK(call({"parse", "x1 +* 2 = 0"}).code == 2);
    CHECK(call({"bound", "x1 = x1"}).code == 2);  // zero polynomial
    const auto r = call({"lower", "--mode", "canonical", "x1^5 - x1 = x2^2 - x2"});
    CHECK(r.code == 3);
    CHECK(r.err.find("3^18") != std::string::npos);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("cache files") {
    const auto dir = std::filesystem::temp_directory_path() / "dioph_cli_cache";
    std::filesystem::remove_all(dir);
    const auto first = call({"--cache-dir", dir.string(), "bound", "x1 - 1 = 0"});
    CHECK(first.code == 0);
    std::size_t files = 0;
    std::filesystem::path file;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        ++files;
        file = e.path();
    }
    REQUIRE(files == 1);
    CHECK(file.filename().string().size() == 16 + 5);
    // a tampered output is served back, proving the cache was read
    std::ifstream in(file);
    auto doc = nlohmann::json::parse(in);
    in.close();
    doc["output"] = "cached\n";
    std::ofstream(file) << doc.dump();
    CHECK(call({"bound", "x1 - 1 = 0", "--cache-dir", dir.string()}).out == "cached\n");
    // the same equation written differently has the same canonical key
    CHECK(call({"bound", "x1 = 1", "--cache-dir", dir.string()}).out != "cached\n");
    CHECK(call({"bound", "-1 + x1 = 0", "--cache-dir", dir.string()}).out == "cached\n");
    std::filesystem::remove_all(dir);
}

TEST_CASE("fnv1a reference values") {
    CHECK(dioph::cli::fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(dioph::cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
