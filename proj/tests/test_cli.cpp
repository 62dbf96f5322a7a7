#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "painleve/cli.hpp"

using namespace painleve;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("painleve_test_" + name);
}

void write(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// Manifest JSON embedded in the first CSV comment line.
json csv_header_json(const std::string& line, const std::string& tag) {
    REQUIRE(line.rfind("# " + tag + " ", 0) == 0);
    return json::parse(line.substr(tag.size() + 3));
}

}  // namespace

TEST_CASE("sha256") {
    CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("help and usage errors") {
    CHECK(run({"--help"}).code == cli::Success);
    CHECK(run({}).code == cli::Failure);
    CHECK(run({"trajectory", "--eq", "p3"}).code == cli::Failure);
    CHECK(run({"eigen", "--eq", "p1", "--n", "0"}).code == cli::Failure);
    CHECK(run({"bogus"}).code == cli::Failure);
}

TEST_CASE("trajectory along the first P-I separatrix") {
    // The ten published digits keep the solution on the branch until about t = -9.
    const Result r = run({"trajectory", "--eq", "p1", "--y0", "0", "--slope", "1.851854034",
                          "--direction", "neg", "--horizon", "-8"});
    REQUIRE(r.code == cli::Success);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() > 10);
    const json man = csv_header_json(ls[0], "manifest");
    CHECK(man["tool"] == "painleve");
    CHECK(man["input_hash"].get<std::string>().size() == 64);
    const json cls = csv_header_json(ls[1], "classification");
    CHECK(cls["pole_count"] == 0);
    CHECK(ls[2] == "t,y,branch_plus,branch_minus,pole_marker");

    int poles = 0;
    double t = 0, y = 0, bp = 0, bm = 0;
    for (std::size_t i = 3; i < ls.size(); ++i) {
        char c;
        int marker;
        std::istringstream row(ls[i]);
        if (ls[i].back() == '1') ++poles;
        if (!(row >> t >> c >> y >> c >> bp >> c >> bm >> c >> marker)) continue;
    }
    CHECK(poles == 0);
    CHECK(t == doctest::Approx(-8.0));
    CHECK(bp == doctest::Approx(std::sqrt(8.0 / 6.0)).epsilon(1e-12));
    CHECK(bm == -bp);
    CHECK(std::abs(y - bp) <= 0.05 * bp);
}

TEST_CASE("trajectory of the first P-II decaying solution") {
    const Result r = run({"trajectory", "--eq", "p2", "--y0", "1.222873339", "--slope", "0",
                          "--direction", "pos", "--horizon", "6", "--format", "json"});
    REQUIRE(r.code == cli::Success);
    const json j = json::parse(r.out);
    CHECK(j["poles"].size() == 1);
    CHECK(j["termination"] == "horizon");
    const auto& last = j["samples"].back();
    CHECK(std::abs(last[1].get<double>()) < 1e-2);
    CHECK(j["samples"].front()[0] == 0.0);
}

TEST_CASE("trajectory CSV marks poles and leaves the branch columns empty for t > 0") {
    const Result r = run({"trajectory", "--eq", "p2", "--y0", "1.222873339", "--direction", "pos",
                          "--horizon", "3"});
    REQUIRE(r.code == cli::Success);
    int poles = 0;
    for (const std::string& l : lines(r.out)) {
        if (l.empty() || l[0] == '#' || l[0] == 't') continue;
        if (l.back() == '1') {
            ++poles;
            CHECK(l.find(",,,,1") != std::string::npos);
        } else {
            CHECK(l.find(",,,0") != std::string::npos);
        }
    }
    CHECK(poles == 1);
}

TEST_CASE("toy trajectory: finite maxima then slow decay") {
    const Result r = run({"trajectory", "--eq", "toy", "--y0", "0.25", "--format", "json"});
    REQUIRE(r.code == cli::Success);
    const json j = json::parse(r.out);
    const int maxima = j["classification"]["maxima"];
    CHECK(maxima >= 1);
    CHECK(maxima < 10);
    // Late-time decay like 1/t: t y(t) stays bounded and y keeps shrinking.
    const auto& s = j["samples"];
    const double t1 = s[s.size() / 2][0], y1 = s[s.size() / 2][1];
    const double t2 = s.back()[0], y2 = s.back()[1];
    CHECK(t2 == doctest::Approx(50.0));
    CHECK(std::abs(y2) < std::abs(y1));
    CHECK(std::abs(t2 * y2) < 2.0 * std::abs(t1 * y1) + 1.0);
}

TEST_CASE("eigen: P-II slope table") {
    const Result r = run({"eigen", "--eq", "p2", "--mode", "slope", "--n", "5"});
    REQUIRE(r.code == cli::Success);
    const json j = json::parse(r.out);
    CHECK(j["status"] == "complete");
    CHECK(j["failed_index"].is_null());
    const double want[] = {0.5950825526, 1.528605106, 2.155132869, 2.700745985, 3.195127590};
    REQUIRE(j["records"].size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(j["records"][i]["index"] == i + 1);
        CHECK(std::abs(j["records"][i]["value"].get<double>() - want[i]) <= 1e-8);
        CHECK(j["records"][i]["pole_count"] == (i + 1) / 2);
    }
}

TEST_CASE("eigen: toy table is monotone") {
    const Result r = run({"eigen", "--eq", "toy", "--n", "20", "--format", "csv"});
    REQUIRE(r.code == cli::Success);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 22);
    CHECK(ls[1] == "index,value,bracket_width,pole_count");
    double prev = 0.0;
    for (std::size_t i = 2; i < ls.size(); ++i) {
        const double v = std::stod(ls[i].substr(ls[i].find(',') + 1));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("eigen: a short horizon gives a partial table with its own exit code") {
    const Result r = run({"eigen", "--eq", "p1", "--n", "3", "--horizon", "-4"});
    CHECK(r.code == cli::PartialTable);
    const json j = json::parse(r.out);
    CHECK(j["status"] == "partial");
    CHECK(j["failed_index"].is_number_integer());
    CHECK(r.err.find("partial table") != std::string::npos);
}

TEST_CASE("constants without a table") {
    const Result r = run({"constants"});
    REQUIRE(r.code == cli::Success);
    const json j = json::parse(r.out);
    CHECK(std::abs(j["closed_forms"]["B_I"].get<double>() - 2.09214674) < 1e-8);
    CHECK(std::abs(j["closed_forms"]["C_I"].get<double>() + 1.0304844) < 1e-7);
    CHECK(std::abs(j["closed_forms"]["B_II"].get<double>() - 1.8624128) < 1e-7);
    CHECK(std::abs(j["closed_forms"]["C_II"].get<double>() - 1.21581165) < 1e-8);
    CHECK_FALSE(j.contains("extrapolation"));

    const Result csv = run({"constants", "--format", "csv"});
    const auto ls = lines(csv.out);
    REQUIRE(ls.size() == 6);
    CHECK(ls[1] == "quantity,value,closed_form,deviation");
}

TEST_CASE("eigen output feeds constants unchanged") {
    const auto path = temp_file("p2value.json");
    const Result e = run({"eigen", "--eq", "p2", "--mode", "value", "--n", "6", "--out", path.string()});
    REQUIRE(e.code == cli::Success);
    const Result c = run({"constants", "--table", path.string()});
    REQUIRE(c.code == cli::Success);
    const json j = json::parse(c.out);
    const json& x = j["extrapolation"];
    CHECK(x["constant"] == "C_II");
    CHECK(x["records"] == 6);
    REQUIRE(x["estimates"].size() == 1);
    CHECK(std::abs(x["estimates"][0]["deviation"].get<double>()) < 1e-2);
    // Positional form reads the same file.
    CHECK(run({"constants", path.string()}).code == cli::Success);
    std::filesystem::remove(path);
}

TEST_CASE("P-I slope round trip reaches the closed form") {
    const auto path = temp_file("p1slope.json");
    REQUIRE(run({"eigen", "--eq", "p1", "--mode", "slope", "--n", "11", "--tol", "1e-10", "--out",
                 path.string()})
                .code == cli::Success);
    const json table = json::parse(std::ifstream(path));
    const double b[] = {1.851854034, 3.004031103, 3.905175320, 4.683412410, 5.383086722};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(table["records"][i]["value"].get<double>() - b[i]) <= 1e-6);
    CHECK(std::abs(table["records"][9]["value"].get<double>() - 8.244932302) <= 1e-6);
    CHECK(std::abs(table["records"][10]["value"].get<double>() - 8.738330156) <= 1e-6);

    const Result c = run({"constants", "--table", path.string()});
    REQUIRE(c.code == cli::Success);
    const json x = json::parse(c.out)["extrapolation"];
    CHECK(x["constant"] == "B_I");
    CHECK(x["estimates"][0]["order"] == 5);
    CHECK(std::abs(x["estimates"][0]["deviation"].get<double>()) < 1e-6);
    std::filesystem::remove(path);
}

TEST_CASE("constants rejects empty and malformed tables") {
    const auto empty = temp_file("empty.json");
    write(empty, R"({"equation":"p1","mode":"slope","records":[]})");
    const Result a = run({"constants", "--table", empty.string()});
    CHECK(a.code == cli::Failure);
    CHECK(a.err.find("usage error") != std::string::npos);

    const auto bad = temp_file("bad.json");
    write(bad, "{not json");
    CHECK(run({"constants", "--table", bad.string()}).code == cli::Failure);

    write(bad, R"({"equation":"p1","mode":"slope","records":[{"index":1}]})");
    CHECK(run({"constants", "--table", bad.string()}).code == cli::Failure);
    write(bad, R"({"equation":"p1","mode":"slope","records":[{"index":2,"value":3.0}]})");
    CHECK(run({"constants", "--table", bad.string()}).code == cli::Failure);

    CHECK(run({"constants", "--table", temp_file("missing.json").string()}).code == cli::Failure);
    std::filesystem::remove(empty);
    std::filesystem::remove(bad);
}

TEST_CASE("table schema round trip") {
    EigenTable t;
    t.records = {{1, 0.5, 1e-10, 0, SearchMode::slope()}, {2, 1.5, 1e-10, 1, SearchMode::slope()}};
    const json j = cli::table_to_json(Equation::painleve_ii(), SearchMode::slope(), t);
    const cli::ParsedTable p = cli::table_from_json(j);
    CHECK(p.equation == EquationKind::PainleveII);
    CHECK(p.mode == SearchKind::SlopeEigen);
    REQUIRE(p.records.size() == 2);
    CHECK(p.records[1].value == 1.5);
    CHECK(p.records[1].pole_count == 1);
    try {
        cli::table_from_json(json{{"equation", "p9"}});
        FAIL("expected a schema error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaError);
    }
}

TEST_CASE("identical flags give identical output apart from the wall time") {
    auto strip = [](std::string s) {
        json j = json::parse(s);
        REQUIRE(j["manifest"].contains("wall_time_s"));
        j["manifest"].erase("wall_time_s");
        return j.dump();
    };
    const std::vector<std::string> args = {"eigen", "--eq", "p1", "--mode", "value", "--n", "2"};
    const Result a = run(args), b = run(args);
    REQUIRE(a.code == cli::Success);
    CHECK(strip(a.out) == strip(b.out));

    const std::vector<std::string> targs = {"trajectory", "--eq", "p1", "--slope", "2.5",
                                            "--horizon", "-6", "--format", "json"};
    CHECK(strip(run(targs).out) == strip(run(targs).out));

    // A different flag changes the config snapshot and its hash.
    const Result c = run({"eigen", "--eq", "p1", "--mode", "value", "--n", "2", "--tol", "1e-9"});
    CHECK(json::parse(c.out)["manifest"]["input_hash"] != json::parse(a.out)["manifest"]["input_hash"]);
}
