#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <commands.hpp>
#include <mmq/io.hpp>

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "mmq");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = mmq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_model(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / ("mmq_cli_test_" + name + ".json");
    std::ofstream(path) << body;
    return path.string();
}

const std::string table1 = MMQ_MODELS_DIR "/table1.json";

} // namespace

TEST_CASE("validate")
{
    const auto ok = run_cli({"validate", table1});
    CHECK(ok.code == 0);
    CHECK(ok.out == "table1: valid; rho=0.4667\n");

    const auto bad = run_cli({"validate", temp_model("short", R"({"f": ["0.5", "0.4"], "g": ["1"]})")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("NonStochasticVector") != std::string::npos);

    const auto two = run_cli({"validate", temp_model("two", R"({"f": ["1"], "g": ["1.5"]})")});
    CHECK(two.code == 1);
    CHECK(two.out.find("3 violation(s)") != std::string::npos);
}

TEST_CASE("usage errors")
{
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"bogus"}).code == 2);
    CHECK(run_cli({"dist"}).code == 2);
    CHECK(run_cli({"dist", table1, "--kmax", "ten"}).code == 2);
    CHECK(run_cli({"dist", table1, "--backend", "quad"}).code == 2);
    CHECK(run_cli({"validate", "/nonexistent/model.json"}).code != 0);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("analyze")
{
    const auto text = run_cli({"analyze", table1, "--backend", "exact"});
    CHECK(text.code == 0);
    CHECK(text.out.find("649/1080") != std::string::npos);

    const auto json = run_cli({"analyze", table1, "--format", "json"});
    CHECK(json.code == 0);
    CHECK(json.out.find("\"expected_queue\"") != std::string::npos);
}

TEST_CASE("dist csv round trips byte for byte")
{
    const auto result = run_cli({"dist", table1, "--kmax", "200"});
    CHECK(result.code == 0);
    const auto table = mmq::io::parse_csv(result.out);
    CHECK(table.header == std::vector<std::string>{"k", "p", "tail"});
    CHECK(table.meta("breakdown") == std::optional<std::string>("rounding_floor"));
    CHECK(mmq::io::write_csv(table) == result.out);
    CHECK(result.err.find("stopped at k=32") != std::string::npos);

    const auto exact = run_cli({"dist", table1, "--kmax", "5", "--backend", "exact"});
    CHECK(exact.err.find("exact rational backend") != std::string::npos);
    const auto exact_table = mmq::io::parse_csv(exact.out);
    REQUIRE(exact_table.rows.size() == 6);
    CHECK(exact_table.rows[0][1] == "458/665");
}

TEST_CASE("compare with unit batches has a single row")
{
    const auto model = temp_model("unit", R"({"name": "unit", "f": ["0.5", "0.5"], "g": ["1"]})");
    const auto result = run_cli({"compare", model, "--iterations", "20000", "--runs", "3", "--threads", "1"});
    CHECK(result.code == 0);
    const auto table = mmq::io::parse_csv(result.out);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0][0] == "0");
    CHECK(table.rows[0][1] == "1");
}

TEST_CASE("output file option")
{
    const auto path = (std::filesystem::temp_directory_path() / "mmq_cli_test_out.csv").string();
    const auto result = run_cli({"oracle", table1, "--kmax", "5", "-o", path});
    CHECK(result.code == 0);
    CHECK(result.out.empty());
    const auto table = mmq::io::parse_csv(mmq::io::read_file(path));
    CHECK(table.rows.size() == 6);
}
