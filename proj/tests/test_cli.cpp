#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rydpol/config.hpp"
#include "rydpol/error.hpp"
#include "rydpol/recipes.hpp"
#include "rydpol/run.hpp"
#include "rydpol/table.hpp"

using namespace rydpol;

namespace
{
    std::string error_key(const std::string& text)
    {
        try
        {
            parse_config(text);
        }
        catch (const ConfigError& e)
        {
            return e.key();
        }
        return "<accepted>";
    }

    std::string slurp(const std::filesystem::path& p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string all_text(const ExecutionResult& r)
    {
        std::string s;
        for (const auto& t : r.tables)
            s += t.name + "\n" + format_table(t);
        return s;
    }
}

TEST_CASE("minimal config fills defaults")
{
    const RunConfig c = parse_config(R"({"solver": "equal"})");
    CHECK(c.solver == Solver::equal);
    CHECK(c.params.alpha == 30.0);
    CHECK(c.params.rb == 0.4);
    CHECK(c.params.rabi == Matrix2c::Identity());
    CHECK(c.mode == ClosedMode::piecewise);
    CHECK(c.sweep.detunings().size() == 33);
    CHECK(parse_config(R"({"solver": "ladder2", "delta1": 1, "delta2": -1})").n == default_ladder_nodes);
    CHECK(parse_config(R"({"solver": "full"})").n == default_full_nodes);
}

TEST_CASE("invalid configs name the offending key")
{
    CHECK(error_key(R"({"solver": "equal", "delta1": 1, "delta2": 2})") == "delta2");
    CHECK(error_key(R"({"solver": "equal", "alpah": 30})") == "alpah");
    CHECK(error_key(R"({"alpha": 30})") == "solver");
    CHECK(error_key(R"({"solver": "equal", "n": 11})") == "n");
    CHECK(error_key(R"({"solver": "full", "mode": "smooth"})") == "mode");
    CHECK(error_key(R"({"solver": "equal", "mode": "jagged"})") == "mode");
    CHECK(error_key(R"({"solver": "equal", "alpha": -1})") != "<accepted>");
    CHECK(error_key(R"({"solver": "ladder2", "v12_over_v11": 0.5})") != "<accepted>");
    CHECK(error_key(R"({"solver": "equal", "delta": 1, "delta1": 1})") != "<accepted>");
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("serialisation round-trips and is idempotent")
{
    for (const Recipe& r : bundled_recipes())
    {
        CAPTURE(r.name);
        const RunConfig c = parse_config(std::string(r.text));
        const std::string once = serialize_config(c);
        const std::string twice = serialize_config(parse_config(once));
        CHECK(once == twice);
    }
}

TEST_CASE("bundled recipes")
{
    CHECK(find_recipe("tripod_sweep") != nullptr);
    CHECK(find_recipe("ladder_maps") != nullptr);
    CHECK(find_recipe("nope") == nullptr);
    const auto all = bundled_recipes();
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1].name < all[i].name);
}

TEST_CASE("table formatting")
{
    OutputTable t{"t", {"a", "b"}, {}, {"rydpol test"}};
    CHECK(format_table(t) == "# rydpol test\na,b\n");
    t.rows.push_back({1.0, 0.1234567891234});
    CHECK(format_table(t) == "# rydpol test\na,b\n1,0.123456789\n");
    t.rows.push_back({1.0});
    CHECK_THROWS_AS(t.check_rectangular(), PreconditionError);
    CHECK_THROWS_AS(format_table(t), PreconditionError);

    t.rows.pop_back();
    const auto dir = std::filesystem::temp_directory_path() / "rydpol_test_cli";
    std::filesystem::create_directories(dir);
    emit_table(t, dir / "a.csv");
    emit_table(t, dir / "b.csv");
    CHECK(slurp(dir / "a.csv") == format_table(t));
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("fnv1a reference vectors")
{
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("smoke sweep is transparent and thread-count independent")
{
    const RunConfig c = parse_config(std::string(find_recipe("smoke")->text));
    const ExecutionResult one = execute(Command::sweep, c);
    REQUIRE(one.tables.size() == 1);
    CHECK(one.exit_code == 0);
    const OutputTable& t = one.tables[0];
    CHECK(t.columns == std::vector<std::string>{"delta", "g11", "g22", "g12", "g21"});
    REQUIRE(t.rows.size() == 3);
    // Only the (1,1) pair is driven.
    for (const auto& row : t.rows)
    {
        CHECK(row[1] == 1.0);
        CHECK(row[2] == 0.0);
        CHECK(row[3] == 0.0);
        CHECK(row[4] == 0.0);
    }
    const ExecutionResult three = execute(Command::sweep, c, {.threads = 3});
    CHECK(all_text(one) == all_text(three));
    CHECK(format_table(t).find("config fnv1a64=" + fnv1a_hex(serialize_config(c))) != std::string::npos);
}

TEST_CASE("commands reject solvers they do not apply to")
{
    const RunConfig eq = parse_config(R"({"solver": "equal"})");
    CHECK_THROWS_AS(execute(Command::map, eq), ConfigError);
    CHECK_THROWS_AS(execute(Command::full_validate, eq), ConfigError);
    const RunConfig lad = parse_config(R"({"solver": "ladder2", "delta1": 1, "delta2": -1, "n": 21})");
    CHECK_THROWS_AS(execute(Command::sweep, lad), ConfigError);
}

TEST_CASE("map and converge on small grids")
{
    RunConfig c = parse_config(R"({"solver": "ladder2", "delta1": 2.5, "delta2": -2.5, "n": 41,
                                   "components": [[1, 1], [2, 1]]})");
    const ExecutionResult m = execute(Command::map, c);
    REQUIRE(m.tables.size() == 2);
    CHECK(m.tables[0].name == "map_11");
    CHECK(m.tables[1].name == "map_21");
    CHECK(m.tables[0].rows.size() == 41 * 41);
    CHECK(m.tables[0].rows.front()[2] == doctest::Approx(1.0));

    const RunConfig eq = parse_config(R"({"solver": "equal", "alpha": 4, "delta": 0.5,
                                          "hr": 0.05, "hR": 0.05})");
    const ExecutionResult cv = execute(Command::converge, eq);
    REQUIRE(cv.tables.size() == 2);
    CHECK(cv.tables[1].name == "order");
    CHECK(cv.tables[1].rows.size() == 4);
    for (const auto& row : cv.tables[1].rows)
        CHECK(std::isfinite(row[4]));
}
