// rydpol: command-line driver for the two-photon propagation solvers.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "rydpol/config.hpp"
#include "rydpol/error.hpp"
#include "rydpol/recipes.hpp"
#include "rydpol/run.hpp"

namespace
{
    // "recipe:<name>" selects a bundled config; anything else is a file path.
    std::string load_config_text(const std::string& source)
    {
        constexpr std::string_view prefix = "recipe:";
        if (source.rfind(prefix, 0) == 0)
        {
            const auto name = source.substr(prefix.size());
            const rydpol::Recipe* r = rydpol::find_recipe(name);
            if (!r)
                throw rydpol::Error("no bundled recipe named '" + name + "'");
            return std::string(r->text);
        }
        std::ifstream f(source, std::ios::binary);
        if (!f)
            throw rydpol::Error("cannot read config '" + source + "'");
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    }

    int run(rydpol::Command command, const std::string& source, const std::filesystem::path& out_dir,
            unsigned threads, double grid_scale)
    {
        const rydpol::RunConfig config = rydpol::parse_config(load_config_text(source));
        const rydpol::ExecutionResult result = rydpol::execute(command, config, {threads, grid_scale});
        std::filesystem::create_directories(out_dir);
        for (const auto& table : result.tables)
        {
            const auto path = out_dir / (table.name + ".csv");
            rydpol::emit_table(table, path);
            std::cout << path.string() << '\n';
        }
        for (const auto& m : result.messages)
            std::cerr << m << '\n';
        return result.exit_code;
    }

    int list_or_write_recipes(const std::string& name, const std::filesystem::path& out_dir, bool write)
    {
        if (name.empty())
        {
            for (const auto& r : rydpol::bundled_recipes())
                std::cout << r.name << '\n';
            return 0;
        }
        const rydpol::Recipe* r = rydpol::find_recipe(name);
        if (!r)
            throw rydpol::Error("no bundled recipe named '" + name + "'");
        if (!write)
        {
            std::cout << r->text;
            return 0;
        }
        std::filesystem::create_directories(out_dir);
        const auto path = out_dir / (std::string(r->name) + ".json");
        std::ofstream(path, std::ios::binary) << r->text;
        std::cout << path.string() << '\n';
        return 0;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"Two-photon propagation of spinor slow light in Rydberg EIT media"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rydpol::library_version());

    std::string source;
    std::string out_dir = ".";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    double grid_scale = 1.0;

    auto add_run = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("config", source, "JSON config path, or recipe:<name> for a bundled one")->required();
        sub->add_option("--out-dir", out_dir, "Directory for the CSV outputs")->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
        sub->add_option("--grid-scale", grid_scale, "Resolution multiplier applied to every grid step")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        return sub;
    };
    CLI::App* sweep = add_run("sweep", "G2(0) detuning sweep with the equal-detuning solver");
    CLI::App* map = add_run("map", "|Phi_EE|^2 maps over (z, z') from the ladder or full solver");
    CLI::App* validate = add_run("full-validate", "Residual of Phi_EE = -(Phi^Es + Phi^sE)/2 in the full solution");
    CLI::App* converge = add_run("converge", "Three-level refinement study with observed order");

    std::string recipe_name;
    bool write_recipe = false;
    CLI::App* recipes = app.add_subcommand("recipes", "List bundled configs, or print/write one");
    recipes->add_option("name", recipe_name, "Recipe to print");
    recipes->add_flag("--write", write_recipe, "Write the recipe into --out-dir instead of printing it");
    recipes->add_option("--out-dir", out_dir, "Directory for --write");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (recipes->parsed())
            return list_or_write_recipes(recipe_name, out_dir, write_recipe);
        const rydpol::Command command = sweep->parsed()      ? rydpol::Command::sweep
                                        : map->parsed()      ? rydpol::Command::map
                                        : validate->parsed() ? rydpol::Command::full_validate
                                        : converge->parsed() ? rydpol::Command::converge
                                                             : throw rydpol::Error("no command given");
        return run(command, source, out_dir, threads, grid_scale);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
