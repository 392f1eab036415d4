#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "bbfs/runner.hpp"
#include "bbfs/spaces.hpp"

using namespace bbfs;

namespace {

std::string env_output_dir() {
    const char* v = std::getenv("BBFS_OUTPUT_DIR");
    return v ? std::string(v) : std::string();
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool dump_effective, bool quiet) {
    ConfigNode cfg;
    try {
        cfg = ConfigNode::parse_file(config_path);
    } catch (const ConfigParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    Experiment exp;
    try {
        exp = build_experiment(cfg);
    } catch (const ConfigParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    }
    try {
        RunResult result = run_experiment(exp);
        OutputPaths paths = output_paths(cfg, env_output_dir());
        if (!out_dir.empty()) paths.dir = out_dir;
        if (dump_effective && paths.effective_file.empty())
            paths.effective_file = "effective.conf";
        write_outputs(result, paths);
        if (!quiet) {
            std::cout << result.table_text;
            std::cout << (result.pass ? "ALL CHECKS PASSED" : "CHECK FAILURES") << "\n";
        }
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "run error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_norm_eval(const std::string& space_name, const std::string& expr_text,
                  const std::string& config_path) {
    ConfigNode cfg;
    try {
        cfg = config_path.empty() ? ConfigNode() : ConfigNode::parse_file(config_path);
    } catch (const ConfigParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    try {
        if (!cfg.has("seed")) cfg.set_number("seed", 0);
        if (!cfg.has("grid")) {
            ConfigNode& g = cfg.add_block("grid");
            g.set_number("n", 1);
            std::vector<ConfigValue> bounds{ConfigValue{-4.0}, ConfigValue{4.0}};
            g.entries.emplace_back("box", ConfigValue{std::move(bounds)});
            g.set_number("L", 8);
        }
        Experiment exp = build_experiment(cfg);
        auto it = exp.spaces.find(space_name);
        if (it == exp.spaces.end()) {
            std::cerr << "validation error: unknown space '" << space_name << "'\n";
            return 3;
        }
        Expression e = Expression::parse(expr_text);
        GridFunction f = sample(exp.grid, [&](Point x) { return e(x); });
        double value = space_norm(it->second, f, exp.harness.norm_opts);
        std::cout << "space   " << it->second.describe() << "\n";
        std::cout << "grid    n=" << exp.grid.dim() << " L=" << exp.grid.level()
                  << " box=[" << exp.grid.box().lo[0] << "," << exp.grid.box().hi[0]
                  << "]\n";
        std::cout << "expr    " << expr_text << "\n";
        std::cout.precision(12);
        std::cout << "norm    " << value << "\n";
        return 0;
    } catch (const ConfigValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_dump(const std::string& config_path) {
    try {
        ConfigNode cfg = ConfigNode::parse_file(config_path);
        Experiment exp = build_experiment(cfg);
        std::cout << exp.effective.serialize();
        return 0;
    } catch (const ConfigParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ball Banach function space verification toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, space_name, expr_text;
    bool dump_effective = false, quiet = false;

    auto* run = app.add_subcommand("run", "run the checks from an experiment config");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config/env)");
    run->add_flag("--dump-effective-config", dump_effective,
                  "also write the effective config beside the reports");
    run->add_flag("--quiet", quiet, "suppress the text table on stdout");

    auto* ls = app.add_subcommand("list-spaces", "list registered space tags");
    auto* lc = app.add_subcommand("list-checks", "list harness checks");

    auto* ne = app.add_subcommand("norm-eval", "evaluate a space norm on an expression");
    ne->add_option("space", space_name, "space name from the config")->required();
    ne->add_option("expr", expr_text, "expression in x1 [, x2]")->required();
    ne->add_option("--config", config_path, "experiment config file");

    auto* de = app.add_subcommand("dump-effective-config",
                                  "print the config with defaults filled in");
    de->add_option("config", config_path, "experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, dump_effective, quiet);
    if (ls->parsed()) {
        std::cout << list_spaces_text();
        return 0;
    }
    if (lc->parsed()) {
        std::cout << list_checks_text();
        return 0;
    }
    if (ne->parsed()) return cmd_norm_eval(space_name, expr_text, config_path);
    if (de->parsed()) return cmd_dump(config_path);
    return 0;
}
