// Command-line front end: prep, enet, cv, mlm and report subcommands.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mvenet/cli/commands.hpp"

using mvenet::cli::LambdaRule;
using mvenet::cli::RunConfig;

namespace {

void add_common(CLI::App& cmd, RunConfig& config, std::string& rule) {
    cmd.add_option("--input", config.input, "CSV data file (header row first)")->required();
    cmd.add_option("--subsets", config.subsets, "variable subset file")->required();
    cmd.add_option("--out", config.out_dir, "output directory")->capture_default_str();
    cmd.add_option("--alpha", config.alpha, "elastic-net mixing parameter")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--nlambda", config.nlambda, "number of lambda values")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    cmd.add_option("--lambda-min-ratio", config.lambda_min_ratio,
                   "smallest lambda as a fraction of lambda_max (default 1e-4, or 1e-2 when N <= p)");
    cmd.add_option("--folds", config.folds, "cross-validation folds")->capture_default_str();
    cmd.add_option("--seed", config.seed, "fold assignment seed")->capture_default_str();
    cmd.add_option("--rule", rule, "lambda selection rule")
        ->check(CLI::IsMember({"min", "1se"}))
        ->capture_default_str();
    cmd.add_option("--digits", config.digits, "significant digits in the coefficient table")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elastic-net selection and multivariate regression reports"};
    app.require_subcommand(1);

    RunConfig config;
    std::string rule = "min";
    std::string predictors;

    std::map<std::string, int (*)(const RunConfig&, std::ostream&, std::ostream&)> commands{
        {"prep", mvenet::cli::cmd_prep},
        {"enet", mvenet::cli::cmd_enet},
        {"cv", mvenet::cli::cmd_cv},
        {"mlm", mvenet::cli::cmd_mlm},
        {"report", mvenet::cli::cmd_report},
    };
    const std::map<std::string, std::string> help{
        {"prep", "standardize each variable group and write <group>.tsv plus <group>.scale.tsv"},
        {"enet", "fit the elastic-net path; write path.tsv and coef_<lambda>.tsv"},
        {"cv", "cross-validate the lambda path; write cv.tsv"},
        {"mlm", "multivariate regression tables, VIF, residuals and the response correlation"},
        {"report", "run prep, enet, cv and mlm in sequence"},
    };
    for (const auto& [name, fn] : commands) {
        CLI::App* cmd = app.add_subcommand(name, help.at(name));
        add_common(*cmd, config, rule);
        if (name == "mlm" || name == "report") {
            cmd->add_option("--predictors", predictors,
                            "comma-separated predictor list (default: elastic-net selection)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return mvenet::cli::kExitInput;
    }

    config.rule = rule == "1se" ? LambdaRule::one_se : LambdaRule::min;
    if (!predictors.empty()) {
        std::string item;
        for (char ch : predictors + ",") {
            if (ch == ',') {
                if (!item.empty()) config.predictors.push_back(item);
                item.clear();
            } else {
                item.push_back(ch);
            }
        }
    }

    for (const auto& [name, fn] : commands) {
        if (app.got_subcommand(name)) return fn(config, std::cout, std::cerr);
    }
    return mvenet::cli::kExitInput;
}
