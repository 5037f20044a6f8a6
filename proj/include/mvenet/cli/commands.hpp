#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mvenet::cli {

enum class LambdaRule { min, one_se };

/// Settings shared by every subcommand. Defaults follow EnetConfig plus
/// 10 folds and the lambda.min rule.
struct RunConfig {
    std::string input;
    std::string subsets;
    std::string out_dir = "out";
    double alpha = 0.5;
    std::size_t nlambda = 100;
    std::optional<double> lambda_min_ratio;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    LambdaRule rule = LambdaRule::min;
    /// Significant digits in the human-facing coefficient table.
    int digits = 6;
    /// Explicit predictor set for `mlm`; empty means "use the elastic-net selection".
    std::vector<std::string> predictors;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitInference = 4;

int cmd_prep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_enet(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cv(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_mlm(const RunConfig& config, std::ostream& out, std::ostream& err);
/// prep, enet, cv and mlm in one pass.
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);

/// `***` below 0.001, `**` below 0.01, `*` below 0.05, otherwise `NS`.
std::string significance_stars(double p);

/// 17 significant digits, which parses back to exactly `v`.
std::string format_exact(double v);
/// Scientific notation with `digits` significant digits.
std::string format_scientific(double v, int digits = 6);

}  // namespace mvenet::cli
