#include "mvenet/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mvenet/cv.hpp"
#include "mvenet/dataprep.hpp"
#include "mvenet/enet.hpp"
#include "mvenet/errors.hpp"
#include "mvenet/inference.hpp"

namespace mvenet::cli {

namespace fs = std::filesystem;

namespace {

using linalg::Matrix;

struct Prepared {
    dataprep::RawTable table;
    dataprep::SubsetConfig subsets;
    dataprep::StandardizedMatrix x;
    dataprep::StandardizedMatrix y;
};

struct Selection {
    enet::EnetPath path;
    cv::CvResult cv;
    std::size_t index = 0;
    std::vector<std::string> kept;
};

class TsvWriter {
public:
    explicit TsvWriter(const fs::path& file) : file_(file), out_(file, std::ios::binary) {
        if (!out_) throw InputError(fmt::format("cannot write '{}'", file.string()));
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c > 0) out_ << '\t';
            out_ << cells[c];
        }
        out_ << '\n';
    }

    void line(const std::string& text) { out_ << text << '\n'; }

private:
    fs::path file_;
    std::ofstream out_;
};

// Aligned plain-text rendering of a small table.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (const auto& r : rows) {
        std::string text;
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c == 0) {
                text += fmt::format("{:<{}}", r[c], width[c]);
            } else {
                text += fmt::format("  {:>{}}", r[c], width[c]);
            }
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out << text << '\n';
    }
}

enet::EnetConfig enet_config(const RunConfig& config) {
    enet::EnetConfig ec;
    ec.alpha = config.alpha;
    ec.nlambda = config.nlambda;
    ec.lambda_min_ratio = config.lambda_min_ratio;
    return ec;
}

fs::path out_dir(const RunConfig& config) {
    fs::path dir(config.out_dir);
    fs::create_directories(dir);
    return dir;
}

Prepared prepare(const RunConfig& config) {
    if (config.input.empty()) throw InputError("--input is required");
    if (config.subsets.empty()) throw InputError("--subsets is required");
    auto table = dataprep::load_csv_file(config.input);
    auto subsets = dataprep::load_subset_config(config.subsets);
    const auto predictors = subsets.columns_with_role(dataprep::Role::predictor);
    const auto responses = subsets.columns_with_role(dataprep::Role::response);
    if (predictors.empty()) throw InputError("subset config tags no group with 'role = predictor'");
    if (responses.empty()) throw InputError("subset config tags no group with 'role = response'");
    auto x = dataprep::standardize(dataprep::select_columns(table, predictors));
    auto y = dataprep::standardize(dataprep::select_columns(table, responses));
    return {std::move(table), std::move(subsets), std::move(x), std::move(y)};
}

Selection select(const Prepared& prep, const RunConfig& config) {
    const enet::EnetConfig ec = enet_config(config);
    Selection sel;
    sel.path = enet::fit_mgaussian_path(prep.x.matrix, prep.y.matrix, ec);
    const auto folds = cv::make_folds(prep.x.matrix.rows(), config.folds, config.seed);
    sel.cv = cv::cross_validate(prep.x.matrix, prep.y.matrix, ec, folds);
    sel.index = config.rule == LambdaRule::min ? sel.cv.index_min : sel.cv.index_1se;
    const Matrix& b = sel.path.coefs[sel.index];
    for (std::size_t j = 0; j < b.rows(); ++j) {
        const auto r = b.row(j);
        if (std::any_of(r.begin(), r.end(), [](double v) { return v != 0.0; })) {
            sel.kept.push_back(prep.x.names[j]);
        }
    }
    return sel;
}

void write_prep(const RunConfig& config, const dataprep::RawTable& table,
                const dataprep::SubsetConfig& subsets, std::ostream& out) {
    const fs::path dir = out_dir(config);
    for (const auto& group : subsets.groups) {
        if (group.columns.empty()) continue;
        const auto z = dataprep::standardize(dataprep::select_variables(table, subsets, group.name));
        TsvWriter data(dir / (group.name + ".tsv"));
        data.row(z.names);
        std::vector<std::string> cells(z.names.size());
        for (std::size_t i = 0; i < z.matrix.rows(); ++i) {
            for (std::size_t j = 0; j < z.matrix.cols(); ++j) cells[j] = format_exact(z.matrix(i, j));
            data.row(cells);
        }
        TsvWriter scale(dir / (group.name + ".scale.tsv"));
        scale.row({"column", "mean", "sd"});
        for (std::size_t j = 0; j < z.names.size(); ++j) {
            scale.row({z.names[j], format_exact(z.means[j]), format_exact(z.sds[j])});
        }
        fmt::print(out, "{}: {} rows x {} columns standardized -> {}\n", group.name, z.matrix.rows(),
                   z.matrix.cols(), (dir / (group.name + ".tsv")).string());
    }
}

void write_path(const RunConfig& config, const Prepared& prep, const Selection& sel, std::ostream& out) {
    const fs::path dir = out_dir(config);
    {
        TsvWriter path(dir / "path.tsv");
        path.row({"lambda", "dev_ratio", "nonzero"});
        for (std::size_t l = 0; l < sel.path.size(); ++l) {
            path.row({format_exact(sel.path.lambdas[l]), format_exact(sel.path.dev_ratio[l]),
                      std::to_string(sel.path.nonzero[l])});
        }
    }

    const double lambda = sel.path.lambdas[sel.index];
    const std::string name = fmt::format("coef_{:.6g}.tsv", lambda);
    TsvWriter coef(dir / name);
    std::vector<std::string> header{"predictor"};
    header.insert(header.end(), prep.y.names.begin(), prep.y.names.end());
    coef.row(header);
    std::vector<std::vector<std::string>> table{header};
    const Matrix& b = sel.path.coefs[sel.index];
    for (std::size_t j = 0; j < b.rows(); ++j) {
        const auto r = b.row(j);
        const bool removed = std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; });
        std::vector<std::string> cells{prep.x.names[j]};
        for (double v : r) cells.push_back(removed ? "removed" : format_scientific(v, config.digits));
        coef.row(cells);
        table.push_back(std::move(cells));
    }
    fmt::print(out, "elastic net (alpha={}) coefficients at lambda={:.6g} [{}], path index {} of {}\n",
               config.alpha, lambda, config.rule == LambdaRule::min ? "lambda.min" : "lambda.1se",
               sel.index, sel.path.size());
    print_table(out, table);
    fmt::print(out, "wrote {} and {}\n", (dir / "path.tsv").string(), (dir / name).string());
}

void write_cv(const RunConfig& config, const Selection& sel, std::ostream& out) {
    const fs::path dir = out_dir(config);
    TsvWriter tsv(dir / "cv.tsv");
    tsv.row({"lambda", "mean_error", "se_error"});
    for (std::size_t l = 0; l < sel.cv.lambdas.size(); ++l) {
        tsv.row({format_exact(sel.cv.lambdas[l]), format_exact(sel.cv.mean_error[l]),
                 format_exact(sel.cv.se_error[l])});
    }
    fmt::print(out, "lambda.min={}\n", format_exact(sel.cv.lambda_min));
    fmt::print(out, "lambda.1se={}\n", format_exact(sel.cv.lambda_1se));
}

void write_mlm(const RunConfig& config, const Prepared& prep, const std::vector<std::string>& predictors,
               std::ostream& out) {
    if (predictors.empty()) throw InferenceError("no predictors left for the multivariate regression");
    std::vector<std::size_t> index;
    for (const auto& name : predictors) {
        const auto it = std::find(prep.x.names.begin(), prep.x.names.end(), name);
        if (it == prep.x.names.end()) throw InputError(fmt::format("unknown predictor '{}'", name));
        index.push_back(static_cast<std::size_t>(it - prep.x.names.begin()));
    }
    const Matrix x = prep.x.matrix.select_cols(index);
    const auto fit = inference::fit_mlm(x, prep.y.matrix, predictors, prep.y.names);
    const fs::path dir = out_dir(config);

    const auto manova = inference::manova_table(fit);
    {
        TsvWriter tsv(dir / "manova.tsv");
        tsv.row({"term", "df", "pillai", "approx_f", "num_df", "den_df", "p", "stars"});
        std::vector<std::vector<std::string>> table{{"term", "df", "Pillai", "approx F", "num df", "den df", "p", ""}};
        for (const auto& r : manova) {
            const std::string stars = significance_stars(r.p_value);
            tsv.row({r.term, std::to_string(r.df), format_exact(r.pillai), format_exact(r.approx_f),
                     std::to_string(r.num_df), std::to_string(r.den_df), format_exact(r.p_value), stars});
            table.push_back({r.term, std::to_string(r.df), fmt::format("{:.4f}", r.pillai),
                             fmt::format("{:.4f}", r.approx_f), std::to_string(r.num_df),
                             std::to_string(r.den_df), fmt::format("{:.4g}", r.p_value.value), stars});
        }
        out << "multivariate multiple regression (Pillai)\n";
        print_table(out, table);
    }

    for (std::size_t k = 0; k < fit.n_responses(); ++k) {
        const auto s = inference::univariate_summary(fit, k);
        TsvWriter tsv(dir / ("uni_" + s.response + ".tsv"));
        tsv.row({"term", "estimate", "std_error", "t", "p", "stars"});
        std::vector<std::vector<std::string>> table{{"term", "estimate", "std error", "t", "p", ""}};
        for (const auto& c : s.coefficients) {
            const std::string stars = significance_stars(c.p_value);
            tsv.row({c.term, format_exact(c.estimate), format_exact(c.std_error), format_exact(c.t),
                     format_exact(c.p_value), stars});
            table.push_back({c.term, fmt::format("{:.4g}", c.estimate), fmt::format("{:.4g}", c.std_error),
                             fmt::format("{:.3f}", c.t), fmt::format("{:.4g}", c.p_value.value), stars});
        }
        tsv.line(fmt::format("F({},{})={} R2={} R2adj={}", s.df1, s.df2, format_exact(s.f_stat),
                             format_exact(s.r2), format_exact(s.r2_adj)));
        fmt::print(out, "\nfollow-up: {}\n", s.response);
        print_table(out, table);
        fmt::print(out, "F({},{}) = {:.4g}, p = {:.3g}; R2 = {:.4f}, R2adj = {:.4f}; residual SE = {:.4f}\n",
                   s.df1, s.df2, s.f_stat, s.f_p_value.value, s.r2, s.r2_adj, s.sigma);
    }

    {
        TsvWriter tsv(dir / "vif.tsv");
        tsv.row({"predictor", "r2_aux", "vif"});
        out << '\n';
        if (x.cols() >= 2) {
            const auto report = inference::vif(x, predictors);
            std::vector<std::vector<std::string>> table{{"predictor", "vif"}};
            for (const auto& e : report.entries) {
                tsv.row({e.name, format_exact(e.r2_aux), format_exact(e.vif)});
                table.push_back({e.name, fmt::format("{:.3f}", e.vif)});
            }
            print_table(out, table);
        } else {
            out << "vif: fewer than two predictors, nothing to report\n";
        }
    }

    {
        TsvWriter tsv(dir / "residuals.tsv");
        tsv.row({"response", "fitted", "residual"});
        for (const auto& r : inference::residual_diagnostics(fit)) {
            tsv.row({r.response, format_exact(r.fitted), format_exact(r.residual)});
        }
    }

    if (fit.n_responses() >= 2) {
        const auto a = prep.y.matrix.col(0);
        const auto b = prep.y.matrix.col(1);
        const auto pr = inference::pearson(a, b);
        fmt::print(out, "\npearson r={} p={}\n", format_exact(pr.r), format_exact(pr.p_value));
    }
}

int guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const ConvergenceError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitSolver;
    } catch (const CvError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitSolver;
    } catch (const RankDeficient& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitInference;
    } catch (const InferenceError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitInference;
    } catch (const NotPositiveDefinite& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitInference;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitInput;
    }
}

}  // namespace

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "NS";
}

std::string format_exact(double v) { return fmt::format("{:.17g}", v); }

std::string format_scientific(double v, int digits) {
    return fmt::format("{:.{}e}", v, std::max(digits, 1) - 1);
}

int cmd_prep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.input.empty()) throw InputError("--input is required");
        if (config.subsets.empty()) throw InputError("--subsets is required");
        const auto table = dataprep::load_csv_file(config.input);
        const auto subsets = dataprep::load_subset_config(config.subsets);
        write_prep(config, table, subsets, out);
    });
}

int cmd_enet(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Prepared prep = prepare(config);
        const Selection sel = select(prep, config);
        write_path(config, prep, sel, out);
    });
}

int cmd_cv(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Prepared prep = prepare(config);
        const Selection sel = select(prep, config);
        write_cv(config, sel, out);
    });
}

int cmd_mlm(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Prepared prep = prepare(config);
        std::vector<std::string> predictors = config.predictors;
        if (predictors.empty()) predictors = select(prep, config).kept;
        write_mlm(config, prep, predictors, out);
    });
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Prepared prep = prepare(config);
        write_prep(config, prep.table, prep.subsets, out);
        out << '\n';
        const Selection sel = select(prep, config);
        write_path(config, prep, sel, out);
        out << '\n';
        write_cv(config, sel, out);
        out << '\n';
        write_mlm(config, prep, config.predictors.empty() ? sel.kept : config.predictors, out);
    });
}

}  // namespace mvenet::cli
