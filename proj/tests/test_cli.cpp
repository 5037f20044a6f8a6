#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mvenet/cli/commands.hpp"
#include "mvenet/cv.hpp"
#include "mvenet/enet.hpp"
#include "support/oracles.hpp"

namespace cli = mvenet::cli;
namespace fs = std::filesystem;
using mvenet::linalg::Matrix;

namespace {

const fs::path kData = MVENET_DATA_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

using Command = int (*)(const cli::RunConfig&, std::ostream&, std::ostream&);

Run run(Command cmd, const cli::RunConfig& cfg) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cmd(cfg, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mvenet_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::vector<std::vector<std::string>> read_tsv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, '\t');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

cli::RunConfig demo(const fs::path& out) {
    cli::RunConfig c;
    c.input = (kData / "demo.csv").string();
    c.subsets = (kData / "demo.subsets").string();
    c.out_dir = out.string();
    return c;
}

// Small numeric table with named columns, written as CSV.
void write_csv(const fs::path& p, const std::vector<std::string>& names, const Matrix& m) {
    std::ostringstream s;
    for (std::size_t j = 0; j < names.size(); ++j) s << (j ? "," : "") << names[j];
    s << '\n';
    s.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) s << (j ? "," : "") << m(i, j);
        s << '\n';
    }
    write(p, s.str());
}

const char* kSmallSubsets = "out.column = y1\nout.column = y2\nout.role = response\nin.column = a\nin.column = b\n"
                            "in.role = predictor\n";

}  // namespace

TEST_CASE("significance stars and number formats") {
    CHECK(cli::significance_stars(0.0005) == "***");
    CHECK(cli::significance_stars(0.005) == "**");
    CHECK(cli::significance_stars(0.03) == "*");
    CHECK(cli::significance_stars(0.2) == "NS");
    CHECK(cli::significance_stars(0.001) == "**");
    CHECK(cli::significance_stars(0.05) == "NS");

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(u(rng), static_cast<int>(rng() % 200) - 100);
        CHECK(std::stod(cli::format_exact(v)) == v);
        CHECK(std::abs(std::stod(cli::format_scientific(v)) - v) <= 5e-6 * std::abs(v));
    }
    CHECK(cli::format_scientific(-0.0328979, 6) == "-3.28979e-02");
}

TEST_CASE("prep writes one table and one scale file per group") {
    const auto dir = scratch("prep");
    const auto r = run(cli::cmd_prep, demo(dir));
    REQUIRE(r.code == cli::kExitOk);
    for (const char* g : {"health", "demographic", "food"}) {
        CHECK(fs::exists(dir / (std::string(g) + ".tsv")));
        CHECK(fs::exists(dir / (std::string(g) + ".scale.tsv")));
    }
    const auto health = read_tsv(dir / "health.tsv");
    CHECK(health.size() == 87);
    CHECK(health[0] == std::vector<std::string>{"yll_communicable", "yll_noncommunicable"});
    const auto scale = read_tsv(dir / "health.scale.tsv");
    CHECK(scale[0] == std::vector<std::string>{"column", "mean", "sd"});
    CHECK(slurp(dir / "food.tsv").find('\r') == std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
    const auto dir = scratch("input_errors");
    write(dir / "t.csv", "y1,y2,a,b\n1,2,3,4\n2,1,5,4\n3,5,1,4\n4,3,2,4\n");
    write(dir / "missing.subsets", "r.column = y1\nr.role = response\np.column = a\np.column = zz\np.role = predictor\n");
    write(dir / "ok.subsets", kSmallSubsets);

    auto cfg = demo(dir);
    cfg.input = (dir / "t.csv").string();
    cfg.subsets = (dir / "missing.subsets").string();
    auto r = run(cli::cmd_prep, cfg);
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("zz") != std::string::npos);

    cfg.subsets = (dir / "ok.subsets").string();
    r = run(cli::cmd_prep, cfg);
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("'b'") != std::string::npos);

    write(dir / "bad.csv", "y1,y2,a,b\n1,2,3,4\n2,x,5,4\n");
    cfg.input = (dir / "bad.csv").string();
    r = run(cli::cmd_enet, cfg);
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("row 2") != std::string::npos);

    cfg.input = (dir / "nope.csv").string();
    CHECK(run(cli::cmd_cv, cfg).code == cli::kExitInput);
}

TEST_CASE("enet path and coefficient table") {
    const auto dir = scratch("enet");
    REQUIRE(run(cli::cmd_prep, demo(dir)).code == cli::kExitOk);
    const auto r = run(cli::cmd_enet, demo(dir));
    REQUIRE(r.code == cli::kExitOk);
    const auto path = read_tsv(dir / "path.tsv");
    CHECK(path[0] == std::vector<std::string>{"lambda", "dev_ratio", "nonzero"});
    CHECK(path.size() == 101);
    for (std::size_t i = 2; i < path.size(); ++i) CHECK(std::stod(path[i][1]) >= std::stod(path[i - 1][1]) - 1e-8);

    // The grid head is lambda_max of the standardized data.
    const auto x = read_tsv(dir / "demographic.tsv");
    const auto y = read_tsv(dir / "health.tsv");
    REQUIRE(x.size() == 87);
    REQUIRE(y.size() == 87);
    Matrix xm(86, 6);
    Matrix ym(86, 2);
    for (std::size_t i = 0; i < 86; ++i) {
        for (std::size_t j = 0; j < 6; ++j) xm(i, j) = std::stod(x[i + 1][j]);
        for (std::size_t j = 0; j < 2; ++j) ym(i, j) = std::stod(y[i + 1][j]);
    }
    const double lmax = mvenet::enet::compute_lambda_max(xm, oracle::center(ym), 0.5);
    CHECK(std::abs(std::stod(path[1][0]) - lmax) <= 1e-12 * lmax);
    CHECK(std::stod(path[1][2]) == 0.0);

    std::string coef_file;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename().string().rfind("coef_", 0) == 0) coef_file = e.path().string();
    REQUIRE_FALSE(coef_file.empty());
    const auto coef = read_tsv(coef_file);
    CHECK(coef[0] == std::vector<std::string>{"predictor", "yll_communicable", "yll_noncommunicable"});
    bool water_removed = false;
    for (const auto& row : coef)
        if (row[0] == "water_access") water_removed = row[1] == "removed" && row[2] == "removed";
    CHECK(water_removed);

    auto short_cfg = demo(scratch("enet_digits"));
    short_cfg.digits = 3;
    const auto rs = run(cli::cmd_enet, short_cfg);
    REQUIRE(rs.code == cli::kExitOk);
    CHECK(rs.out.find("3.50e-01") != std::string::npos);
}

TEST_CASE("cv output is deterministic and the rules are ordered") {
    const auto a = scratch("cv_a");
    const auto b = scratch("cv_b");
    auto cfg = demo(a);
    const auto ra = run(cli::cmd_cv, cfg);
    cfg.out_dir = b.string();
    const auto rb = run(cli::cmd_cv, cfg);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(slurp(a / "cv.tsv") == slurp(b / "cv.tsv"));
    CHECK(ra.out == rb.out);

    auto grab = [](const std::string& text, const std::string& key) {
        const auto at = text.find(key + "=");
        REQUIRE(at != std::string::npos);
        return std::stod(text.substr(at + key.size() + 1));
    };
    CHECK(grab(ra.out, "lambda.1se") >= grab(ra.out, "lambda.min"));

    cfg.rule = cli::LambdaRule::one_se;
    cfg.out_dir = scratch("cv_1se").string();
    const auto r1 = run(cli::cmd_enet, cfg);
    REQUIRE(r1.code == 0);
    CHECK(r1.out.find("lambda.1se") != std::string::npos);
}

TEST_CASE("cv on a 12-row table matches a hand-rolled refit") {
    const auto dir = scratch("cv_small");
    std::mt19937_64 rng(12);
    Matrix raw = oracle::random_matrix(rng, 12, 4, 3.0);
    for (std::size_t i = 0; i < 12; ++i) {
        raw(i, 0) += 2.0 * raw(i, 2) - raw(i, 3);
        raw(i, 1) -= raw(i, 3);
    }
    write_csv(dir / "small.csv", {"y1", "y2", "a", "b"}, raw);
    write(dir / "small.subsets", kSmallSubsets);
    cli::RunConfig cfg;
    cfg.input = (dir / "small.csv").string();
    cfg.subsets = (dir / "small.subsets").string();
    cfg.out_dir = dir.string();
    cfg.folds = 3;
    cfg.seed = 5;
    cfg.nlambda = 15;
    REQUIRE(run(cli::cmd_cv, cfg).code == 0);

    Matrix y(12, 2);
    Matrix x(12, 2);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            y(i, j) = raw(i, j);
            x(i, j) = raw(i, j + 2);
        }
    x = oracle::zscore(x);
    y = oracle::zscore(y);
    mvenet::enet::EnetConfig ec;
    ec.nlambda = 15;
    ec.lambdas = mvenet::enet::lambda_grid(x, y, ec);
    const auto folds = mvenet::cv::make_folds(12, 3, 5);
    std::vector<double> mean(15, 0.0);
    for (std::size_t f = 0; f < 3; ++f) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < 12; ++i) (folds.fold[i] == f ? test : train).push_back(i);
        const auto path = mvenet::enet::fit_mgaussian_path(x.select_rows(train), y.select_rows(train), ec);
        for (std::size_t l = 0; l < 15; ++l) {
            const Matrix pred = path.predict(l, x.select_rows(test));
            double sse = 0.0;
            for (std::size_t t = 0; t < test.size(); ++t)
                for (std::size_t c = 0; c < 2; ++c) sse += std::pow(y(test[t], c) - pred(t, c), 2);
            mean[l] += sse / static_cast<double>(test.size()) / 3.0;
        }
    }
    const auto table = read_tsv(dir / "cv.tsv");
    REQUIRE(table.size() == 16);
    for (std::size_t l = 0; l < 15; ++l) {
        CHECK(std::abs(std::stod(table[l + 1][0]) - ec.lambdas[l]) <= 1e-12 * ec.lambdas[l]);
        CHECK(std::abs(std::stod(table[l + 1][1]) - mean[l]) <= 1e-10);
    }
}

TEST_CASE("cv failure exits with code 3") {
    const auto dir = scratch("cv_fail");
    const auto folds = mvenet::cv::make_folds(12, 3, 1);
    std::mt19937_64 rng(3);
    Matrix raw = oracle::random_matrix(rng, 12, 4);
    double v = 0.0;
    for (std::size_t i = 0; i < 12; ++i) raw(i, 2) = folds.fold[i] == 0 ? (v += 1.0) : 0.0;
    write_csv(dir / "f.csv", {"y1", "y2", "a", "b"}, raw);
    write(dir / "f.subsets", kSmallSubsets);
    cli::RunConfig cfg;
    cfg.input = (dir / "f.csv").string();
    cfg.subsets = (dir / "f.subsets").string();
    cfg.out_dir = dir.string();
    cfg.folds = 3;
    cfg.seed = 1;
    const auto r = run(cli::cmd_cv, cfg);
    CHECK(r.code == cli::kExitSolver);
    CHECK(r.err.find("fold") != std::string::npos);
}

TEST_CASE("mlm report") {
    const auto dir = scratch("mlm");
    const auto r = run(cli::cmd_mlm, demo(dir));
    REQUIRE(r.code == cli::kExitOk);
    const auto at = r.out.find("pearson r=");
    REQUIRE(at != std::string::npos);
    CHECK(std::stod(r.out.substr(at + 10)) < -0.9);

    const auto resid = read_tsv(dir / "residuals.tsv");
    CHECK(resid.size() == 86 * 2 + 1);
    CHECK(resid[0] == std::vector<std::string>{"response", "fitted", "residual"});
    const auto manova = read_tsv(dir / "manova.tsv");
    CHECK(manova[0] == std::vector<std::string>{"term", "df", "pillai", "approx_f", "num_df", "den_df", "p", "stars"});
    for (std::size_t i = 1; i < manova.size(); ++i) {
        CHECK(manova[i][0] != "water_access");
        CHECK(manova[i][4] == "2");
        CHECK(manova[i][7] == cli::significance_stars(std::stod(manova[i][6])));
    }
    const auto uni = slurp(dir / "uni_yll_communicable.tsv");
    CHECK(uni.find("\nF(5,80)=") != std::string::npos);
    CHECK(uni.find(" R2adj=") != std::string::npos);
    CHECK(fs::exists(dir / "vif.tsv"));
}

TEST_CASE("collinear predictors exit with code 4") {
    const auto dir = scratch("mlm_rank");
    std::mt19937_64 rng(9);
    Matrix raw = oracle::random_matrix(rng, 20, 4);
    for (std::size_t i = 0; i < 20; ++i) raw(i, 3) = -2.0 * raw(i, 2) + 1.0;
    write_csv(dir / "c.csv", {"y1", "y2", "a", "b"}, raw);
    write(dir / "c.subsets", kSmallSubsets);
    cli::RunConfig cfg;
    cfg.input = (dir / "c.csv").string();
    cfg.subsets = (dir / "c.subsets").string();
    cfg.out_dir = dir.string();
    cfg.predictors = {"a", "b"};
    const auto r = run(cli::cmd_mlm, cfg);
    CHECK(r.code == cli::kExitInference);
    CHECK(r.err.find("'b'") != std::string::npos);

    cfg.predictors = {"a", "q"};
    CHECK(run(cli::cmd_mlm, cfg).code == cli::kExitInput);
}

TEST_CASE("report is byte-identical across runs") {
    const auto a = scratch("report_a");
    const auto b = scratch("report_b");
    const auto ra = run(cli::cmd_report, demo(a));
    const auto rb = run(cli::cmd_report, demo(b));
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const auto other = b / e.path().filename();
        REQUIRE(fs::exists(other));
        CHECK_MESSAGE(slurp(e.path()) == slurp(other), e.path().filename().string());
        ++files;
    }
    CHECK(files == 14);
    CHECK(ra.out.size() == rb.out.size());
}
