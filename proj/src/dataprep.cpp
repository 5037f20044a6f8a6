#include "mvenet/dataprep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mvenet/errors.hpp"

namespace mvenet::dataprep {

namespace {

// Splits one logical record. Returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    char ch = 0;
    while (in.get(ch)) {
        any = true;
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
        } else if (ch == delim) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get(ch);
            break;
        } else {
            field.push_back(ch);
        }
    }
    if (quoted) throw InputError("unterminated quoted field at end of input");
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(const std::string& text) {
    std::string t = trim(text);
    if (!t.empty() && t.front() == '+') t.erase(0, 1);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::optional<std::size_t> RawTable::find(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

RawTable load_csv(std::istream& in, const CsvOptions& options) {
    RawTable table;
    std::vector<std::string> fields;
    if (!read_record(in, options.delimiter, fields)) throw InputError("empty input: no header row");

    std::set<std::string> seen;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        std::string name = trim(fields[j]);
        if (j == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);
        if (name.empty()) throw InputError(fmt::format("header column {} is empty", j + 1));
        if (!seen.insert(name).second) throw InputError(fmt::format("duplicate header '{}'", name));
        table.names.push_back(std::move(name));
    }

    const auto is_missing = [&](const std::string& cell) {
        const std::string t = trim(cell);
        return std::find(options.missing_tokens.begin(), options.missing_tokens.end(), t) !=
               options.missing_tokens.end();
    };

    std::size_t row_no = 0;
    while (read_record(in, options.delimiter, fields)) {
        ++row_no;
        if (fields.size() == 1 && trim(fields[0]).empty() && table.n_cols() > 1) continue;
        if (fields.size() != table.n_cols()) {
            throw InputError(fmt::format("row {} has {} cells, header has {}", row_no,
                                         fields.size(), table.n_cols()));
        }
        std::vector<Cell> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (is_missing(fields[j])) continue;
            row[j] = parse_real(fields[j]);
            if (!row[j]) {
                throw InputError(fmt::format("row {}, column '{}': cannot parse '{}' as a number",
                                             row_no, table.names[j], fields[j]));
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) throw InputError("input has a header but no data rows");
    return table;
}

RawTable load_csv_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(fmt::format("cannot open '{}'", path));
    return load_csv(in, options);
}

const VariableGroup* SubsetConfig::find(const std::string& group) const {
    for (const auto& g : groups)
        if (g.name == group) return &g;
    return nullptr;
}

std::vector<std::string> SubsetConfig::columns_with_role(Role role) const {
    std::vector<std::string> out;
    for (const auto& g : groups)
        if (g.role == role) out.insert(out.end(), g.columns.begin(), g.columns.end());
    return out;
}

SubsetConfig parse_subset_config(std::istream& in) {
    SubsetConfig config;
    const auto group_for = [&](const std::string& name) -> VariableGroup& {
        for (auto& g : config.groups)
            if (g.name == name) return g;
        config.groups.push_back({name, {}, std::nullopt});
        return config.groups.back();
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (!line.empty() && line.back() == '\r') line = trim(line.substr(0, line.size() - 1));
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError(fmt::format("subsets line {}: expected 'group.key = value'", line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
            throw InputError(fmt::format("subsets line {}: key '{}' is not 'group.column' or 'group.role'",
                                         line_no, key));
        }
        const std::string group = key.substr(0, dot);
        const std::string field = key.substr(dot + 1);
        if (value.empty()) throw InputError(fmt::format("subsets line {}: empty value", line_no));

        VariableGroup& g = group_for(group);
        if (field == "column") {
            if (std::find(g.columns.begin(), g.columns.end(), value) != g.columns.end()) {
                throw InputError(fmt::format("subsets line {}: column '{}' listed twice in group '{}'",
                                             line_no, value, group));
            }
            g.columns.push_back(value);
        } else if (field == "role") {
            if (value == "response") {
                g.role = Role::response;
            } else if (value == "predictor") {
                g.role = Role::predictor;
            } else {
                throw InputError(fmt::format("subsets line {}: role must be 'response' or 'predictor', got '{}'",
                                             line_no, value));
            }
        } else {
            throw InputError(fmt::format("subsets line {}: unknown field '{}'", line_no, field));
        }
    }
    return config;
}

SubsetConfig load_subset_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open '{}'", path));
    return parse_subset_config(in);
}

RawTable select_columns(const RawTable& table, const std::vector<std::string>& columns) {
    std::vector<std::size_t> index;
    std::vector<std::string> missing;
    for (const auto& name : columns) {
        if (auto j = table.find(name)) {
            index.push_back(*j);
        } else {
            missing.push_back(name);
        }
    }
    if (!missing.empty()) {
        throw InputError(fmt::format("unknown column(s): {}", fmt::join(missing, ", ")));
    }
    RawTable out;
    out.names = columns;
    out.rows.reserve(table.n_rows());
    for (const auto& row : table.rows) {
        std::vector<Cell> r;
        r.reserve(index.size());
        for (auto j : index) r.push_back(row[j]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

RawTable select_variables(const RawTable& table, const SubsetConfig& config,
                          const std::string& group) {
    const VariableGroup* g = config.find(group);
    if (g == nullptr) throw InputError(fmt::format("unknown variable group '{}'", group));
    if (g->columns.empty()) throw InputError(fmt::format("variable group '{}' lists no columns", group));
    try {
        return select_columns(table, g->columns);
    } catch (const InputError& e) {
        throw InputError(fmt::format("group '{}': {}", group, e.what()));
    }
}

linalg::Matrix to_matrix(const RawTable& table) {
    if (table.n_rows() == 0 || table.n_cols() == 0) throw InputError("empty table");
    std::vector<double> data;
    data.reserve(table.n_rows() * table.n_cols());
    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        for (std::size_t j = 0; j < table.n_cols(); ++j) {
            const Cell& c = table.rows[i][j];
            if (!c) {
                throw InputError(fmt::format("row {}, column '{}': missing value (imputation is not supported)",
                                             i + 1, table.names[j]));
            }
            data.push_back(*c);
        }
    }
    return linalg::Matrix(table.n_rows(), table.n_cols(), std::move(data));
}

StandardizedMatrix standardize(const RawTable& table) {
    if (table.n_rows() < 2) {
        throw InputError(fmt::format("standardization needs at least 2 rows, got {}", table.n_rows()));
    }
    linalg::Matrix x = to_matrix(table);
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    std::vector<double> means = linalg::col_means(x);
    std::vector<double> sds(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x(i, j) - means[j];
            ss += d * d;
        }
        sds[j] = std::sqrt(ss / static_cast<double>(n - 1));
        if (!(sds[j] > 1e-14 * std::max(1.0, std::abs(means[j])))) {
            throw InputError(fmt::format("column '{}' is constant (standard deviation 0)", table.names[j]));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) x(i, j) = (x(i, j) - means[j]) / sds[j];
    return {std::move(x), std::move(means), std::move(sds), table.names};
}

linalg::Matrix destandardize(const StandardizedMatrix& z) {
    linalg::Matrix x = z.matrix;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = x(i, j) * z.sds[j] + z.means[j];
    return x;
}

}  // namespace mvenet::dataprep
