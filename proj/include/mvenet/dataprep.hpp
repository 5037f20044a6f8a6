#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "mvenet/linalg/matrix.hpp"

namespace mvenet::dataprep {

using Cell = std::optional<double>;

/// Named columns of numeric-or-missing cells. Names are unique and
/// nonempty; every row has one cell per column.
struct RawTable {
    std::vector<std::string> names;
    std::vector<std::vector<Cell>> rows;

    std::size_t n_rows() const noexcept { return rows.size(); }
    std::size_t n_cols() const noexcept { return names.size(); }
    /// Index of `name`, or nullopt.
    std::optional<std::size_t> find(const std::string& name) const;
};

struct CsvOptions {
    char delimiter = ',';
    std::vector<std::string> missing_tokens = {"NA", ""};
};

/// Parses delimited text with a header row. Quoting follows RFC 4180
/// (double quotes, "" escapes, embedded delimiters and newlines).
/// Throws InputError on a ragged row, duplicate/empty header, unparseable
/// cell (message carries the data row number and column name) or no rows.
RawTable load_csv(std::istream& in, const CsvOptions& options = {});
RawTable load_csv_file(const std::string& path, const CsvOptions& options = {});

enum class Role { response, predictor };

struct VariableGroup {
    std::string name;
    std::vector<std::string> columns;
    std::optional<Role> role;
};

/// Named, ordered column groups. See docs/subsets.md for the file grammar.
struct SubsetConfig {
    std::vector<VariableGroup> groups;

    const VariableGroup* find(const std::string& group) const;
    /// Columns of every group tagged `role`, in file order.
    std::vector<std::string> columns_with_role(Role role) const;
};

SubsetConfig parse_subset_config(std::istream& in);
SubsetConfig load_subset_config(const std::string& path);

/// Projects `table` onto the columns of `group`, in config order. Throws
/// InputError listing every column name the table lacks.
RawTable select_variables(const RawTable& table, const SubsetConfig& config,
                          const std::string& group);
/// Same, for an explicit column list.
RawTable select_columns(const RawTable& table, const std::vector<std::string>& columns);

/// Column-wise z-scores, retaining the means and sample SDs (divisor N-1).
struct StandardizedMatrix {
    linalg::Matrix matrix;
    std::vector<double> means;
    std::vector<double> sds;
    std::vector<std::string> names;
};

/// Throws InputError on a missing cell, a constant column, or N < 2.
StandardizedMatrix standardize(const RawTable& table);

/// Inverse of standardize: x = z * sd + mean.
linalg::Matrix destandardize(const StandardizedMatrix& z);

/// Dense copy of a table without missing cells.
linalg::Matrix to_matrix(const RawTable& table);

}  // namespace mvenet::dataprep
