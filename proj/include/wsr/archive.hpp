#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <vector>

#include "wsr/diagnostics.hpp"

namespace wsr {

/// Rows of plain numbers, e.g. member weights or a VS scaling matrix.
/// Blank lines are skipped; ragged rows are allowed.
std::vector<std::vector<double>> read_numeric_csv(std::istream &in);
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path &path);

/// CSV with header `y,x1,...,xm`, one forecast case per row.
///
/// `member_weights` holds either one row applied to every case or one row
/// per case. Throws ParseError (naming the line) for malformed input and
/// EmptyArchive when there are no data rows.
std::vector<UnivariateCase> read_univariate_csv(
    std::istream &in,
    const std::optional<std::vector<std::vector<double>>> &member_weights = std::nullopt);
std::vector<UnivariateCase> read_univariate_csv(
    const std::filesystem::path &path,
    const std::optional<std::vector<std::vector<double>>> &member_weights = std::nullopt);

/// Newline-delimited JSON records `{"y": [d numbers], "dat": [d rows of m]}`.
/// `dat` is dimension-major: row i holds dimension i across members.
std::vector<MultivariateCase> read_multivariate_jsonl(
    std::istream &in,
    const std::optional<std::vector<std::vector<double>>> &member_weights = std::nullopt);
std::vector<MultivariateCase> read_multivariate_jsonl(
    const std::filesystem::path &path,
    const std::optional<std::vector<std::vector<double>>> &member_weights = std::nullopt);

}  // namespace wsr
