#include "wsr/archive.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>

#include "json.hpp"

namespace wsr {

namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return fields;
}

Error at_line(std::size_t line, ErrorCode code, const std::string &msg) {
  return Error(code, "line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') {
    token.remove_prefix(1);
  }
  double value = 0.0;
  const auto *last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (token.empty() || ec != std::errc() || ptr != last) {
    throw at_line(line, ErrorCode::ParseError,
                  "malformed number '" + std::string(token) + "'");
  }
  return value;
}

std::ifstream open_or_throw(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  }
  return in;
}

const std::vector<double> *weights_for_case(
    const std::optional<std::vector<std::vector<double>>> &member_weights,
    std::size_t case_index, std::size_t n_cases) {
  if (!member_weights) {
    return nullptr;
  }
  if (member_weights->size() == 1) {
    return &member_weights->front();
  }
  if (member_weights->size() != n_cases) {
    throw Error(ErrorCode::BadMemberWeights,
                "member weights must have one row or one row per case (" +
                    std::to_string(n_cases) + "), got " +
                    std::to_string(member_weights->size()));
  }
  return &(*member_weights)[case_index];
}

// Re-raises a validation error with the offending input line attached.
template <typename Fn>
auto with_line(std::size_t line, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error &e) {
    throw at_line(line, e.code(), e.what());
  }
}

}  // namespace

std::vector<std::vector<double>> read_numeric_csv(std::istream &in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    std::vector<double> row;
    for (auto field : split(line, ',')) {
      row.push_back(parse_number(field, line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path &path) {
  auto in = open_or_throw(path);
  return read_numeric_csv(in);
}

std::vector<UnivariateCase> read_univariate_csv(
    std::istream &in,
    const std::optional<std::vector<std::vector<double>>> &member_weights) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n_columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto header = split(line, ',');
    if (header.front() != "y") {
      throw at_line(line_no, ErrorCode::ParseError,
                    "header must start with column 'y'");
    }
    if (header.size() < 2) {
      throw at_line(line_no, ErrorCode::ParseError,
                    "header must name at least one member column");
    }
    n_columns = header.size();
    break;
  }
  if (n_columns == 0) {
    throw Error(ErrorCode::EmptyArchive, "input has no header and no cases");
  }

  struct Row {
    std::size_t line;
    double obs;
    std::vector<double> members;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != n_columns) {
      throw at_line(line_no, ErrorCode::ParseError,
                    "expected " + std::to_string(n_columns) + " fields, got " +
                        std::to_string(fields.size()));
    }
    Row row{line_no, parse_number(fields[0], line_no), {}};
    row.members.reserve(n_columns - 1);
    for (std::size_t k = 1; k < n_columns; ++k) {
      row.members.push_back(parse_number(fields[k], line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyArchive, "input has no forecast cases");
  }

  std::vector<UnivariateCase> cases;
  cases.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto &row = rows[i];
    const auto *weights = weights_for_case(member_weights, i, rows.size());
    cases.push_back(with_line(row.line, [&] {
      UnivariateCase c{row.obs, weights ? EnsembleForecast(std::move(row.members), *weights)
                                        : EnsembleForecast(std::move(row.members))};
      validate_case(c.obs, c.fc);
      return c;
    }));
  }
  return cases;
}

std::vector<UnivariateCase> read_univariate_csv(
    const std::filesystem::path &path,
    const std::optional<std::vector<std::vector<double>>> &member_weights) {
  auto in = open_or_throw(path);
  return read_univariate_csv(in, member_weights);
}

namespace {

std::vector<double> json_numbers(const nlohmann::json &arr, std::size_t line,
                                 const char *what) {
  if (!arr.is_array()) {
    throw at_line(line, ErrorCode::ParseError, std::string(what) + " must be an array");
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto &v : arr) {
    if (!v.is_number()) {
      throw at_line(line, ErrorCode::ParseError,
                    std::string(what) + " must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::vector<MultivariateCase> read_multivariate_jsonl(
    std::istream &in,
    const std::optional<std::vector<std::vector<double>>> &member_weights) {
  struct Record {
    std::size_t line;
    std::vector<double> obs;
    std::vector<std::vector<double>> rows;
  };
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw at_line(line_no, ErrorCode::ParseError, e.what());
    }
    if (!record.is_object() || !record.contains("y") || !record.contains("dat")) {
      throw at_line(line_no, ErrorCode::ParseError,
                    "record must be an object with fields 'y' and 'dat'");
    }
    Record r{line_no, json_numbers(record["y"], line_no, "'y'"), {}};
    const auto &dat = record["dat"];
    if (!dat.is_array()) {
      throw at_line(line_no, ErrorCode::ParseError, "'dat' must be an array of rows");
    }
    for (const auto &row : dat) {
      r.rows.push_back(json_numbers(row, line_no, "'dat' row"));
    }
    if (r.obs.empty()) {
      throw at_line(line_no, ErrorCode::DimensionMismatch, "'y' is empty");
    }
    if (r.rows.size() != r.obs.size()) {
      throw at_line(line_no, ErrorCode::DimensionMismatch,
                    "'y' has " + std::to_string(r.obs.size()) + " entries but 'dat' has " +
                        std::to_string(r.rows.size()) + " rows");
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) {
    throw Error(ErrorCode::EmptyArchive, "input has no forecast cases");
  }

  std::vector<MultivariateCase> cases;
  cases.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto &r = records[i];
    const auto *weights = weights_for_case(member_weights, i, records.size());
    cases.push_back(with_line(r.line, [&] {
      auto fc = weights ? MultivariateEnsemble::from_rows(
                              r.rows, std::span<const double>(*weights))
                        : MultivariateEnsemble::from_rows(r.rows);
      MultivariateCase c{std::move(r.obs), std::move(fc)};
      validate_case(c.obs, c.fc);
      return c;
    }));
  }
  return cases;
}

std::vector<MultivariateCase> read_multivariate_jsonl(
    const std::filesystem::path &path,
    const std::optional<std::vector<std::vector<double>>> &member_weights) {
  auto in = open_or_throw(path);
  return read_multivariate_jsonl(in, member_weights);
}

}  // namespace wsr
