#include "repnet/statkit.hpp"

#include <map>

#include "repnet/csv.hpp"
#include "repnet/error.hpp"
#include "repnet/special_functions.hpp"

namespace repnet {

ChiSquaredResult chi_squared_independence(const ContingencyTable& table) {
  const auto& t = table.counts;
  const std::size_t rows = t.size();
  if (rows < 2) throw ValidationError("contingency table needs at least two rows");
  const std::size_t cols = t.front().size();
  if (cols < 2) throw ValidationError("contingency table needs at least two columns");

  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (t[i].size() != cols) throw ValidationError("contingency table rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) {
      if (t[i][j] < 0) throw ValidationError("contingency counts must be non-negative");
      const auto c = static_cast<double>(t[i][j]);
      row_sum[i] += c;
      col_sum[j] += c;
      total += c;
    }
  }
  if (!(total > 0.0)) throw ValidationError("contingency table is empty");

  ChiSquaredResult r;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      if (!(expected > 0.0)) {
        throw ValidationError("expected count is zero in cell (" + std::to_string(i + 1) + ", " +
                              std::to_string(j + 1) + "); drop empty rows and columns");
      }
      const double diff = static_cast<double>(t[i][j]) - expected;
      r.statistic += diff * diff / expected;
    }
  }
  r.df = static_cast<int>((rows - 1) * (cols - 1));
  r.p = chi_squared_sf(r.statistic, r.df);
  return r;
}

double krippendorff_alpha(const ReliabilityData& data) {
  std::size_t units = 0;
  for (const auto& coder : data.codes) units = std::max(units, coder.size());

  // Coincidence matrix over category labels.
  std::map<std::pair<std::string, std::string>, double> coincidence;
  std::map<std::string, double> marginal;
  double n = 0.0;
  for (std::size_t u = 0; u < units; ++u) {
    std::vector<const std::string*> values;
    for (const auto& coder : data.codes) {
      if (u < coder.size() && coder[u]) values.push_back(&*coder[u]);
    }
    const std::size_t m = values.size();
    if (m < 2) continue;
    const double w = 1.0 / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j) coincidence[{*values[i], *values[j]}] += w;
      }
      marginal[*values[i]] += 1.0;
    }
    n += static_cast<double>(m);
  }
  if (n < 2.0) throw ValidationError("Krippendorff's alpha needs at least two pairable values");

  double observed = 0.0;
  for (const auto& [pair, o] : coincidence) {
    if (pair.first != pair.second) observed += o;
  }
  observed /= n;

  double expected = 0.0;
  for (const auto& [c, nc] : marginal) {
    for (const auto& [k, nk] : marginal) {
      if (c != k) expected += nc * nk;
    }
  }
  expected /= n * (n - 1.0);
  if (!(expected > 0.0)) {
    throw ValidationError("Krippendorff's alpha is undefined when every pairable value is the same");
  }
  return 1.0 - observed / expected;
}

namespace {

bool is_integer(const std::string& s) {
  try {
    csv::parse_int(s);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

}  // namespace

ContingencyTable read_contingency_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw ValidationError("contingency csv is empty");
  std::size_t first_row = 0;
  for (const auto& cell : rows.front()) {
    if (!cell.empty() && !is_integer(cell)) first_row = 1;
  }
  std::size_t first_col = 0;
  for (std::size_t i = first_row; i < rows.size(); ++i) {
    if (!rows[i].empty() && !is_integer(rows[i][0])) first_col = 1;
  }
  ContingencyTable t;
  for (std::size_t i = first_row; i < rows.size(); ++i) {
    std::vector<std::int64_t> row;
    for (std::size_t j = first_col; j < rows[i].size(); ++j) row.push_back(csv::parse_int(rows[i][j]));
    t.counts.push_back(std::move(row));
  }
  return t;
}

ReliabilityData read_reliability_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.size() < 2) throw ValidationError("reliability csv needs a header row and at least one coder");
  const std::size_t units = rows.front().size() - 1;
  ReliabilityData d;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != units + 1) {
      throw ValidationError("reliability csv row " + std::to_string(i + 1) + " does not match the unit header");
    }
    std::vector<std::optional<std::string>> coder;
    for (std::size_t j = 1; j < rows[i].size(); ++j) {
      const auto& cell = rows[i][j];
      if (cell.empty() || cell == "NA" || cell == ".") {
        coder.emplace_back(std::nullopt);
      } else {
        coder.emplace_back(cell);
      }
    }
    d.codes.push_back(std::move(coder));
  }
  return d;
}

}  // namespace repnet
