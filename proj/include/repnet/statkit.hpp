#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repnet {

/// R x C grid of non-negative counts, R, C >= 2.
struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;
};

struct ChiSquaredResult {
  double statistic = 0.0;
  int df = 0;
  double p = 1.0;
};

/// Pearson test of independence without continuity correction. Throws
/// ValidationError for ragged tables, negative counts or a zero expected cell.
ChiSquaredResult chi_squared_independence(const ContingencyTable& table);

/// Coders x units grid of nominal codes; nullopt marks a missing value.
struct ReliabilityData {
  std::vector<std::vector<std::optional<std::string>>> codes;
};

/// Nominal Krippendorff's alpha from the coincidence matrix. Throws
/// ValidationError with fewer than two pairable values or when every
/// pairable value is identical (alpha undefined).
double krippendorff_alpha(const ReliabilityData& data);

/// Parses a numeric CSV grid (optional non-numeric header row and first
/// column are skipped).
ContingencyTable read_contingency_csv(std::string_view text);

/// Parses a coder-by-unit CSV: one row per coder, first column the coder
/// name, first row the unit header. Empty cells, "NA" and "." are missing.
ReliabilityData read_reliability_csv(std::string_view text);

}  // namespace repnet
