#pragma once

// Dataset files (JSON, schemaVersion "1") and the output formats of the
// command-line tool.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "credal_mcdm/alternatives.hpp"
#include "credal_mcdm/preferences.hpp"
#include "credal_mcdm/sampler.hpp"

namespace credal_mcdm {

/// Invalid dataset. `line` is 1-based, 0 when no position is known.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class CriterionType { benefit, cost };

struct Dataset {
  std::string schema_version;
  std::vector<std::string> criteria;
  std::vector<PreferenceRecord> records;
  std::optional<PerformanceMatrix> performance;  // normalized
  std::optional<Eigen::MatrixXd> covariance;     // "fromPerformance" is resolved on load
};

Dataset parse_dataset(std::string_view text);
Dataset load_dataset(const std::filesystem::path& path);

/// Min-max scaling per column; cost columns are then reflected (1 - x).
/// Constant columns map to 1.
Eigen::MatrixXd normalize_performance(const Eigen::MatrixXd& raw, const std::vector<CriterionType>& types);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// "chain,iteration,<columns>" then one line per draw; chain and iteration
/// are 1-based.
std::string samples_csv(const PosteriorSamples& samples);

/// Writes through a temporary file in the same directory and renames it into
/// place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace credal_mcdm
