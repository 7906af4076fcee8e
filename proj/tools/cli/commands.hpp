#pragma once

#include "linepack/bounds.hpp"
#include "linepack/frames.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace linepack::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificateFailed = 1;
inline constexpr int kExitUsage = 2;

struct FigureRow {
  int n = 0;
  std::optional<double> packing_coherence;
  std::optional<double> welch;
  std::optional<double> bukh_cox;
  std::optional<double> orthoplex;
  std::optional<double> levenshtein;
  double best_bound = 0.0;
  std::string achiever;
};

struct FigureOptions {
  int d = 6;
  int n_min = 5;
  int n_max = 40;
  Field field = Field::Real;
  std::optional<std::filesystem::path> packings_dir;
  ThresholdConvention orthoplex = ThresholdConvention::Strict;
  // When set, missing packings are fetched from this url with "{n}" replaced.
  std::optional<std::string> fetch_template;
  std::filesystem::path cache_dir = ".linepack-cache";
};

// File name looked up under the packings directory, e.g. "real-6-8.txt".
std::string packing_file_name(Field field, int d, int n);

std::vector<FigureRow> figure_rows(const FigureOptions& options, std::ostream& warnings);

inline constexpr const char* kFigureHeader =
    "n,packing_coherence,welch,bukh_cox,orthoplex,levenshtein,best_bound,achiever";

// Header plus one line per row; 9 significant digits, empty cells for missing values.
std::string figure_csv(const std::vector<FigureRow>& rows);

// 9 significant digits, C locale.
std::string format_number(double value);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linepack::cli
