#pragma once

#include "linepack/frames.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace linepack {

/// Packing files are whitespace separated decimal scalars, read vector by
/// vector. Two layouts are accepted:
///   - vector-major: every coordinate on its own line, vectors consecutive;
///   - row-per-vector: one line of d scalars per vector.
/// Complex entries are written as "re im" pairs. An optional first line "d n"
/// declares the shape; lines starting with '#' are ignored.
enum class PackingLayout { Auto, VectorMajor, RowPerVector };

struct ParseOptions {
  std::optional<int> d;
  std::optional<int> n;
  Field field = Field::Real;
  PackingLayout layout = PackingLayout::Auto;
};

enum class SourceKind { LocalFile, Remote, Builtin };

struct PackingSource {
  SourceKind kind = SourceKind::Builtin;
  std::string location;  // path or url
};

inline constexpr double kPackingNormTol = 1e-6;

struct PackingRecord {
  int d;
  int n;
  Field field;
  VectorConfiguration configuration;
  PackingLayout layout;  // the layout that was detected
  PackingSource source;
  std::string checksum;  // sha256 of the raw bytes, lowercase hex
  bool renormalized;
};

/// Throws TokenCountMismatch, NormViolation (a column more than 1e-6 from
/// unit norm) or ParseError. Columns within tolerance are renormalized.
PackingRecord parse_packing(std::string_view bytes, const ParseOptions& options,
                            PackingSource source = {});

inline PackingRecord parse_packing(std::string_view bytes, int d, int n, Field field) {
  return parse_packing(bytes, ParseOptions{d, n, field, PackingLayout::Auto});
}

PackingRecord load_packing(const std::filesystem::path& path, const ParseOptions& options);

// Row-per-vector text with a "d n" header and 17 significant digits.
std::string serialize_packing(const VectorConfiguration& x);

double packing_coherence(const PackingRecord& record);

std::string sha256_hex(std::string_view bytes);

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

// Plain HTTP(S) GET without authentication.
class HttpTransport : public Transport {
 public:
  HttpResponse get(const std::string& url) override;
};

inline constexpr const char* kDbUrlEnv = "LINEPACK_DB_URL";

// Absolute urls pass through; anything else is appended to $LINEPACK_DB_URL.
std::string resolve_packing_url(const std::string& url_or_name);

/// Returns the cached record when <cache_dir>/<key>.dat exists, where key is
/// the sha256 of the url. Otherwise performs one GET, writes <key>.dat and
/// <key>.meta atomically, and parses. Throws NetworkError on transport
/// failures or non-200 status.
PackingRecord fetch_packing(const std::string& url, const std::filesystem::path& cache_dir,
                            const ParseOptions& options, Transport& transport);

PackingRecord fetch_packing(const std::string& url, const std::filesystem::path& cache_dir,
                            const ParseOptions& options);

}  // namespace linepack
