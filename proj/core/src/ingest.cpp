#include "linepack/ingest.hpp"

#include "linepack/errors.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <vector>

namespace linepack {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view bytes) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= bytes.size()) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) end = bytes.size();
    std::string_view raw = bytes.substr(pos, end - pos);
    ++number;
    pos = end + 1;

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i >= raw.size()) break;
      if (line.tokens.empty() && raw[i] == '#') break;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == bytes.size()) break;
  }
  return lines;
}

std::optional<int> as_count(std::string_view token) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 1) return std::nullopt;
  return value;
}

double as_scalar(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError(line, "malformed scalar '" + std::string(token) + "'");
  }
  return value;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_atomically(const std::filesystem::path& target, std::string_view bytes) {
  std::random_device rd;
  auto tmp = target;
  tmp += ".tmp." + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PackingRecord parse_packing(std::string_view bytes, const ParseOptions& options,
                            PackingSource source) {
  const std::size_t per_scalar = options.field == Field::Complex ? 2 : 1;
  std::vector<Line> lines = tokenize(bytes);
  std::size_t total = 0;
  for (const auto& l : lines) total += l.tokens.size();

  std::optional<int> d = options.d;
  std::optional<int> n = options.n;
  const bool declared_fits =
      d && n && total == static_cast<std::size_t>(*d) * static_cast<std::size_t>(*n) * per_scalar;

  // Optional "d n" header: two positive integers consistent with the rest of the file.
  if (!lines.empty() && lines.front().tokens.size() == 2 && !declared_fits) {
    const auto hd = as_count(lines.front().tokens[0]);
    const auto hn = as_count(lines.front().tokens[1]);
    if (hd && hn && (!d || *d == *hd) && (!n || *n == *hn)) {
      d = hd;
      n = hn;
      total -= 2;
      lines.erase(lines.begin());
    }
  }

  if (!d && !n) {
    if (lines.empty()) throw ParseError(1, "empty packing file");
    const std::size_t width = lines.front().tokens.size();
    if (width % per_scalar != 0) throw ParseError(lines.front().number, "odd token count for complex row");
    d = static_cast<int>(width / per_scalar);
    n = static_cast<int>(lines.size());
  } else if (!n) {
    n = static_cast<int>(total / (static_cast<std::size_t>(*d) * per_scalar));
    if (*n < 1) n = 1;
  } else if (!d) {
    d = static_cast<int>(total / (static_cast<std::size_t>(*n) * per_scalar));
    if (*d < 1) d = 1;
  }
  if (*d < 1 || *n < 1) throw DimensionError("packing needs d, n >= 1");

  const std::size_t width = static_cast<std::size_t>(*d) * per_scalar;
  const std::size_t expected = width * static_cast<std::size_t>(*n);
  if (total != expected) throw TokenCountMismatch(expected, total);

  const bool rows_fit = lines.size() == static_cast<std::size_t>(*n) &&
                        std::all_of(lines.begin(), lines.end(),
                                    [&](const Line& l) { return l.tokens.size() == width; });
  PackingLayout layout = options.layout;
  if (layout == PackingLayout::Auto) {
    layout = rows_fit ? PackingLayout::RowPerVector : PackingLayout::VectorMajor;
  } else if (layout == PackingLayout::RowPerVector && !rows_fit) {
    for (const auto& l : lines) {
      if (l.tokens.size() != width) throw TokenCountMismatch(width, l.tokens.size());
    }
    throw TokenCountMismatch(static_cast<std::size_t>(*n), lines.size());
  }

  // Both layouts list coordinates vector by vector.
  Eigen::MatrixXcd entries(*d, *n);
  std::size_t slot = 0;
  double pending_re = 0.0;
  for (const auto& l : lines) {
    for (auto tok : l.tokens) {
      const double v = as_scalar(tok, l.number);
      const std::size_t scalar = slot / per_scalar;
      const auto row = static_cast<Index>(scalar % static_cast<std::size_t>(*d));
      const auto col = static_cast<Index>(scalar / static_cast<std::size_t>(*d));
      if (per_scalar == 2 && slot % 2 == 0) {
        pending_re = v;
      } else {
        entries(row, col) = per_scalar == 2 ? Complex(pending_re, v) : Complex(v, 0.0);
      }
      ++slot;
    }
  }

  bool renormalized = false;
  for (Index j = 0; j < entries.cols(); ++j) {
    const double norm = entries.col(j).norm();
    const double off = std::abs(norm - 1.0);
    if (off > kPackingNormTol) throw NormViolation(static_cast<std::size_t>(j), norm);
    if (off > 1e-12) {
      entries.col(j) /= norm;
      renormalized = true;
    }
  }

  return PackingRecord{*d,
                       *n,
                       options.field,
                       VectorConfiguration(options.field, std::move(entries)),
                       layout,
                       std::move(source),
                       sha256_hex(bytes),
                       renormalized};
}

PackingRecord load_packing(const std::filesystem::path& path, const ParseOptions& options) {
  const std::string bytes = read_file(path);
  return parse_packing(bytes, options, {SourceKind::LocalFile, path.string()});
}

std::string serialize_packing(const VectorConfiguration& x) {
  std::string out = std::to_string(x.dim()) + " " + std::to_string(x.size()) + "\n";
  char buf[64];
  for (Index j = 0; j < x.size(); ++j) {
    for (Index i = 0; i < x.dim(); ++i) {
      if (i > 0) out += ' ';
      const Complex v = x.matrix()(i, j);
      std::snprintf(buf, sizeof buf, "%.17g", v.real());
      out += buf;
      if (x.field() == Field::Complex) {
        std::snprintf(buf, sizeof buf, " %.17g", v.imag());
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

double packing_coherence(const PackingRecord& record) {
  return gram_report(record.configuration).coherence;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

HttpResponse HttpTransport::get(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw NetworkError(0, "not an absolute url: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  auto result = client.Get(path);
  if (!result) throw NetworkError(0, httplib::to_string(result.error()));
  return {result->status, result->body};
}

std::string resolve_packing_url(const std::string& url_or_name) {
  if (url_or_name.find("://") != std::string::npos) return url_or_name;
  const char* base = std::getenv(kDbUrlEnv);
  if (base == nullptr || *base == '\0') {
    throw DomainError("relative packing name '" + url_or_name + "' needs " + kDbUrlEnv);
  }
  std::string joined = base;
  if (!joined.empty() && joined.back() != '/') joined += '/';
  return joined + url_or_name;
}

PackingRecord fetch_packing(const std::string& url, const std::filesystem::path& cache_dir,
                            const ParseOptions& options, Transport& transport) {
  const std::string key = sha256_hex(url);
  const auto data_path = cache_dir / (key + ".dat");
  const auto meta_path = cache_dir / (key + ".meta");
  const PackingSource source{SourceKind::Remote, url};

  if (std::filesystem::exists(data_path)) {
    return parse_packing(read_file(data_path), options, source);
  }

  const HttpResponse response = transport.get(url);
  if (response.status != 200) {
    throw NetworkError(response.status, "GET " + url + " returned status " + std::to_string(response.status));
  }
  // Parse before caching so malformed downloads never land in the cache.
  PackingRecord record = parse_packing(response.body, options, source);

  std::filesystem::create_directories(cache_dir);
  nlohmann::json meta = {
      {"url", url},
      {"d", record.d},
      {"n", record.n},
      {"field", std::string(to_string(record.field))},
      {"timestamp", utc_timestamp()},
      {"checksum", record.checksum},
  };
  write_atomically(meta_path, meta.dump(2) + "\n");
  write_atomically(data_path, response.body);
  return record;
}

PackingRecord fetch_packing(const std::string& url, const std::filesystem::path& cache_dir,
                            const ParseOptions& options) {
  HttpTransport transport;
  return fetch_packing(url, cache_dir, options, transport);
}

}  // namespace linepack
