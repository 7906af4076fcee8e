#include "linepack/bounds.hpp"
#include "linepack/errors.hpp"
#include "linepack/ingest.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace linepack {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = LINEPACK_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("linepack-test-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

class RecordingTransport : public Transport {
 public:
  std::map<std::string, HttpResponse> routes;
  std::vector<std::string> calls;

  HttpResponse get(const std::string& url) override {
    calls.push_back(url);
    const auto it = routes.find(url);
    if (it == routes.end()) return {404, "not found"};
    return it->second;
  }
};

const char* kPartialBasis = "1 0 0 1 0.70710678 0.70710678";

TEST(ParsePacking, PartialBasisIsRenormalized) {
  const auto rec = parse_packing(kPartialBasis, 2, 3, Field::Real);
  EXPECT_EQ(rec.d, 2);
  EXPECT_EQ(rec.n, 3);
  EXPECT_TRUE(rec.renormalized);
  EXPECT_NEAR(rec.configuration.matrix()(0, 2).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(rec.configuration.column_norm(2), 1.0, 1e-15);
  EXPECT_FALSE(rec.checksum.empty());
}

TEST(ParsePacking, VectorMajorFixtureMatchesInlineText) {
  const auto rec = load_packing(kFixtures / "partial-basis-raw.txt", {2, 3, Field::Real, PackingLayout::Auto});
  EXPECT_EQ(rec.layout, PackingLayout::VectorMajor);
  EXPECT_EQ(rec.source.kind, SourceKind::LocalFile);
  const auto inline_rec = parse_packing(kPartialBasis, 2, 3, Field::Real);
  EXPECT_LE((rec.configuration.matrix() - inline_rec.configuration.matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ParsePacking, TokenCountMismatch) {
  try {
    parse_packing("1 0 0 1 0.70710678", 2, 3, Field::Real);
    FAIL() << "expected TokenCountMismatch";
  } catch (const TokenCountMismatch& e) {
    EXPECT_EQ(e.expected(), 6u);
    EXPECT_EQ(e.got(), 5u);
  }
}

TEST(ParsePacking, NormViolation) {
  try {
    parse_packing("1 0\n2 0\n", 2, 2, Field::Real);
    FAIL() << "expected NormViolation";
  } catch (const NormViolation& e) {
    EXPECT_EQ(e.column(), 1u);
    EXPECT_DOUBLE_EQ(e.norm(), 2.0);
  }
}

TEST(ParsePacking, MalformedScalarReportsLine) {
  try {
    load_packing(kFixtures / "corrupted.txt", {});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParsePacking, HeaderAndComments) {
  const auto rec = load_packing(kFixtures / "mercedes.txt", {});
  EXPECT_EQ(rec.d, 2);
  EXPECT_EQ(rec.n, 3);
  EXPECT_EQ(rec.layout, PackingLayout::RowPerVector);
  EXPECT_FALSE(rec.renormalized);
  EXPECT_NEAR(packing_coherence(rec), 0.5, 1e-15);
}

TEST(ParsePacking, ComplexPairs) {
  const auto rec = load_packing(kFixtures / "sic2x2.txt", {std::nullopt, std::nullopt, Field::Complex, PackingLayout::Auto});
  EXPECT_EQ(rec.d, 2);
  EXPECT_EQ(rec.n, 8);
  EXPECT_EQ(rec.field, Field::Complex);
  EXPECT_NEAR(gram_report(rec.configuration).one_norm, 16.0 * (1.0 + std::sqrt(3.0)), 1e-9);
  EXPECT_THROW(parse_packing("1 0 0", ParseOptions{1, std::nullopt, Field::Complex, PackingLayout::Auto}),
               TokenCountMismatch);
}

TEST(ParsePacking, ExplicitRowLayoutRejectsRaggedRows) {
  EXPECT_THROW(parse_packing("1 0 0\n1\n", ParseOptions{2, 2, Field::Real, PackingLayout::RowPerVector}),
               TokenCountMismatch);
}

TEST(PackingCoherence, Fixtures) {
  EXPECT_EQ(packing_coherence(load_packing(kFixtures / "orthonormal-4.txt", {})), 0.0);
  EXPECT_NEAR(packing_coherence(load_packing(kFixtures / "simplex-6.txt", {})), 1.0 / 6.0, 1e-9);
}

TEST(Serialize, RoundTripPreservesGram) {
  for (const Field f : {Field::Real, Field::Complex}) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const int d = 1 + static_cast<int>(seed % 6);
      const int n = 1 + static_cast<int>(seed % 9);
      const auto x = random_configuration(d, n, f, seed);
      const auto text = serialize_packing(x);
      const auto rec = parse_packing(text, {std::nullopt, std::nullopt, f, PackingLayout::Auto});
      EXPECT_EQ(rec.d, d);
      EXPECT_EQ(rec.n, n);
      const auto again = parse_packing(serialize_packing(rec.configuration), {std::nullopt, std::nullopt, f, PackingLayout::Auto});
      EXPECT_LE((gram_report(again.configuration).gram - gram_report(x).gram).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(FetchPacking, SecondCallIsServedFromCache) {
  TempDir dir;
  RecordingTransport t;
  const std::string url = "http://packings.invalid/real/2x3.txt";
  t.routes[url] = {200, kPartialBasis};
  const ParseOptions opts{2, 3, Field::Real, PackingLayout::Auto};

  const auto first = fetch_packing(url, dir.path(), opts, t);
  const auto second = fetch_packing(url, dir.path(), opts, t);
  EXPECT_EQ(t.calls.size(), 1u);
  EXPECT_EQ(first.checksum, second.checksum);
  EXPECT_EQ(gram_report(first.configuration).gram, gram_report(second.configuration).gram);
  EXPECT_EQ(first.source.kind, SourceKind::Remote);

  const auto direct = parse_packing(kPartialBasis, 2, 3, Field::Real);
  EXPECT_EQ(first.configuration.matrix(), direct.configuration.matrix());

  const std::string key = sha256_hex(url);
  EXPECT_TRUE(fs::exists(dir.path() / (key + ".dat")));
  const auto meta = slurp(dir.path() / (key + ".meta"));
  for (const char* field : {"\"url\"", "\"d\"", "\"n\"", "\"field\"", "\"timestamp\"", "\"checksum\""}) {
    EXPECT_NE(meta.find(field), std::string::npos) << field;
  }
  EXPECT_EQ(slurp(dir.path() / (key + ".dat")), kPartialBasis);
}

TEST(FetchPacking, NotFound) {
  TempDir dir;
  RecordingTransport t;
  try {
    fetch_packing("http://packings.invalid/missing.txt", dir.path(), {}, t);
    FAIL() << "expected NetworkError";
  } catch (const NetworkError& e) {
    EXPECT_EQ(e.status(), 404);
  }
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(FetchPacking, MalformedDownloadIsNotCached) {
  TempDir dir;
  RecordingTransport t;
  t.routes["http://x.invalid/bad"] = {200, "1 0 zero"};
  EXPECT_THROW(fetch_packing("http://x.invalid/bad", dir.path(), {}, t), ParseError);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(FetchPacking, ResolveUrl) {
  EXPECT_EQ(resolve_packing_url("https://a/b.txt"), "https://a/b.txt");
  ::setenv(kDbUrlEnv, "http://mirror.invalid/packings", 1);
  EXPECT_EQ(resolve_packing_url("real-6-8.txt"), "http://mirror.invalid/packings/real-6-8.txt");
  ::unsetenv(kDbUrlEnv);
  EXPECT_THROW(resolve_packing_url("real-6-8.txt"), DomainError);
}

TEST(FetchPacking, LocalHttpServer) {
  httplib::Server server;
  server.Get("/grass/2x3.txt", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(kPartialBasis, "text/plain");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir dir;
  HttpTransport transport;
  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  const auto rec = fetch_packing(base + "/grass/2x3.txt", dir.path(), {2, 3, Field::Real, PackingLayout::Auto}, transport);
  EXPECT_EQ(rec.configuration.matrix(), parse_packing(kPartialBasis, 2, 3, Field::Real).configuration.matrix());
  try {
    fetch_packing(base + "/grass/none.txt", dir.path(), {}, transport);
    ADD_FAILURE() << "expected NetworkError";
  } catch (const NetworkError& e) {
    EXPECT_EQ(e.status(), 404);
  }
  server.stop();
  worker.join();
}

TEST(Fixtures, BoundsNeverExceedPackingCoherence) {
  int checked = 0;
  for (int n = 5; n <= 12; ++n) {
    const auto path = kFixtures / "packings" / ("real-6-" + std::to_string(n) + ".txt");
    ASSERT_TRUE(fs::exists(path)) << path;
    const auto rec = load_packing(path, {});
    ASSERT_EQ(rec.d, 6);
    ASSERT_EQ(rec.n, n);
    if (n <= 6) continue;
    const double mu = packing_coherence(rec);
    const auto r = bound_report(6, n, Field::Real);
    EXPECT_LE(r.bukh_cox, mu + 1e-6) << n;
    for (const auto& v : {r.welch, r.orthoplex, r.levenshtein}) {
      if (v) EXPECT_LE(*v, mu + 1e-6) << n;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 6);
  const auto simplex = load_packing(kFixtures / "simplex-6.txt", {});
  EXPECT_LE(bound_report(6, 7, Field::Real).best, packing_coherence(simplex) + 1e-6);
  const auto sic = load_packing(kFixtures / "sic2x2.txt", {std::nullopt, std::nullopt, Field::Complex, PackingLayout::Auto});
  EXPECT_LE(bound_report(2, 8, Field::Complex).best, packing_coherence(sic) + 1e-6);
}

}  // namespace
}  // namespace linepack
