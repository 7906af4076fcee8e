#include "linepack/frames.hpp"

#include "linepack/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace linepack {

std::string_view to_string(Field field) {
  return field == Field::Real ? "real" : "complex";
}

Field parse_field(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "real" || lower == "r") return Field::Real;
  if (lower == "complex" || lower == "c") return Field::Complex;
  throw DomainError("unknown field '" + std::string(text) + "' (expected real or complex)");
}

VectorConfiguration::VectorConfiguration(Field field, Eigen::MatrixXcd entries, double tol_unit)
    : field_(field), entries_(std::move(entries)), tol_unit_(tol_unit) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw DimensionError("configuration needs d >= 1 and n >= 1");
  }
  if (!(tol_unit_ > 0.0)) throw DomainError("tol_unit must be positive");
  if (field_ == Field::Real && entries_.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw DomainError("real configuration has non-zero imaginary parts");
  }
}

VectorConfiguration VectorConfiguration::real(const Eigen::MatrixXd& entries, double tol_unit) {
  return VectorConfiguration(Field::Real, entries.cast<Complex>(), tol_unit);
}

double VectorConfiguration::max_unit_deviation() const {
  return (entries_.colwise().norm().array() - 1.0).abs().maxCoeff();
}

bool VectorConfiguration::unit_norm() const { return max_unit_deviation() <= tol_unit_; }

namespace {

double tightness_residual(const Eigen::MatrixXcd& x) {
  const auto d = x.rows();
  const double c = static_cast<double>(x.cols()) / static_cast<double>(d);
  const Eigen::MatrixXcd frame = x * x.adjoint();
  return (frame - c * Eigen::MatrixXcd::Identity(d, d)).norm();
}

}  // namespace

GramReport gram_report(const VectorConfiguration& x) {
  GramReport r;
  r.gram = x.matrix().adjoint() * x.matrix();
  const Index n = x.size();
  r.one_norm = r.gram.cwiseAbs().sum();
  r.trace = r.gram.trace().real();
  r.tightness_residual = tightness_residual(x.matrix());
  if (n > 1) {
    double lo = std::abs(r.gram(0, 1));
    double hi = lo;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double m = std::abs(r.gram(i, j));
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
    }
    r.coherence = hi;
    r.equiangular_spread = hi - lo;
  }
  return r;
}

TightnessCheck is_tight(const VectorConfiguration& x, double tol) {
  if (!(tol > 0.0)) throw DomainError("tightness tolerance must be positive");
  const double residual = tightness_residual(x.matrix());
  return {residual <= tol, residual};
}

EquiangularityCheck is_equiangular(const VectorConfiguration& x, double tol) {
  if (x.size() < 2) throw DimensionError("equiangularity needs at least two vectors");
  if (!x.unit_norm()) throw DomainError("equiangularity is defined for unit-norm configurations");
  const double spread = gram_report(x).equiangular_spread;
  return {spread <= tol, spread};
}

bool is_etf(const VectorConfiguration& x, double tol) {
  return is_tight(x, tol).tight && is_equiangular(x, tol).equiangular;
}

VectorConfiguration orthogonal_tight_complement(const VectorConfiguration& x, double rank_tol) {
  const Index d = x.dim();
  const Index n = x.size();
  if (n <= d) {
    throw DimensionError("complement needs n > d (got d=" + std::to_string(d) +
                         ", n=" + std::to_string(n) + ")");
  }
  const Index k = n - d;
  const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(k));

  // Y^* spans ker(X); its columns are the trailing right singular vectors.
  Eigen::MatrixXcd y;
  if (x.field() == Field::Real) {
    const Eigen::MatrixXd xr = x.matrix().real();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(xr, Eigen::ComputeFullV);
    const double sigma_min = svd.singularValues()(d - 1);
    if (!(sigma_min > rank_tol)) throw RankDeficient(sigma_min);
    y = (scale * svd.matrixV().rightCols(k).transpose()).cast<Complex>();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x.matrix(), Eigen::ComputeFullV);
    const double sigma_min = svd.singularValues()(d - 1);
    if (!(sigma_min > rank_tol)) throw RankDeficient(sigma_min);
    y = scale * svd.matrixV().rightCols(k).adjoint();
  }
  return VectorConfiguration(x.field(), std::move(y), x.tol_unit());
}

VectorConfiguration naimark_complement(const VectorConfiguration& x, double tight_tol) {
  if (x.size() <= x.dim()) throw DimensionError("Naimark complement needs n > d");
  if (!x.unit_norm()) throw DomainError("Naimark complement needs unit-norm columns");
  const auto check = is_tight(x, tight_tol);
  if (!check.tight) throw NotTight(check.residual);
  // For a unit-norm tight X, (d/n) X^* X is the projection onto the row space,
  // so the scaled complement already has Gram (n/k)(I - (d/n) X^* X).
  return orthogonal_tight_complement(x);
}

VectorConfiguration construct_simplex_etf(int d, Field field) {
  if (d < 1) throw DimensionError("simplex needs d >= 1");
  const Index m = d + 1;
  Eigen::MatrixXd centred = Eigen::MatrixXd::Identity(m, m);
  centred.array() -= 1.0 / static_cast<double>(m);

  // Orthonormal basis of the complement of (1, ..., 1).
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(m, 1));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd coords = q.rightCols(d).transpose() * centred;
  coords.colwise().normalize();
  return VectorConfiguration(field, coords.cast<Complex>());
}

VectorConfiguration construct_sic(int k) {
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  if (k == 2) {
    Eigen::MatrixXcd z(2, 4);
    z(0, 0) = 1.0;
    z(1, 0) = 0.0;
    for (int a = 0; a < 3; ++a) {
      z(0, a + 1) = 1.0 / std::sqrt(3.0);
      z(1, a + 1) = std::sqrt(2.0 / 3.0) * std::pow(omega, a);
    }
    return VectorConfiguration(Field::Complex, std::move(z));
  }
  if (k == 3) {
    Eigen::MatrixXcd z(3, 9);
    const double s = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < 3; ++a) {
      const Complex w = std::pow(omega, a);
      z.col(a) << 0.0, s, -s * w;
      z.col(3 + a) << -s * w, 0.0, s;
      z.col(6 + a) << s, -s * w, 0.0;
    }
    return VectorConfiguration(Field::Complex, std::move(z));
  }
  throw Unsupported("SIC construction is available only for k = 2 and k = 3 (got k=" +
                    std::to_string(k) + ")");
}

VectorConfiguration concat_copies(const VectorConfiguration& z, int m) {
  if (m < 1) throw DomainError("concat_copies needs m >= 1");
  const Index n = z.size();
  Eigen::MatrixXcd y(z.dim(), n * m);
  for (int c = 0; c < m; ++c) y.middleCols(c * n, n) = z.matrix();
  return VectorConfiguration(z.field(), std::move(y), z.tol_unit());
}

VectorConfiguration random_configuration(int d, int n, Field field, std::uint64_t seed,
                                         bool unit) {
  if (d < 1 || n < 1) throw DimensionError("random configuration needs d, n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd x(d, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = field == Field::Complex ? normal(rng) : 0.0;
      x(i, j) = Complex(re, im);
    }
    if (unit) x.col(j).normalize();
  }
  return VectorConfiguration(field, std::move(x));
}

}  // namespace linepack
