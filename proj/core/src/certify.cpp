#include "linepack/certify.hpp"

#include "linepack/delsarte.hpp"
#include "linepack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linepack {

bool EqualityDiagnosis::all_hold() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionCheck& c) { return c.holds; });
}

const ConditionCheck& EqualityDiagnosis::at(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no condition named " + name);
}

namespace {

double gamma_upper_bound(int k, int n, Field field) {
  return std::min(gram_one_norm_bound_welch(k, n), gram_one_norm_bound_bc(k, n, field));
}

ChainStep inequality(std::string name, double left, double right, int witness = -1) {
  return {std::move(name), left, right, right - left, witness};
}

ChainStep identity(std::string name, double left, double right, int witness = -1) {
  return {std::move(name), left, right, -std::abs(left - right), witness};
}

}  // namespace

LemmaCertificate lemma_certificate(const VectorConfiguration& x) {
  if (!x.unit_norm()) throw DomainError("lemma certificate needs unit-norm columns");
  const VectorConfiguration y = orthogonal_tight_complement(x);

  LemmaCertificate cert;
  cert.n = static_cast<int>(x.size());
  cert.d = static_cast<int>(x.dim());
  cert.k = cert.n - cert.d;

  const GramReport gx = gram_report(x);
  const GramReport gy = gram_report(y);
  const Eigen::MatrixXcd& g = gx.gram;
  const Eigen::MatrixXcd& h = gy.gram;
  const Index n = x.size();

  cert.mu = gx.coherence;
  cert.gamma_witness = gy.one_norm;
  cert.gamma_upper = gamma_upper_bound(cert.k, cert.n, x.field());

  // Per-column steps; keep the column with the smallest slack.
  ChainStep diag{"diag-identity", 0.0, 0.0, 0.0, -1};
  ChainStep triangle{"triangle", 0.0, 0.0, 0.0, -1};
  ChainStep coherence{"coherence-factor", 0.0, 0.0, 0.0, -1};
  bool first = true;
  for (Index i = 0; i < n; ++i) {
    Complex cross = 0.0;
    double abs_products = 0.0;
    double abs_h = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      cross += g(i, j) * h(j, i);
      abs_products += std::abs(g(i, j)) * std::abs(h(i, j));
      abs_h += std::abs(h(i, j));
    }
    const double yi2 = h(i, i).real();
    const int col = static_cast<int>(i);
    const auto s_diag = identity("diag-identity", std::abs(yi2 + cross), 0.0, col);
    const auto s_tri = inequality("triangle", yi2, abs_products, col);
    const auto s_coh = inequality("coherence-factor", abs_products, cert.mu * abs_h, col);
    if (first || s_diag.slack < diag.slack) diag = s_diag;
    if (first || s_tri.slack < triangle.slack) triangle = s_tri;
    if (first || s_coh.slack < coherence.slack) coherence = s_coh;
    first = false;
  }
  cert.chain.push_back(diag);
  cert.chain.push_back(triangle);
  cert.chain.push_back(coherence);
  cert.chain.push_back(identity("trace-identity", gy.trace, static_cast<double>(n)));
  cert.chain.push_back(inequality("trace-sum", static_cast<double>(n),
                                  cert.mu * (gy.one_norm - static_cast<double>(n))));
  cert.chain.push_back(inequality("gamma-upper", cert.gamma_witness, cert.gamma_upper));

  cert.floor_witness = lemma_coherence_floor(cert.n, cert.gamma_witness);
  cert.floor_theorem = lemma_coherence_floor(cert.n, cert.gamma_upper);
  cert.chain.push_back(inequality("witness-floor", cert.floor_witness, cert.mu));
  cert.chain.push_back(inequality("theorem-floor", cert.floor_theorem, cert.floor_witness));

  cert.valid = std::all_of(cert.chain.begin(), cert.chain.end(),
                           [](const ChainStep& s) { return s.slack >= -kChainTol; });
  return cert;
}

EqualityDiagnosis diagnose_lemma_equality(const VectorConfiguration& x,
                                          const VectorConfiguration& y, double tol) {
  const Index n = x.size();
  if (y.size() != n || n <= x.dim() || x.dim() + y.dim() != n) {
    throw ShapeMismatch("lemma equality needs X in F^{d x n}, Y in F^{k x n} with d + k = n and k >= 1");
  }
  const GramReport gx = gram_report(x);
  const GramReport gy = gram_report(y);
  const int k = static_cast<int>(y.dim());

  EqualityDiagnosis out;
  out.gram_one_norm = gy.one_norm;
  out.reference_bound = gamma_upper_bound(k, static_cast<int>(n), x.field());

  const double spread = gx.equiangular_spread;
  out.conditions.push_back({"equiangular", spread <= tol, spread, ""});

  const double gap = std::max(0.0, out.reference_bound - gy.one_norm);
  out.conditions.push_back({"(i) witness-optimality", gap <= tol, gap,
                            "gap to the best known upper bound on gamma(k, n)"});

  const double cross = (x.matrix() * y.matrix().adjoint()).norm();
  out.conditions.push_back({"(ii) orthogonality", cross <= tol, cross, "||X Y^*||_F"});

  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Complex a = gx.gram(i, j);
      const Complex b = gy.gram(i, j);
      if (std::abs(a) < kSignDeadZone || std::abs(b) < kSignDeadZone) {
        ++out.skipped_pairs;
        continue;
      }
      worst = std::max(worst, std::abs(a / std::abs(a) + b / std::abs(b)));
    }
  }
  out.conditions.push_back({"(iii) sign-flip", worst <= tol, worst,
                            std::to_string(out.skipped_pairs) + " near-zero pairs skipped"});
  return out;
}

EqualityDiagnosis diagnose_theorem3_equality(const VectorConfiguration& y, double tol) {
  const auto tight = is_tight(y, tol);
  if (!tight.tight) throw NotTight(tight.residual);
  const int k = static_cast<int>(y.dim());
  const Index n = y.size();
  const auto q = q_polys(k, y.field());
  const LpCoefficients c = tangency_cached(k, y.field()).coeffs;

  const GramReport gy = gram_report(y);
  const Eigen::MatrixXcd& h = gy.gram;
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) norms[i] = std::sqrt(h(i, i).real());

  double symmetry = 0.0;
  double contact = 0.0;
  int skipped = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (norms[i] == 0.0 || norms[j] == 0.0) {
        ++skipped;
        continue;
      }
      const double m = std::abs(h(i, j));
      // |<y_i, z_j>| = m / ||y_j||, |<z_i, y_j>| = m / ||y_i||.
      symmetry = std::max(symmetry, std::abs(m / norms[j] - m / norms[i]));
      const double t = m / (norms[i] * norms[j]);
      contact = std::max(contact, std::abs(surrogate(q, c, t * t) - t));
    }
  }
  const double energy = std::abs(q2_kernel_energy(y, norms));
  double unit = 0.0;
  for (double v : norms) unit = std::max(unit, std::abs(v - 1.0));

  EqualityDiagnosis out;
  out.skipped_pairs = skipped;
  out.gram_one_norm = gy.one_norm;
  out.reference_bound = gram_one_norm_bound_bc(k, static_cast<int>(n), y.field());
  out.conditions = {
      {"(1) norm-symmetry", symmetry <= tol, symmetry,
       "|<y_i,z_j>| = |<z_i,y_j>|; checked as stated, reduces to a norm symmetry"},
      {"(2) surrogate-contact", contact <= tol, contact, "f(|<z_i,z_j>|^2) = |<z_i,z_j>|"},
      {"(3) q2-annihilation", energy <= tol, energy, "sum Q2(|<z_i,z_j>|^2) ||y_i|| ||y_j|| = 0"},
      {"(4) unit-norm", unit <= tol, unit, "||y_i|| = 1"},
  };
  return out;
}

WelchEqualityCheck welch_equality_check(const VectorConfiguration& y, double tol) {
  const auto tight = is_tight(y, tol);
  if (!tight.tight) throw NotTight(tight.residual);
  const GramReport gy = gram_report(y);

  WelchEqualityCheck out;
  out.one_norm = gy.one_norm;
  out.bound = gram_one_norm_bound_welch(static_cast<int>(y.dim()), static_cast<int>(y.size()));
  out.norm_margin = std::abs(out.one_norm - out.bound);
  out.spread = gy.equiangular_spread;
  out.unit_deviation = y.max_unit_deviation();
  out.equal = out.norm_margin <= tol;
  out.etf = out.unit_deviation <= tol && out.spread <= tol;
  out.consistent = out.equal == out.etf;
  return out;
}

}  // namespace linepack
