#include "purikit/sos_method.hpp"

#include "purikit/tensor_core.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace purikit {

const char* gram_origin_name(GramOrigin o) {
  switch (o) {
    case GramOrigin::exact: return "exact";
    case GramOrigin::lagrange: return "lagrange";
    case GramOrigin::exp_ansatz: return "exp_ansatz";
    case GramOrigin::sdp: return "sdp";
  }
  return "?";
}

RVec vandermonde(double lam, int k) {
  if (k < 1) throw std::invalid_argument("vandermonde: k must be >= 1");
  RVec v(k);
  double p = 1.0;
  for (int j = 0; j < k; ++j) {
    v(j) = p;
    p *= lam;
  }
  return v;
}

namespace {

// Factored evaluation used for the interpolation ansaetze; stays in the
// log-magnitude domain for long products.
struct SosTerm {
  double weight = 0.0;
  int lam_power = 0;                 // extra lambda^(2*lam_power) factor
  std::vector<double> roots;         // numerator roots
  std::vector<double> denoms;        // per-factor denominators
};

double eval_terms(const std::vector<SosTerm>& terms, double lam) {
  double total = 0.0;
  const bool log_domain = !terms.empty() && terms[0].roots.size() > 7;
  for (const auto& t : terms) {
    double base;
    if (!log_domain) {
      base = 1.0;
      for (std::size_t i = 0; i < t.roots.size(); ++i)
        base *= (lam - t.roots[i]) / t.denoms[i];
    } else {
      double lg = 0.0;
      bool zero = false;
      for (std::size_t i = 0; i < t.roots.size(); ++i) {
        double num = lam - t.roots[i];
        if (num == 0.0) {
          zero = true;
          break;
        }
        lg += std::log(std::abs(num)) - std::log(std::abs(t.denoms[i]));
      }
      base = zero ? 0.0 : std::exp(lg);
    }
    double sq = base * base;
    for (int e = 0; e < t.lam_power; ++e) sq *= lam * lam;
    total += t.weight * sq;
  }
  return total;
}

std::vector<SosTerm> lagrange_terms(const std::vector<double>& points) {
  std::vector<SosTerm> terms;
  const int np = static_cast<int>(points.size());
  for (int j = 0; j < np; ++j) {
    SosTerm t;
    t.weight = points[j];
    for (int i = 0; i < np; ++i) {
      if (i == j) continue;
      t.roots.push_back(points[i]);
      t.denoms.push_back(points[j] - points[i]);
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

std::vector<SosTerm> exp_ansatz_terms(const std::vector<double>& lam, int k) {
  std::vector<SosTerm> terms;
  for (int r = 0; r < k - 2; ++r) {
    SosTerm t;
    t.weight = 1.0 / lam[r];
    t.lam_power = 1;
    for (int j = 0; j < k - 2; ++j) {
      if (j == r) continue;
      t.roots.push_back(lam[j]);
      t.denoms.push_back(lam[r] - lam[j]);
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

// Coefficients of prod (lambda - roots[i]) / denoms[i], ascending powers.
RVec product_coeffs(const std::vector<double>& roots,
                    const std::vector<double>& denoms) {
  RVec c = RVec::Zero(static_cast<int>(roots.size()) + 1);
  c(0) = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    RVec next = RVec::Zero(c.size());
    for (int j = 0; j < c.size() - 1; ++j) {
      next(j) += -roots[i] * c(j);
      next(j + 1) += c(j);
    }
    c = next / denoms[i];
  }
  return c;
}

Mat gram_from_terms(const std::vector<SosTerm>& terms, int k) {
  RMat g = RMat::Zero(k, k);
  for (const auto& t : terms) {
    RVec base = product_coeffs(t.roots, t.denoms);
    RVec c = RVec::Zero(k);
    for (int j = 0; j < base.size(); ++j) {
      int idx = j + t.lam_power;
      if (idx >= k) throw std::logic_error("gram_from_terms: degree overflow");
      c(idx) = base(j);
    }
    g += t.weight * (c * c.transpose());
  }
  return g.cast<cx>();
}

}  // namespace

GramPolynomial exact_gram(const Spectrum& spec, double tol) {
  std::vector<double> reps = distinct_representatives(spec, tol);
  const int m = static_cast<int>(reps.size());
  if (m < 1) throw std::invalid_argument("exact_gram: empty spectrum");
  const double scale = reps[0];
  if (scale <= 0.0) throw std::invalid_argument("exact_gram: zero spectrum");

  // Work on rescaled nodes mu = lambda / lambda_1 for conditioning.
  RMat V(m, m);
  for (int i = 0; i < m; ++i) V.col(i) = vandermonde(reps[i] / scale, m);
  Eigen::FullPivLU<RMat> lu(V.transpose());
  if (!lu.isInvertible())
    throw std::runtime_error("exact_gram: Vandermonde numerically singular");
  RMat W = lu.solve(RMat::Identity(m, m));  // columns biorthogonal to V's

  RMat Rresc = RMat::Zero(m, m);
  for (int j = 0; j < m; ++j)
    Rresc += (reps[j] / scale) * (W.col(j) * W.col(j).transpose());

  // Undo the rescaling: p(lambda) = scale * p'(lambda/scale).
  RVec s(m);
  double p = 1.0;
  for (int j = 0; j < m; ++j) {
    s(j) = p;
    p /= scale;
  }
  RMat R = scale * (s.asDiagonal() * Rresc * s.asDiagonal());

  GramPolynomial gp;
  gp.k = m;
  gp.gram = R.cast<cx>();
  gp.origin = GramOrigin::exact;
  for (int i = 0; i < m; ++i) {
    if (std::abs(eval_poly(gp, reps[i]) - reps[i]) > 1e-8)
      throw std::runtime_error(
          "exact_gram: interpolation failed, nodes too ill-conditioned");
  }
  return gp;
}

double eval_poly(const GramPolynomial& gp, double lam) {
  RVec v = vandermonde(lam, gp.k);
  return v.transpose() * gp.gram.real() * v;
}

SosDecomposition sos_decompose(const GramPolynomial& gp) {
  RMat R = gp.gram.real();
  R = 0.5 * (R + R.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RMat> es(R);
  const RVec& w = es.eigenvalues();
  double wmax = std::max(w.maxCoeff(), 0.0);
  if (w.minCoeff() < -1e-10 * std::max(wmax, 1.0))
    throw std::invalid_argument("sos_decompose: Gram not PSD");
  std::vector<int> keep;
  for (int i = 0; i < w.size(); ++i)
    if (w(i) > 1e-12 * std::max(wmax, 1e-300)) keep.push_back(i);
  SosDecomposition out;
  out.rank = static_cast<int>(keep.size());
  out.rows = RMat::Zero(out.rank, gp.k);
  for (int u = 0; u < out.rank; ++u)
    out.rows.row(u) = std::sqrt(w(keep[u])) * es.eigenvectors().col(keep[u]).transpose();
  return out;
}

GramPolynomial real_reduce(const GramPolynomial& gp) {
  GramPolynomial out = gp;
  out.gram = gp.gram.real().cast<cx>();
  return out;
}

GramPolynomial lagrange_squared(const std::vector<double>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] <= 0.0)
      throw std::invalid_argument("lagrange_squared: points must be > 0");
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw std::invalid_argument("lagrange_squared: duplicate points");
  }
  if (points.empty())
    throw std::invalid_argument("lagrange_squared: need at least one point");
  const int k = static_cast<int>(points.size()) + 1;
  GramPolynomial gp;
  gp.k = k;
  gp.gram = gram_from_terms(lagrange_terms(points), k);
  gp.origin = GramOrigin::lagrange;
  return gp;
}

GramPolynomial exp_ansatz(const Spectrum& spec, int k) {
  if (k < 3) throw std::invalid_argument("exp_ansatz: k must be >= 3");
  if (k - 2 > spec.n_nonzero)
    throw std::invalid_argument("exp_ansatz: k-2 exceeds number of eigenvalues");
  GramPolynomial gp;
  gp.k = k;
  gp.gram = gram_from_terms(exp_ansatz_terms(spec.values, k), k);
  gp.origin = GramOrigin::exp_ansatz;
  return gp;
}

// Factored evaluation path for the exponential ansatz; identical
// polynomial, better conditioned than the monomial Gram for large k.
static double eval_poly_at(const GramPolynomial& gp, const Spectrum& spec,
                           double lam) {
  if (gp.origin == GramOrigin::exp_ansatz)
    return eval_terms(exp_ansatz_terms(spec.values, gp.k), lam);
  return eval_poly(gp, lam);
}

Spectrum sigma_of_poly(const Spectrum& spec, const GramPolynomial& gp) {
  Spectrum out;
  out.ambient_dim = spec.ambient_dim;
  for (double v : spec.values) out.values.push_back(std::max(0.0, eval_poly(gp, v)));
  double p0 = std::max(0.0, eval_poly(gp, 0.0));
  for (long i = spec.n_nonzero; i < spec.ambient_dim; ++i)
    out.values.push_back(p0);
  std::sort(out.values.begin(), out.values.end(), std::greater<double>());
  while (!out.values.empty() && out.values.back() == 0.0) out.values.pop_back();
  out.n_nonzero = static_cast<int>(out.values.size());
  out.normalized = false;
  out.m_distinct = distinct_count(out, 1e-10, out.ambient_dim);
  return out;
}

double sos_distance(const Spectrum& spec, const GramPolynomial& gp,
                    long ambient_dim) {
  double dist = 0.0;
  if (gp.origin == GramOrigin::exp_ansatz) {
    for (double v : spec.values) dist += std::abs(v - eval_poly_at(gp, spec, v));
    dist += (ambient_dim - spec.n_nonzero) * eval_poly_at(gp, spec, 0.0);
    return dist;
  }
  for (double v : spec.values) dist += std::abs(v - eval_poly(gp, v));
  dist += (ambient_dim - spec.n_nonzero) * eval_poly(gp, 0.0);
  return dist;
}

RankBound sos_rank_bound(int D, int k) {
  if (D < 1 || k < 1) throw std::invalid_argument("sos_rank_bound: D,k >= 1");
  RankBound out;
  if (D == 1) {
    out.value = static_cast<unsigned long long>(k);
    return out;
  }
  unsigned long long acc = 0, pw = 1;
  for (int i = 0; i < k; ++i) {
    if (acc > (~0ULL) - pw) {
      out.saturated = true;
      out.value = ~0ULL;
      return out;
    }
    acc += pw;
    if (i + 1 < k) {
      if (pw > (~0ULL) / static_cast<unsigned long long>(D)) {
        out.saturated = true;
        out.value = ~0ULL;
        return out;
      }
      pw *= static_cast<unsigned long long>(D);
    }
  }
  out.value = acc;
  return out;
}

MPSPurification build_purifying_state(const DensityMatrix& rho,
                                      const GramPolynomial& gp, double tol) {
  const int n = rho.n_sites;
  const int d = rho.local_dim;
  const long D = rho.dim();
  check_dense_cap(D, "build_purifying_state");
  const int k = gp.k;

  SosDecomposition dec = sos_decompose(real_reduce(gp));
  const int r = std::max(1, dec.rank);
  RMat A = RMat::Zero(r, k);
  if (dec.rank > 0) A.topRows(dec.rank) = dec.rows;

  // T[I,J,u] = sum_l rho^l[I,J] A(u,l)
  std::vector<Mat> powers;
  powers.reserve(k);
  powers.push_back(Mat::Identity(D, D));
  for (int l = 1; l < k; ++l) powers.push_back(powers.back() * rho.data);

  // Sites carry (phys i_k, ancilla j_k); the k-dim register rides on the
  // last site's ancilla.
  std::vector<int> phys(n, d), anc(n, d);
  anc[n - 1] = d * r;
  long total = D * D * r;
  Vec psi = Vec::Zero(total);
  std::vector<int> idig(n), jdig(n);
  for (long I = 0; I < D; ++I) {
    long rest = I;
    for (int q = n - 1; q >= 0; --q) {
      idig[q] = static_cast<int>(rest % d);
      rest /= d;
    }
    for (long J = 0; J < D; ++J) {
      long r2 = J;
      for (int q = n - 1; q >= 0; --q) {
        jdig[q] = static_cast<int>(r2 % d);
        r2 /= d;
      }
      for (int u = 0; u < r; ++u) {
        cx amp(0.0, 0.0);
        for (int l = 0; l < k; ++l) amp += powers[l](I, J) * A(u, l);
        if (amp == cx(0.0, 0.0)) continue;
        long F = 0;
        for (int q = 0; q < n - 1; ++q)
          F = F * (static_cast<long>(d) * d) + (idig[q] * d + jdig[q]);
        F = F * (static_cast<long>(d) * d * r) +
            (static_cast<long>(idig[n - 1]) * d * r + jdig[n - 1] * r + u);
        psi(F) = amp;
      }
    }
  }
  return purification_from_dense(psi, phys, anc, tol);
}

}  // namespace purikit
