#include "purikit/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace purikit {

const char* dist_kind_name(DistKind k) {
  switch (k) {
    case DistKind::uniform: return "uniform";
    case DistKind::equally_spaced: return "equally_spaced";
    case DistKind::random_dist: return "random";
    case DistKind::one_fixed: return "one_fixed";
    case DistKind::exponential: return "exponential";
  }
  return "?";
}

DistKind dist_kind_from_name(const std::string& name) {
  if (name == "uniform") return DistKind::uniform;
  if (name == "equally_spaced") return DistKind::equally_spaced;
  if (name == "random") return DistKind::random_dist;
  if (name == "one_fixed") return DistKind::one_fixed;
  if (name == "exponential") return DistKind::exponential;
  throw std::invalid_argument("unknown distribution kind: " + name);
}

double Spectrum::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double Spectrum::value_or_zero(long i) const {
  if (i < 0 || i >= ambient_dim)
    throw std::out_of_range("Spectrum::value_or_zero");
  return i < static_cast<long>(values.size()) ? values[i] : 0.0;
}

void Spectrum::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) throw std::runtime_error("Spectrum: negative value");
    if (i > 0 && values[i] > values[i - 1] + 1e-15)
      throw std::runtime_error("Spectrum: not non-increasing");
  }
  if (normalized && std::abs(sum() - 1.0) > 1e-12)
    throw std::runtime_error("Spectrum: flagged normalized but sum != 1");
  if (ambient_dim < static_cast<long>(values.size()))
    throw std::runtime_error("Spectrum: ambient smaller than value count");
}

Spectrum make_distribution(DistKind kind, int n, const DistParams& params) {
  if (n < 1) throw std::invalid_argument("make_distribution: n must be >= 1");
  std::vector<double> v(n);
  switch (kind) {
    case DistKind::uniform:
      std::fill(v.begin(), v.end(), 1.0 / n);
      break;
    case DistKind::equally_spaced: {
      double norm = 2.0 / (static_cast<double>(n) * (n + 1));
      for (int j = 1; j <= n; ++j) v[j - 1] = j * norm;
      break;
    }
    case DistKind::random_dist: {
      auto [lo, hi] = params.interval;
      if (!(lo >= 0.0 && hi > lo))
        throw std::invalid_argument("make_distribution: bad interval");
      std::mt19937_64 rng(params.seed);
      std::uniform_real_distribution<double> dist(lo, hi);
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        double x = dist(rng);
        while (x <= 0.0) x = dist(rng);
        v[j] = x;
        s += x;
      }
      for (double& x : v) x /= s;
      break;
    }
    case DistKind::one_fixed: {
      if (n < 2)
        throw std::invalid_argument("make_distribution: one_fixed needs n >= 2");
      double norm = 1.0 / (static_cast<double>(n) * (n + 1) - 2.0);
      v[0] = 0.5;
      for (int j = 2; j <= n; ++j) v[j - 1] = j * norm;
      break;
    }
    case DistKind::exponential: {
      double b = params.b;
      if (b <= 0.0)
        throw std::invalid_argument("make_distribution: exponential needs b > 0");
      // lambda_j = N exp(-b j); N fixed by sum = 1 for any b > 0.
      double s = 0.0;
      for (int j = 1; j <= n; ++j) s += std::exp(-b * j);
      for (int j = 1; j <= n; ++j) v[j - 1] = std::exp(-b * j) / s;
      break;
    }
  }
  std::sort(v.begin(), v.end(), std::greater<double>());
  // Remove rounding drift so the sum is exactly machine-1.
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;

  Spectrum spec;
  spec.values = std::move(v);
  spec.n_nonzero = n;
  spec.ambient_dim = n;
  spec.normalized = true;
  spec.m_distinct = distinct_count(spec, 1e-10, spec.ambient_dim);
  return spec;
}

int distinct_count(const Spectrum& spec, double tol, long ambient_dim) {
  // Values are sorted, so classes are runs of nearly equal entries.
  int m = 0;
  double prev = -1.0;
  bool have_zero_class = false;
  for (double v : spec.values) {
    if (m == 0 || std::abs(v - prev) > tol) {
      ++m;
      prev = v;
      if (v <= tol) have_zero_class = true;
    }
  }
  if (ambient_dim > spec.n_nonzero && !have_zero_class) ++m;  // 0 counted
  return m;
}

std::vector<double> distinct_representatives(const Spectrum& spec, double tol) {
  std::vector<double> reps;
  for (double v : spec.values) {
    if (reps.empty() || std::abs(v - reps.back()) > tol) reps.push_back(v);
  }
  if (spec.ambient_dim > spec.n_nonzero &&
      (reps.empty() || reps.back() > tol))
    reps.push_back(0.0);
  return reps;
}

Mat haar_unitary(long dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) z(i, j) = cx(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(dim, dim);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long j = 0; j < dim; ++j) {
    cx d = r(j, j);
    cx phase = (std::abs(d) > 0) ? d / std::abs(d) : cx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

DensityMatrix assemble_density(const Spectrum& spec, const Mat& basis,
                               int n_sites, int local_dim) {
  const long dim = ipow(local_dim, n_sites);
  if (basis.rows() != dim || basis.cols() != dim)
    throw std::invalid_argument("assemble_density: basis dimension mismatch");
  if (spec.ambient_dim != dim)
    throw std::invalid_argument("assemble_density: spectrum ambient mismatch");
  double ortho_err =
      (basis.adjoint() * basis - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (ortho_err > 1e-10)
    throw std::invalid_argument("assemble_density: basis not unitary, error " +
                                std::to_string(ortho_err));
  Mat rho = Mat::Zero(dim, dim);
  for (long i = 0; i < static_cast<long>(spec.values.size()); ++i)
    rho += spec.values[i] * (basis.col(i) * basis.col(i).adjoint());
  DensityMatrix out;
  out.n_sites = n_sites;
  out.local_dim = local_dim;
  out.data = std::move(rho);
  out.trace = out.data.trace().real();
  out.normalized = spec.normalized;
  return out;
}

Spectrum spectrum_of(const DensityMatrix& rho, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.data, Eigen::EigenvaluesOnly);
  RVec ev = es.eigenvalues();
  std::vector<double> vals(ev.data(), ev.data() + ev.size());
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  double vmax = vals.empty() ? 0.0 : std::max(vals[0], 0.0);
  Spectrum spec;
  spec.ambient_dim = rho.dim();
  for (double v : vals) {
    if (v > tol * vmax && v > 0.0) {
      spec.values.push_back(v);
    }
  }
  spec.n_nonzero = static_cast<int>(spec.values.size());
  spec.normalized = std::abs(rho.trace - 1.0) <= 1e-10;
  spec.m_distinct = distinct_count(spec, 1e-10, spec.ambient_dim);
  return spec;
}

}  // namespace purikit
