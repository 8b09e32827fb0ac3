#include "purikit/types.hpp"

#include <algorithm>
#include <cstdlib>

namespace purikit {

long dense_cap() {
  static long cap = [] {
    if (const char* env = std::getenv("PURIKIT_DENSE_CAP")) {
      long v = std::atol(env);
      if (v > 0) return v;
    }
    return 4096L;
  }();
  return cap;
}

void check_dense_cap(long dim, const char* where) {
  if (dim > dense_cap()) {
    throw std::runtime_error(std::string(where) + ": dense dimension " +
                             std::to_string(dim) + " exceeds cap " +
                             std::to_string(dense_cap()));
  }
}

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

long DensityMatrix::dim() const { return ipow(local_dim, n_sites); }

DensityMatrix DensityMatrix::from_dense(Mat m, int n_sites, int local_dim,
                                        bool normalized) {
  DensityMatrix rho;
  rho.n_sites = n_sites;
  rho.local_dim = local_dim;
  if (m.rows() != m.cols() || m.rows() != rho.dim()) {
    throw std::invalid_argument("DensityMatrix: matrix size " +
                                std::to_string(m.rows()) +
                                " does not match d^N = " +
                                std::to_string(rho.dim()));
  }
  rho.data = std::move(m);
  rho.trace = rho.data.trace().real();
  rho.normalized = normalized;
  return rho;
}

void DensityMatrix::validate(double psd_tol) const {
  const double nrm = data.norm();
  const double scale = std::max(nrm, 1e-300);
  double herm_err = (data - data.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > 1e-12 * scale) {
    throw std::runtime_error("DensityMatrix: not Hermitian, error " +
                             std::to_string(herm_err));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(data, Eigen::EigenvaluesOnly);
  double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -psd_tol * scale) {
    throw std::runtime_error("DensityMatrix: not PSD, min eigenvalue " +
                             std::to_string(min_ev));
  }
  double tr = data.trace().real();
  if (std::abs(tr - trace) > 1e-12 * std::max(1.0, std::abs(tr))) {
    throw std::runtime_error("DensityMatrix: trace field inconsistent");
  }
  if (normalized && std::abs(tr - 1.0) > 1e-10) {
    throw std::runtime_error("DensityMatrix: flagged normalized but tr = " +
                             std::to_string(tr));
  }
}

bool PureState::is_normalized(double tol) const {
  return std::abs(amplitudes.norm() - 1.0) <= tol;
}

int MPDO::max_bond() const {
  int m = 1;
  for (int b : bond_dims) m = std::max(m, b);
  return m;
}

int MPSPurification::max_rank() const {
  int m = 1;
  for (int b : schmidt_ranks) m = std::max(m, b);
  return m;
}

}  // namespace purikit
