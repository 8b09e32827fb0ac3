#include "purikit/eigen_method.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "purikit/tensor_core.hpp"

namespace purikit {

namespace {

// Sorted (descending) eigenpairs above tol * lambda_max, with each vector's
// largest-magnitude entry rotated to the positive real axis so repeated runs
// produce identical certificates.
std::pair<std::vector<double>, Mat> spectral(const DensityMatrix& rho,
                                             double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.data);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigen_method: eigensolver failed");
  const long dim = rho.dim();
  std::vector<long> order(dim);
  for (long i = 0; i < dim; ++i) order[i] = dim - 1 - i;  // descending
  double vmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  std::vector<double> vals;
  Mat vecs(dim, dim);
  long n = 0;
  for (long idx : order) {
    double v = es.eigenvalues()(idx);
    if (v <= tol * vmax || v <= 0.0) break;
    Vec phi = es.eigenvectors().col(idx);
    long imax = 0;
    double best = 0.0;
    for (long r = 0; r < dim; ++r)
      if (std::abs(phi(r)) > best) {
        best = std::abs(phi(r));
        imax = r;
      }
    if (best > 0.0) phi *= std::conj(phi(imax)) / std::abs(phi(imax));
    vals.push_back(v);
    vecs.col(n++) = phi;
  }
  vecs.conservativeResize(dim, n);
  return {vals, vecs};
}

}  // namespace

std::vector<long> select_product_basis(const DensityMatrix& rho, double tol) {
  const long dim = rho.dim();
  Spectrum spec = spectrum_of(rho, tol);
  const int n = spec.n_nonzero;
  double scale = rho.data.norm();
  if (scale <= 0.0)
    throw std::invalid_argument("select_product_basis: zero operator");

  std::vector<long> labels;
  Mat q(dim, n);  // orthonormalized accepted images
  int got = 0;
  for (long x = 0; x < dim && got < n; ++x) {
    Vec img = rho.data.col(x);
    for (int j = 0; j < got; ++j) img -= q.col(j).dot(img) * q.col(j);
    double res = img.norm();
    if (res > tol * scale) {
      q.col(got++) = img / res;
      labels.push_back(x);
    }
  }
  if (got < n)
    throw std::runtime_error(
        "select_product_basis: only " + std::to_string(got) + " of " +
        std::to_string(n) + " independent images found at this tolerance");
  return labels;
}

std::pair<MPSPurification, EigenCertificate> eigen_purification(
    const DensityMatrix& rho, double tol) {
  const long dim = rho.dim();
  auto [vals, vecs] = spectral(rho, tol);
  const int n = static_cast<int>(vals.size());
  if (n == 0) throw std::invalid_argument("eigen_purification: zero state");

  EigenCertificate cert;
  cert.n_rank = n;
  cert.osr = operator_schmidt_rank(rho, tol).second;
  cert.bound_Dn = cert.osr * n;
  cert.product_indices = select_product_basis(rho, tol);

  // chi_a = rho |x_a>;  f_{ia} = lambda_i <phi_i | x_a>;  phi_i = sum_a g_{ai} chi_a.
  Mat chi(dim, n);
  cert.f_matrix.resize(n, n);
  for (int a = 0; a < n; ++a) {
    long xa = cert.product_indices[a];
    chi.col(a) = rho.data.col(xa);
    for (int i = 0; i < n; ++i)
      cert.f_matrix(i, a) = vals[i] * std::conj(vecs(xa, i));
  }
  Eigen::FullPivLU<Mat> lu(cert.f_matrix);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "eigen_purification: coefficient matrix singular at tolerance");
  cert.g_matrix = lu.inverse();
  Mat phi = chi * cert.g_matrix;  // column i = reconstructed eigenvector

  std::vector<int> phys(rho.n_sites, rho.local_dim);
  for (int i = 0; i < n; ++i) {
    PureState st;
    st.local_dims = phys;
    st.amplitudes = phi.col(i);
    cert.per_eigenvector_sr.push_back(schmidt_rank(st, tol).second);
  }

  // Standard purification sum_i sqrt(lambda_i) |phi_i>|i> with the |i>
  // register attached as ancilla of the last site.
  std::vector<int> anc(rho.n_sites, 1);
  anc.back() = n;
  Vec psi = Vec::Zero(dim * n);
  for (int i = 0; i < n; ++i) {
    double w = std::sqrt(vals[i]);
    for (long x = 0; x < dim; ++x) {
      long head = x / rho.local_dim;
      long last = x % rho.local_dim;
      psi(head * (rho.local_dim * n) + last * n + i) += w * phi(x, i);
    }
  }
  MPSPurification pur = purification_from_dense(psi, phys, anc, tol);
  return {std::move(pur), std::move(cert)};
}

std::pair<DensityMatrix, double> truncate_spectrum(const DensityMatrix& rho,
                                                   int s, double tol) {
  auto [vals, vecs] = spectral(rho, tol);
  const int n = static_cast<int>(vals.size());
  if (s < 1 || s > n)
    throw std::invalid_argument("truncate_spectrum: s out of [1, rank]");
  double kept = 0.0;
  for (int i = 0; i < s; ++i) kept += vals[i];
  Mat sigma = Mat::Zero(rho.dim(), rho.dim());
  for (int i = 0; i < s; ++i)
    sigma += (vals[i] / kept) * (vecs.col(i) * vecs.col(i).adjoint());
  DensityMatrix out =
      DensityMatrix::from_dense(sigma, rho.n_sites, rho.local_dim, true);
  double dist = trace_norm(rho.data - out.data);
  return {std::move(out), dist};
}

double bound_table(DistKind kind, int D, double eps, int n, double b) {
  if (eps < 0.0 || eps > 2.0)
    throw std::invalid_argument("bound_table: eps must lie in [0, 2]");
  double nn = static_cast<double>(n);
  switch (kind) {
    case DistKind::uniform:
    case DistKind::random_dist:
      return D * nn * nn * (1.0 - eps / 2.0) * (1.0 - eps / 2.0);
    case DistKind::equally_spaced: {
      double r = std::sqrt(1.0 + 4.0 * nn * (nn + 1.0) * (1.0 - eps / 2.0)) - 1.0;
      return (D / 4.0) * r * r;
    }
    case DistKind::one_fixed: {
      double r =
          std::sqrt(1.0 + 4.0 * nn * (nn + 1.0) * (1.0 - eps) + 8.0 * eps) - 1.0;
      return (D / 4.0) * r * r;
    }
    case DistKind::exponential: {
      if (eps <= 0.0)
        throw std::invalid_argument("bound_table: exponential needs eps > 0");
      double l = std::log(2.0 / eps);
      return (D / (b * b)) * l * l;
    }
  }
  throw std::invalid_argument("bound_table: unknown distribution kind");
}

}  // namespace purikit
