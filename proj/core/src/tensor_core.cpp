#include "purikit/tensor_core.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>

namespace purikit {

namespace {

using RowMat =
    Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

long prod(const std::vector<int>& dims, int from, int to) {
  long p = 1;
  for (int i = from; i < to; ++i) p *= dims[i];
  return p;
}

int count_rank(const RVec& sv, double tol) {
  if (sv.size() == 0) return 0;
  double smax = sv.maxCoeff();
  if (smax <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++r;
  return r;
}

}  // namespace

std::vector<int> ranks_per_cut(const Vec& psi, const std::vector<int>& dims,
                               double tol) {
  const int n = static_cast<int>(dims.size());
  if (prod(dims, 0, n) != psi.size())
    throw std::invalid_argument("ranks_per_cut: dimension mismatch");
  std::vector<int> ranks;
  ranks.reserve(n - 1);
  for (int k = 1; k < n; ++k) {
    long rows = prod(dims, 0, k);
    long cols = prod(dims, k, n);
    Eigen::Map<const RowMat> m(psi.data(), rows, cols);
    Eigen::BDCSVD<Mat> svd(m);
    ranks.push_back(count_rank(svd.singularValues(), tol));
  }
  return ranks;
}

Mps mps_from_dense(const Vec& psi, const std::vector<int>& dims, double tol) {
  const int n = static_cast<int>(dims.size());
  if (prod(dims, 0, n) != psi.size())
    throw std::invalid_argument("mps_from_dense: dimension mismatch");
  if (tol <= 0.0) throw std::invalid_argument("mps_from_dense: tol must be > 0");

  Mps out;
  out.dims = dims;

  // Remaining state as a (bond * d_k) x rest row-major matrix.
  RowMat rem(1, psi.size());
  for (long i = 0; i < psi.size(); ++i) rem(0, i) = psi(i);
  int left = 1;

  for (int k = 0; k < n - 1; ++k) {
    long rows = static_cast<long>(left) * dims[k];
    long cols = rem.size() / rows;
    Eigen::Map<const RowMat> m(rem.data(), rows, cols);
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& sv = svd.singularValues();
    int r = std::max(1, count_rank(sv, tol));
    out.ranks.push_back(r);

    Tensor4 site(left, dims[k], 1, r);
    const Mat& U = svd.matrixU();
    for (int a = 0; a < left; ++a)
      for (int i = 0; i < dims[k]; ++i)
        for (int b = 0; b < r; ++b)
          site.at(a, i, 0, b) = U(static_cast<long>(a) * dims[k] + i, b);
    out.sites.push_back(std::move(site));

    RowMat next(r, cols);
    for (int b = 0; b < r; ++b)
      next.row(b) = sv(b) * svd.matrixV().col(b).adjoint();
    rem = std::move(next);
    left = r;
  }

  Tensor4 last(left, dims[n - 1], 1, 1);
  for (int a = 0; a < left; ++a)
    for (int i = 0; i < dims[n - 1]; ++i) last.at(a, i, 0, 0) = rem(a, i);
  out.sites.push_back(std::move(last));
  return out;
}

Vec mps_to_dense(const Mps& mps) {
  const int n = static_cast<int>(mps.dims.size());
  // Partial contraction: matrix of shape (phys so far) x (right bond).
  RowMat part(1, 1);
  part(0, 0) = cx(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    const Tensor4& t = mps.sites[k];
    long rows = part.rows() * t.d1;
    RowMat next = RowMat::Zero(rows, t.d3);
    for (long p = 0; p < part.rows(); ++p)
      for (int i = 0; i < t.d1; ++i)
        for (int b = 0; b < t.d3; ++b) {
          cx acc(0.0, 0.0);
          for (int a = 0; a < t.d0; ++a) acc += part(p, a) * t.at(a, i, 0, b);
          next(p * t.d1 + i, b) = acc;
        }
    part = std::move(next);
  }
  Vec out(part.rows());
  for (long i = 0; i < part.rows(); ++i) out(i) = part(i, 0);
  return out;
}

PureState vectorize(const DensityMatrix& rho) {
  const int n = rho.n_sites;
  const int d = rho.local_dim;
  const long D = rho.dim();
  PureState psi;
  psi.local_dims.assign(n, d * d);
  psi.amplitudes.resize(D * D);
  std::vector<int> idig(n), jdig(n);
  for (long I = 0; I < D; ++I) {
    long rest = I;
    for (int k = n - 1; k >= 0; --k) {
      idig[k] = static_cast<int>(rest % d);
      rest /= d;
    }
    for (long J = 0; J < D; ++J) {
      long r2 = J;
      for (int k = n - 1; k >= 0; --k) {
        jdig[k] = static_cast<int>(r2 % d);
        r2 /= d;
      }
      long S = 0;
      for (int k = 0; k < n; ++k) S = S * (d * d) + (idig[k] * d + jdig[k]);
      psi.amplitudes(S) = rho.data(I, J);
    }
  }
  return psi;
}

MPDO mpdo_from_dense(const DensityMatrix& rho, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("mpdo_from_dense: tol must be > 0");
  const int d = rho.local_dim;
  if (rho.data.rows() != rho.dim())
    throw std::invalid_argument("mpdo_from_dense: d^N does not match matrix size");
  PureState vec = vectorize(rho);
  Mps mps = mps_from_dense(vec.amplitudes, vec.local_dims, tol);

  MPDO out;
  out.local_dim = d;
  out.bond_dims = mps.ranks;
  for (auto& s : mps.sites) {
    Tensor4 t(s.d0, d, d, s.d3);
    for (int a = 0; a < s.d0; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int b = 0; b < s.d3; ++b)
            t.at(a, i, j, b) = s.at(a, i * d + j, 0, b);
    out.sites.push_back(std::move(t));
  }
  return out;
}

DensityMatrix contract_mpdo(const MPDO& mpdo) {
  const int n = mpdo.n_sites();
  const int d = mpdo.local_dim;
  const long D = ipow(d, n);
  check_dense_cap(D, "contract_mpdo");
  for (int k = 0; k + 1 < n; ++k) {
    if (mpdo.sites[k].d3 != mpdo.sites[k + 1].d0)
      throw std::invalid_argument("contract_mpdo: inconsistent bond dimensions");
  }

  // Partial result: ((I,J) combined row-major) x right bond.
  RowMat part(1, mpdo.sites[0].d0);
  part.setZero();
  part(0, 0) = cx(1.0, 0.0);
  long pd = 1;  // current physical dimension on each side
  for (int k = 0; k < n; ++k) {
    const Tensor4& t = mpdo.sites[k];
    RowMat next = RowMat::Zero(pd * d * pd * d, t.d3);
    for (long I = 0; I < pd; ++I)
      for (long J = 0; J < pd; ++J)
        for (int a = 0; a < t.d0; ++a) {
          cx p = part(I * pd + J, a);
          if (p == cx(0.0, 0.0)) continue;
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
              for (int b = 0; b < t.d3; ++b) {
                next((I * d + i) * (pd * d) + (J * d + j), b) +=
                    p * t.at(a, i, j, b);
              }
        }
    part = std::move(next);
    pd *= d;
  }
  Mat m(D, D);
  for (long I = 0; I < D; ++I)
    for (long J = 0; J < D; ++J) m(I, J) = part(I * D + J, 0);
  DensityMatrix rho;
  rho.n_sites = n;
  rho.local_dim = d;
  rho.data = std::move(m);
  rho.trace = rho.data.trace().real();
  return rho;
}

std::pair<std::vector<int>, int> operator_schmidt_rank(const DensityMatrix& rho,
                                                       double tol) {
  PureState vec = vectorize(rho);
  std::vector<int> ranks = ranks_per_cut(vec.amplitudes, vec.local_dims, tol);
  int osr = 1;
  for (int r : ranks) osr = std::max(osr, r);
  return {ranks, osr};
}

std::pair<std::vector<int>, int> schmidt_rank(const PureState& psi, double tol) {
  std::vector<int> ranks = ranks_per_cut(psi.amplitudes, psi.local_dims, tol);
  int sr = 1;
  for (int r : ranks) sr = std::max(sr, r);
  return {ranks, sr};
}

double trace_norm(const Mat& a) {
  if (!a.allFinite()) throw std::invalid_argument("trace_norm: non-finite entries");
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

MPSPurification purification_from_dense(const Vec& psi,
                                        const std::vector<int>& phys_dims,
                                        const std::vector<int>& anc_dims,
                                        double tol) {
  const int n = static_cast<int>(phys_dims.size());
  if (anc_dims.size() != phys_dims.size())
    throw std::invalid_argument("purification_from_dense: dims mismatch");
  std::vector<int> combined(n);
  for (int k = 0; k < n; ++k) combined[k] = phys_dims[k] * anc_dims[k];
  Mps mps = mps_from_dense(psi, combined, tol);

  MPSPurification out;
  out.phys_dims = phys_dims;
  out.anc_dims = anc_dims;
  out.schmidt_ranks = mps.ranks;
  for (int k = 0; k < n; ++k) {
    const Tensor4& s = mps.sites[k];
    Tensor4 t(s.d0, phys_dims[k], anc_dims[k], s.d3);
    for (int a = 0; a < s.d0; ++a)
      for (int i = 0; i < phys_dims[k]; ++i)
        for (int z = 0; z < anc_dims[k]; ++z)
          for (int b = 0; b < s.d3; ++b)
            t.at(a, i, z, b) = s.at(a, i * anc_dims[k] + z, 0, b);
    out.sites.push_back(std::move(t));
  }
  return out;
}

Vec purification_to_dense(const MPSPurification& psi) {
  Mps mps;
  const int n = psi.n_sites();
  for (int k = 0; k < n; ++k) {
    const Tensor4& t = psi.sites[k];
    mps.dims.push_back(t.d1 * t.d2);
    Tensor4 s(t.d0, t.d1 * t.d2, 1, t.d3);
    for (int a = 0; a < t.d0; ++a)
      for (int i = 0; i < t.d1; ++i)
        for (int z = 0; z < t.d2; ++z)
          for (int b = 0; b < t.d3; ++b)
            s.at(a, i * t.d2 + z, 0, b) = t.at(a, i, z, b);
    mps.sites.push_back(std::move(s));
  }
  mps.ranks = psi.schmidt_ranks;
  return mps_to_dense(mps);
}

DensityMatrix trace_out_ancilla(const MPSPurification& psi) {
  const int n = psi.n_sites();
  const int d = psi.phys_dims.empty() ? 1 : psi.phys_dims[0];
  for (int pk : psi.phys_dims)
    if (pk != d)
      throw std::invalid_argument("trace_out_ancilla: non-uniform physical dims");
  const long sys = ipow(d, n);
  check_dense_cap(sys, "trace_out_ancilla");
  long anc = 1;
  for (int a : psi.anc_dims) anc *= a;

  Vec full = purification_to_dense(psi);
  // Sort the full amplitudes into a (system) x (ancilla) matrix.
  Mat m = Mat::Zero(sys, anc);
  const long total = full.size();
  std::vector<int> cdims(n);
  for (int k = 0; k < n; ++k) cdims[k] = d * psi.anc_dims[k];
  std::vector<int> fdig(n);
  for (long F = 0; F < total; ++F) {
    long rest = F;
    for (int k = n - 1; k >= 0; --k) {
      fdig[k] = static_cast<int>(rest % cdims[k]);
      rest /= cdims[k];
    }
    long I = 0, A = 0;
    for (int k = 0; k < n; ++k) {
      I = I * d + fdig[k] / psi.anc_dims[k];
      A = A * psi.anc_dims[k] + fdig[k] % psi.anc_dims[k];
    }
    m(I, A) = full(F);
  }
  Mat rho = m * m.adjoint();
  DensityMatrix out;
  out.n_sites = n;
  out.local_dim = d;
  out.data = std::move(rho);
  out.trace = out.data.trace().real();
  return out;
}

int purification_rank(const MPSPurification& psi, double tol) {
  Vec full = purification_to_dense(psi);
  std::vector<int> cdims(psi.n_sites());
  for (int k = 0; k < psi.n_sites(); ++k)
    cdims[k] = psi.phys_dims[k] * psi.anc_dims[k];
  std::vector<int> ranks = ranks_per_cut(full, cdims, tol);
  int r = 1;
  for (int x : ranks) r = std::max(r, x);
  return r;
}

}  // namespace purikit
