#include "purikit/counterexamples.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace purikit {

namespace {

constexpr double kPi = std::numbers::pi;

int log2_exact(int t, const char* where) {
  int m = 0;
  int v = t;
  while (v > 1) {
    if (v % 2 != 0)
      throw std::invalid_argument(std::string(where) +
                                  ": t must be a power of 2");
    v /= 2;
    ++m;
  }
  if (t < 2) throw std::invalid_argument(std::string(where) + ": t too small");
  return m;
}

int rank_at(const RMat& a, double tol) {
  Eigen::JacobiSVD<RMat> svd(a);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (smax <= 0.0) return 0;
  int r = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * smax) ++r;
  return r;
}

}  // namespace

void SlackMatrix::validate(double tol) const {
  if (entries.rows() != t || entries.cols() != t)
    throw std::runtime_error("SlackMatrix: shape mismatch");
  if (entries.minCoeff() < -1e-12)
    throw std::runtime_error("SlackMatrix: negative slack entry");
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j)
      if (std::abs(entries(i, j) - circulant_row((j - i + t) % t)) > tol)
        throw std::runtime_error("SlackMatrix: circulant property violated");
}

SlackMatrix tgon_slack(int t) {
  if (t < 3) throw std::invalid_argument("tgon_slack: t >= 3 required");
  // Vertices v_i on the unit circle; facet j supports the edge (v_j, v_j+1)
  // with outward unit normal at angle 2 pi (j + 1/2) / t and offset cos(pi/t)
  // (the inradius). Slack of vertex i against facet j:
  //   S(i, j) = cos(pi/t) - cos(2 pi (i - j)/t - pi/t),
  // a function of (j - i) mod t only, hence circulant.
  RVec row(t);
  for (int e = 0; e < t; ++e)
    row(e) = std::cos(kPi / t) - std::cos(2.0 * kPi * e / t + kPi / t);
  double min_nz = 0.0;
  double vmax = row.maxCoeff();
  for (int e = 0; e < t; ++e) {
    if (std::abs(row(e)) < 1e-12 * vmax) row(e) = 0.0;
    if (row(e) > 0.0 && (min_nz == 0.0 || row(e) < min_nz)) min_nz = row(e);
  }
  SlackMatrix s;
  s.t = t;
  s.normalization = 1.0 / min_nz;
  s.circulant_row = row * s.normalization;
  s.entries.resize(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) s.entries(i, j) = s.circulant_row((j - i + t) % t);
  return s;
}

DensityMatrix rho_t(const SlackMatrix& slack, bool normalize, Layout layout) {
  const int t = slack.t;
  const long dim = static_cast<long>(t) * t;
  check_dense_cap(dim, "rho_t");
  int n_sites = 2;
  int local_dim = t;
  if (layout == Layout::binary) {
    int m = log2_exact(t, "rho_t");
    n_sites = 2 * m;
    local_dim = 2;
  }
  Mat d = Mat::Zero(dim, dim);
  double total = slack.entries.sum();
  double scale = normalize ? 1.0 / total : 1.0;
  for (int x = 0; x < t; ++x)
    for (int y = 0; y < t; ++y) {
      long idx = static_cast<long>(x) * t + y;
      d(idx, idx) = scale * slack.entries(x, y);
    }
  return DensityMatrix::from_dense(std::move(d), n_sites, local_dim, normalize);
}

std::vector<cx> circulant_eigenvalues(const SlackMatrix& slack, double tol) {
  const int t = slack.t;
  double vmax = slack.entries.cwiseAbs().maxCoeff();
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j)
      if (std::abs(slack.entries(i, j) - slack.circulant_row((j - i + t) % t)) >
          tol * std::max(1.0, vmax))
        throw std::invalid_argument("circulant_eigenvalues: not circulant");
  // lambda_a = sum_e row(e) exp(-2 pi i a e / t), so that
  // S(i, j) = (1/t) sum_a lambda_a exp(+2 pi i a (j - i)/t).
  std::vector<cx> lam(t);
  for (int a = 0; a < t; ++a) {
    cx acc(0.0, 0.0);
    for (int e = 0; e < t; ++e) {
      double ph = -2.0 * kPi * a * e / t;
      acc += slack.circulant_row(e) * cx(std::cos(ph), std::sin(ph));
    }
    lam[a] = acc;
  }
  return lam;
}

MPDO fourier_mpo(int m) {
  if (m < 1) throw std::invalid_argument("fourier_mpo: m >= 1 required");
  const int t = 1 << m;
  SlackMatrix slack = tgon_slack(t);
  std::vector<cx> lam = circulant_eigenvalues(slack);
  // The slack row has Fourier support {0, 1, t-1} only; those three modes
  // are the internal index of the MPO.
  const int modes[3] = {0, 1, t - 1};

  MPDO mpo;
  mpo.local_dim = 2;
  const int n_sites = 2 * m;
  for (int s = 0; s < n_sites; ++s) {
    const bool is_x = s < m;
    const int k = is_x ? s + 1 : s - m + 1;  // bit position, MSB first
    const int dl = (s == 0) ? 1 : 3;
    const int dr = (s == n_sites - 1) ? 1 : 3;
    Tensor4 ten(dl, 2, 2, dr);
    for (int a = 0; a < 3; ++a) {
      for (int bit = 0; bit < 2; ++bit) {
        double ph = 2.0 * kPi * modes[a] * bit / std::pow(2.0, k);
        cx val = is_x ? cx(std::cos(ph), -std::sin(ph))
                      : cx(std::cos(ph), std::sin(ph));
        if (s == m - 1) val *= lam[modes[a]] / static_cast<double>(t);
        ten.at(dl == 1 ? 0 : a, bit, bit, dr == 1 ? 0 : a) = val;
      }
    }
    mpo.sites.push_back(std::move(ten));
  }
  mpo.bond_dims.assign(n_sites - 1, 3);
  return mpo;
}

namespace {

std::vector<int> phi_dims(const SlackMatrix& slack, Layout layout) {
  if (layout == Layout::flat)
    return {slack.t, slack.t, slack.t, slack.t};
  int m = log2_exact(slack.t, "phi_states");
  return std::vector<int>(2 * m, 4);
}

// Global row-major index of the amplitude |x, x, y, y> in the given layout.
long phi_index(int x, int y, int t, Layout layout) {
  if (layout == Layout::flat) {
    long lt = t;
    return ((static_cast<long>(x) * lt + x) * lt + y) * lt + y;
  }
  int m = 0;
  for (int v = t; v > 1; v /= 2) ++m;
  long idx = 0;
  for (int k = 0; k < m; ++k) {
    int bit = (x >> (m - 1 - k)) & 1;
    idx = idx * 4 + 3 * bit;  // (bit, bit) pair inside a dimension-4 site
  }
  for (int k = 0; k < m; ++k) {
    int bit = (y >> (m - 1 - k)) & 1;
    idx = idx * 4 + 3 * bit;
  }
  return idx;
}

}  // namespace

std::pair<PureState, PureState> phi_states(const SlackMatrix& slack,
                                           Layout layout) {
  const int t = slack.t;
  check_dense_cap(static_cast<long>(t) * t, "phi_states");
  std::vector<int> dims = phi_dims(slack, layout);
  long dim = 1;
  for (int d : dims) dim *= d;
  PureState phi, phi_sq;
  phi.local_dims = dims;
  phi_sq.local_dims = dims;
  phi.amplitudes = Vec::Zero(dim);
  phi_sq.amplitudes = Vec::Zero(dim);
  for (int x = 0; x < t; ++x)
    for (int y = 0; y < t; ++y) {
      long idx = phi_index(x, y, t, layout);
      double s = slack.entries(x, y);
      phi.amplitudes(idx) = std::sqrt(s);
      phi_sq.amplitudes(idx) = s;
    }
  return {std::move(phi), std::move(phi_sq)};
}

std::vector<int> phi_cut_ranks(const SlackMatrix& slack, bool squared,
                               Layout layout, double tol) {
  const int t = slack.t;
  std::vector<int> dims = phi_dims(slack, layout);
  const int n = static_cast<int>(dims.size());
  std::vector<int> ranks;
  for (int cut = 1; cut < n; ++cut) {
    long left_dim = 1;
    for (int s = 0; s < cut; ++s) left_dim *= dims[s];
    long right_dim = 1;
    for (int s = cut; s < n; ++s) right_dim *= dims[s];
    // Compress the t^2-sparse support instead of reshaping a dense vector.
    std::map<long, int> rows, cols;
    std::vector<std::tuple<int, int, double>> nz;
    for (int x = 0; x < t; ++x)
      for (int y = 0; y < t; ++y) {
        double v = slack.entries(x, y);
        if (v <= 0.0) continue;
        if (!squared) v = std::sqrt(v);
        long idx = phi_index(x, y, t, layout);
        long rkey = idx / right_dim;
        long ckey = idx % right_dim;
        int ri = static_cast<int>(
            rows.emplace(rkey, static_cast<int>(rows.size())).first->second);
        int ci = static_cast<int>(
            cols.emplace(ckey, static_cast<int>(cols.size())).first->second);
        nz.emplace_back(ri, ci, v);
      }
    RMat mat = RMat::Zero(static_cast<long>(rows.size()),
                          static_cast<long>(cols.size()));
    for (auto [ri, ci, v] : nz) mat(ri, ci) += v;
    ranks.push_back(rank_at(mat, tol));
  }
  return ranks;
}

PsdFactors psd_factorization_search(const RMat& S, int r, int restarts,
                                    std::uint64_t seed) {
  if (S.minCoeff() < -1e-12)
    throw std::invalid_argument("psd_factorization_search: S must be >= 0");
  if (r < 1) throw std::invalid_argument("psd_factorization_search: r >= 1");
  const long p = S.rows();
  const long q = S.cols();
  const double s_norm = S.norm();
  const double target = 1e-6 * std::max(s_norm, 1e-30);

  PsdFactors best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<RMat> best_A, best_B;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double init_scale =
      std::pow(std::max(S.mean(), 1e-12), 0.25) / std::pow(r, 0.25);

  for (int attempt = 0; attempt < std::max(restarts, 1); ++attempt) {
    // E_x = A_x A_x^T, F_y = B_y B_y^T; minimize
    //   f = sum_{x,y} (|B_y^T A_x|_F^2 - S(x,y))^2
    // by gradient descent on the Cholesky-like factors A, B with
    // backtracking. PSD of the returned factors is automatic.
    std::vector<RMat> A(p), B(q);
    for (long x = 0; x < p; ++x) {
      A[x].resize(r, r);
      for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) A[x](i, j) = init_scale * gauss(rng);
    }
    for (long y = 0; y < q; ++y) {
      B[y].resize(r, r);
      for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) B[y](i, j) = init_scale * gauss(rng);
    }

    auto residuals = [&](RMat& err) {
      err.resize(p, q);
      for (long x = 0; x < p; ++x)
        for (long y = 0; y < q; ++y)
          err(x, y) = (B[y].transpose() * A[x]).squaredNorm() - S(x, y);
    };
    RMat err;
    residuals(err);
    double f = err.squaredNorm();
    double step = 1e-2;

    for (int it = 0; it < 4000 && f > target * target; ++it) {
      std::vector<RMat> gA(p, RMat::Zero(r, r)), gB(q, RMat::Zero(r, r));
      std::vector<RMat> E(p), F(q);
      for (long x = 0; x < p; ++x) E[x] = A[x] * A[x].transpose();
      for (long y = 0; y < q; ++y) F[y] = B[y] * B[y].transpose();
      for (long x = 0; x < p; ++x)
        for (long y = 0; y < q; ++y) {
          gA[x] += 4.0 * err(x, y) * (F[y] * A[x]);
          gB[y] += 4.0 * err(x, y) * (E[x] * B[y]);
        }
      double gnorm2 = 0.0;
      for (long x = 0; x < p; ++x) gnorm2 += gA[x].squaredNorm();
      for (long y = 0; y < q; ++y) gnorm2 += gB[y].squaredNorm();
      if (gnorm2 < 1e-30) break;

      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt) {
        std::vector<RMat> An(p), Bn(q);
        for (long x = 0; x < p; ++x) An[x] = A[x] - step * gA[x];
        for (long y = 0; y < q; ++y) Bn[y] = B[y] - step * gB[y];
        RMat err_n(p, q);
        for (long x = 0; x < p; ++x)
          for (long y = 0; y < q; ++y)
            err_n(x, y) =
                (Bn[y].transpose() * An[x]).squaredNorm() - S(x, y);
        double fn = err_n.squaredNorm();
        if (fn < f) {
          A = std::move(An);
          B = std::move(Bn);
          err = std::move(err_n);
          f = fn;
          step *= 1.2;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }

    double res = std::sqrt(f);
    if (res < best.residual) {
      best.residual = res;
      best_A = A;
      best_B = B;
    }
    if (best.residual <= target) break;
  }

  // Levenberg-Marquardt polish of the best attempt. Gradient descent slows
  // to a crawl near solutions where factor overlaps must vanish (the
  // residual is quartic in the vanishing entries); the damped normal
  // equations cut through that plateau. H = J^T J is assembled blockwise:
  // residual (x, y) only touches the A_x and B_y parameter blocks.
  if (best.residual > target && !best_A.empty()) {
    std::vector<RMat>& A = best_A;
    std::vector<RMat>& B = best_B;
    const long blk = static_cast<long>(r) * r;
    const long na = p * blk, n = na + q * blk;
    RMat err(p, q);
    for (long x = 0; x < p; ++x)
      for (long y = 0; y < q; ++y)
        err(x, y) = (B[y].transpose() * A[x]).squaredNorm() - S(x, y);
    double f = err.squaredNorm();
    double mu = 1e-4 * std::max(1.0, f);
    for (int it = 0; it < 120 && f > target * target; ++it) {
      std::vector<RMat> E(p), F(q);
      for (long x = 0; x < p; ++x) E[x] = A[x] * A[x].transpose();
      for (long y = 0; y < q; ++y) F[y] = B[y] * B[y].transpose();
      RMat H = RMat::Zero(n, n);
      RVec g = RVec::Zero(n);
      for (long x = 0; x < p; ++x)
        for (long y = 0; y < q; ++y) {
          RMat dA = 2.0 * (F[y] * A[x]);
          RMat dB = 2.0 * (E[x] * B[y]);
          RVec va = Eigen::Map<RVec>(dA.data(), blk);
          RVec vb = Eigen::Map<RVec>(dB.data(), blk);
          H.block(x * blk, x * blk, blk, blk) += va * va.transpose();
          H.block(na + y * blk, na + y * blk, blk, blk) += vb * vb.transpose();
          H.block(x * blk, na + y * blk, blk, blk) += va * vb.transpose();
          H.block(na + y * blk, x * blk, blk, blk) += vb * va.transpose();
          g.segment(x * blk, blk) += err(x, y) * va;
          g.segment(na + y * blk, blk) += err(x, y) * vb;
        }
      bool accepted = false;
      for (int bt = 0; bt < 25; ++bt) {
        RMat Hd = H;
        Hd.diagonal().array() += mu;
        RVec d = Hd.ldlt().solve(-g);
        std::vector<RMat> An(p), Bn(q);
        for (long x = 0; x < p; ++x)
          An[x] = A[x] + Eigen::Map<const RMat>(d.data() + x * blk, r, r);
        for (long y = 0; y < q; ++y)
          Bn[y] =
              B[y] + Eigen::Map<const RMat>(d.data() + na + y * blk, r, r);
        RMat err_n(p, q);
        for (long x = 0; x < p; ++x)
          for (long y = 0; y < q; ++y)
            err_n(x, y) =
                (Bn[y].transpose() * An[x]).squaredNorm() - S(x, y);
        double fn = err_n.squaredNorm();
        if (fn < f) {
          A = std::move(An);
          B = std::move(Bn);
          err = std::move(err_n);
          f = fn;
          mu = std::max(mu * 0.3, 1e-14);
          accepted = true;
          break;
        }
        mu *= 4.0;
      }
      if (!accepted) break;
    }
    best.residual = std::sqrt(f);
  }

  for (long x = 0; x < p; ++x)
    best.E.push_back((best_A[x] * best_A[x].transpose()).cast<cx>());
  for (long y = 0; y < q; ++y)
    best.F.push_back((best_B[y] * best_B[y].transpose()).cast<cx>());
  best.success = best.residual <= target;
  return best;
}

}  // namespace purikit
