#include "purikit/sdp.hpp"

#include "purikit/sos_method.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace purikit {

const char* sdp_status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::numerical_failure: return "numerical_failure";
  }
  return "?";
}

RVec SdpProblem::b() const {
  RVec out(2 * ambient);
  for (long i = 0; i < ambient; ++i) {
    out(i) = -lambdas[i];
    out(ambient + i) = lambdas[i];
  }
  return out;
}

SdpProblem::Constraint SdpProblem::constraint(long j) const {
  if (j < 0 || j >= 2 * ambient)
    throw std::out_of_range("SdpProblem::constraint");
  Constraint c;
  c.slack_index = j % ambient;
  RVec v = V.col(j % ambient);
  c.psd_block = (j < ambient ? -1.0 : 1.0) * (v * v.transpose());
  return c;
}

SdpProblem build_standard_form(const Spectrum& spec, int k, long ambient_dim,
                               bool rescale) {
  if (k < 1) throw std::invalid_argument("build_standard_form: k >= 1");
  if (ambient_dim < spec.n_nonzero)
    throw std::invalid_argument("build_standard_form: ambient < n");
  SdpProblem p;
  p.ambient = ambient_dim;
  p.k = k;
  p.lambdas.resize(ambient_dim, 0.0);
  for (int i = 0; i < spec.n_nonzero; ++i) p.lambdas[i] = spec.values[i];
  p.scale = 1.0;
  if (rescale && !spec.values.empty() && spec.values[0] > 0.0)
    p.scale = spec.values[0];
  p.V.resize(k, ambient_dim);
  for (long i = 0; i < ambient_dim; ++i)
    p.V.col(i) = vandermonde(p.lambdas[i] / p.scale, k);
  return p;
}

std::pair<RVec, RMat> strictly_feasible_point(const SdpProblem& problem,
                                              const Spectrum& spec) {
  const int k = problem.k;
  std::vector<double> reps = distinct_representatives(spec);
  const int m = static_cast<int>(reps.size());
  if (k >= m)
    throw std::invalid_argument(
        "strictly_feasible_point: requires k < m distinct eigenvalues");
  // Spread the interpolation nodes over the distinct values; consecutive
  // nodes (e.g. equally spaced spectra) make the biorthogonal basis blow up.
  RMat Vk(k, k);
  for (int i = 0; i < k; ++i) {
    int idx = (k == 1) ? 0
                       : static_cast<int>(std::llround(
                             static_cast<double>(i) * (m - 1) / (k - 1)));
    Vk.col(i) = vandermonde(reps[idx] / problem.scale, k);
  }
  Eigen::FullPivLU<RMat> lu(Vk.transpose());
  if (!lu.isInvertible())
    throw std::invalid_argument(
        "strictly_feasible_point: Vandermonde vectors dependent");
  RMat W = lu.solve(RMat::Identity(k, k));
  RMat R = W * W.transpose();

  const long P = problem.ambient;
  RVec z(P);
  for (long i = 0; i < P; ++i) {
    double q = problem.V.col(i).transpose() * R * problem.V.col(i);
    z(i) = std::abs(problem.lambdas[i] - q) + 1.0;
  }
  return {z, R};
}

namespace {

// Largest alpha in (0, 1] keeping x + alpha dx > 0 componentwise, damped.
double pos_step(const RVec& x, const RVec& dx, double tau) {
  double a = 1.0 / tau;
  for (long i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  return std::min(1.0, tau * a);
}

// Largest alpha keeping X + alpha dX positive definite, damped.
double psd_step(const RMat& X, const RMat& dX, double tau) {
  Eigen::LLT<RMat> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  RMat L = llt.matrixL();
  RMat M = L.triangularView<Eigen::Lower>().solve(dX);
  M = L.triangularView<Eigen::Lower>().solve(M.transpose()).transpose().eval();
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (M + M.transpose()),
                                         Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return 1.0;
  return std::min(1.0, -tau / lmin);
}

RMat sym(const RMat& a) { return 0.5 * (a + a.transpose()); }

struct Direction {
  RVec dz, ds, dy;
  RMat dR, dZ;
};

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts) {
  const long P = problem.ambient;
  const int k = problem.k;
  const RMat& V = problem.V;  // k x P
  RVec lam(P);
  for (long i = 0; i < P; ++i) lam(i) = problem.lambdas[i];
  const double lam_scale = 1.0 + lam.cwiseAbs().maxCoeff();

  // Primal (z, R, s) and dual (y, Z) iterates.
  RVec z(P);
  RMat R;
  {
    // Strictly feasible start when it exists, identity-scaled otherwise.
    Spectrum tmp;
    for (long i = 0; i < P; ++i)
      if (lam(i) > 0.0) tmp.values.push_back(lam(i));
    tmp.n_nonzero = static_cast<int>(tmp.values.size());
    tmp.ambient_dim = P;
    bool ok = false;
    try {
      auto [z0, R0] = strictly_feasible_point(problem, tmp);
      // A badly scaled interior point is worse than a cold start.
      if (R0.norm() <= 1e3) {
        z = z0;
        R = R0;
        ok = true;
      }
    } catch (const std::invalid_argument&) {
    }
    if (!ok) {
      R = RMat::Identity(k, k);
      for (long i = 0; i < P; ++i) {
        double q = V.col(i).transpose() * R * V.col(i);
        z(i) = std::abs(lam(i) - q) + 1.0;
      }
    }
  }
  RVec s(2 * P);
  {
    for (long i = 0; i < P; ++i) {
      double q = V.col(i).transpose() * R * V.col(i);
      s(i) = z(i) + q - lam(i);
      s(P + i) = z(i) - q + lam(i);
    }
    double smin = s.minCoeff();
    if (smin <= 0.0) s.array() += (1.0 - smin);
  }
  RVec y = RVec::Constant(2 * P, 0.5);
  RMat Z = RMat::Identity(k, k);

  SdpSolution sol;
  const double tau = 0.99;

  auto q_of = [&](const RMat& X) {
    RVec q(P);
    for (long i = 0; i < P; ++i) q(i) = V.col(i).transpose() * X * V.col(i);
    return q;
  };

  // Best iterate seen so far; the path can stall or diverge near the
  // optimum, in which case this is what the caller gets.
  SdpSolution best;
  best.z = z;
  best.R = R;
  double best_err = std::numeric_limits<double>::infinity();
  auto record_best = [&](double pres, double dres, double gap, double pobj,
                         double dobj, int iter) {
    double err = std::max({pres / lam_scale, dres,
                           std::abs(gap) / std::max(1.0, std::abs(pobj))});
    if (err < best_err) {
      best_err = err;
      best.z = z;
      best.R = R;
      best.objective = pobj;
      best.dual_objective = dobj;
      best.duality_gap = gap;
      best.primal_residual = pres;
      best.dual_residual = dres;
      best.iterations = iter;
    }
  };
  auto finish_stalled = [&](SdpStatus hard_status) {
    best.status = best_err <= 1e-5 ? SdpStatus::max_iter : hard_status;
    return best;
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    sol.iterations = iter;
    RVec q = q_of(R);
    RVec rp1(P), rp2(P), rd1(P);
    for (long i = 0; i < P; ++i) {
      rp1(i) = z(i) + q(i) - lam(i) - s(i);
      rp2(i) = z(i) - q(i) + lam(i) - s(P + i);
      rd1(i) = 1.0 - y(i) - y(P + i);
    }
    RMat Rd2 = -Z;
    for (long i = 0; i < P; ++i)
      Rd2 += (y(P + i) - y(i)) * (V.col(i) * V.col(i).transpose());

    double pobj = z.sum();
    double dobj = 0.0;
    for (long i = 0; i < P; ++i) dobj += lam(i) * (y(i) - y(P + i));
    double gap = pobj - dobj;
    double prim_res =
        std::max(rp1.cwiseAbs().maxCoeff(), rp2.cwiseAbs().maxCoeff());
    double dual_res =
        std::max(rd1.cwiseAbs().maxCoeff(), Rd2.cwiseAbs().maxCoeff());

    sol.objective = pobj;
    sol.dual_objective = dobj;
    sol.duality_gap = gap;
    sol.primal_residual = prim_res;
    sol.dual_residual = dual_res;
    record_best(prim_res, dual_res, gap, pobj, dobj, iter);

    if (prim_res <= opts.tol_feas * lam_scale && dual_res <= opts.tol_feas &&
        std::abs(gap) <= opts.tol_gap * std::max(1.0, std::abs(pobj))) {
      sol.status = SdpStatus::optimal;
      sol.z = z;
      sol.R = R;
      return sol;
    }

    double mu = (s.dot(y) + (R.transpose() * Z).trace()) / (2 * P + k);

    Eigen::LLT<RMat> lltZ(Z);
    if (lltZ.info() != Eigen::Success)
      return finish_stalled(SdpStatus::numerical_failure);
    RMat Zinv = lltZ.solve(RMat::Identity(k, k));

    RMat VtRV = V.transpose() * R * V;        // P x P
    RMat VtZiV = V.transpose() * Zinv * V;    // P x P
    RMat M = VtRV.cwiseProduct(VtZiV);

    RVec Ddiag(P);
    for (long i = 0; i < P; ++i)
      Ddiag(i) = s(i) / y(i) + s(P + i) / y(P + i);
    RMat KKT = 4.0 * M;
    KKT.diagonal() += Ddiag;
    // Static regularization: near the optimum the active rows of D vanish
    // and M is rank-deficient (rank <= k^2), so the reduced system needs a
    // floor on its spectrum.
    double reg = 1e-13 * (1.0 + KKT.diagonal().maxCoeff());
    KKT.diagonal().array() += reg;
    Eigen::LDLT<RMat> kkt(KKT);
    if (kkt.info() != Eigen::Success)
      return finish_stalled(SdpStatus::numerical_failure);

    RMat dZ0 = Rd2;
    for (long i = 0; i < P; ++i)
      dZ0 += rd1(i) * (V.col(i) * V.col(i).transpose());

    auto solve_direction = [&](double sigma, const Direction* aff) {
      Direction dir;
      RVec rc(2 * P);
      for (long j = 0; j < 2 * P; ++j) {
        rc(j) = sigma * mu - s(j) * y(j);
        if (aff) rc(j) -= aff->ds(j) * aff->dy(j);
      }
      RMat Rc = sigma * mu * Zinv - R;
      if (aff) Rc -= sym(aff->dR * aff->dZ * Zinv);

      RMat Phi = Rc - sym(R * dZ0 * Zinv);
      RVec qPhi = q_of(Phi);

      RVec rhs(P);
      for (long i = 0; i < P; ++i) {
        rhs(i) = rp2(i) - rp1(i) - 2.0 * qPhi(i) + rc(i) / y(i) -
                 rc(P + i) / y(P + i) + (s(P + i) / y(P + i)) * rd1(i);
      }
      RVec dy1 = kkt.solve(rhs);
      dy1 += kkt.solve(rhs - KKT * dy1);  // one round of iterative refinement

      dir.dy.resize(2 * P);
      for (long i = 0; i < P; ++i) {
        dir.dy(i) = dy1(i);
        dir.dy(P + i) = rd1(i) - dy1(i);
      }
      dir.dZ = dZ0;
      for (long i = 0; i < P; ++i)
        dir.dZ -= 2.0 * dy1(i) * (V.col(i) * V.col(i).transpose());
      dir.dR = Rc - sym(R * dir.dZ * Zinv);
      RVec qdR = q_of(dir.dR);
      dir.ds.resize(2 * P);
      for (long j = 0; j < 2 * P; ++j)
        dir.ds(j) = (rc(j) - s(j) * dir.dy(j)) / y(j);
      dir.dz.resize(P);
      for (long i = 0; i < P; ++i)
        dir.dz(i) = -rp1(i) - qdR(i) + dir.ds(i);
      return dir;
    };

    // Mehrotra predictor-corrector with a fixed-sigma centering fallback.
    Direction aff = solve_direction(0.0, nullptr);
    double ap_aff = std::min(pos_step(s, aff.ds, tau), psd_step(R, aff.dR, tau));
    double ad_aff = std::min(pos_step(y, aff.dy, tau), psd_step(Z, aff.dZ, tau));
    double mu_aff =
        ((s + ap_aff * aff.ds).dot(y + ad_aff * aff.dy) +
         ((R + ap_aff * aff.dR).transpose() * (Z + ad_aff * aff.dZ)).trace()) /
        (2 * P + k);
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
    sigma = std::clamp(sigma, 1e-8, 0.99);

    Direction dir = solve_direction(sigma, &aff);
    double ap = std::min(pos_step(s, dir.ds, tau), psd_step(R, dir.dR, tau));
    double ad = std::min(pos_step(y, dir.dy, tau), psd_step(Z, dir.dZ, tau));
    if (std::min(ap, ad) < 1e-3) {
      dir = solve_direction(0.3, nullptr);
      ap = std::min(pos_step(s, dir.ds, tau), psd_step(R, dir.dR, tau));
      ad = std::min(pos_step(y, dir.dy, tau), psd_step(Z, dir.dZ, tau));
    }
    if (std::min(ap, ad) < 1e-10)
      return finish_stalled(SdpStatus::numerical_failure);

    z += ap * dir.dz;
    R = sym(R + ap * dir.dR);
    s += ap * dir.ds;
    y += ad * dir.dy;
    Z = sym(Z + ad * dir.dZ);
  }

  best.status = SdpStatus::max_iter;
  return best;
}

}  // namespace purikit
