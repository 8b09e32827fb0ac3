#include "purikit/sos_sdp_fit.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace purikit {

namespace {

// Bring the solver's Gram (expressed in lambda/scale nodes) back to raw
// lambda: p(lambda) = v(mu)^T R v(mu) with mu = lambda/scale equals
// v(lambda)^T (S R S) v(lambda), S = diag(scale^-j).
GramPolynomial unscale_gram(const RMat& R, int k, double scale) {
  GramPolynomial gp;
  gp.k = k;
  gp.origin = GramOrigin::sdp;
  RMat raw(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      raw(i, j) = R(i, j) * std::pow(scale, -static_cast<double>(i + j));
  gp.gram = raw.cast<cx>();
  return gp;
}

}  // namespace

FitResult fit_sos(const Spectrum& spec, int k, long ambient_dim,
                  const SdpOptions& opts, bool rescale) {
  SdpProblem problem = build_standard_form(spec, k, ambient_dim, rescale);
  SdpSolution sol = solve(problem, opts);
  FitResult res;
  res.k = k;
  res.solver_status = sol.status;
  res.solver_objective = sol.objective;
  res.iterations = sol.iterations;
  res.gram = unscale_gram(sol.R, k, problem.scale);
  res.distance = sos_distance(spec, res.gram, ambient_dim);
  double tr = 0.0;
  for (int i = 0; i < spec.n_nonzero; ++i)
    tr += eval_poly(res.gram, spec.values[i]);
  tr += (ambient_dim - spec.n_nonzero) * eval_poly(res.gram, 0.0);
  res.raw_trace = tr;
  return res;
}

std::vector<FitResult> distance_curve(const Spectrum& spec, int k_min,
                                      int k_max, long ambient_dim,
                                      const SdpOptions& opts) {
  if (k_min > k_max)
    throw std::invalid_argument("distance_curve: k_min > k_max");
  std::vector<FitResult> out;
  for (int k = k_min; k <= k_max; ++k)
    out.push_back(fit_sos(spec, k, ambient_dim, opts));
  return out;
}

std::vector<std::pair<int, double>> curve_points(
    const std::vector<FitResult>& fits) {
  std::vector<std::pair<int, double>> pts;
  pts.reserve(fits.size());
  for (const FitResult& f : fits) pts.emplace_back(f.k, f.distance);
  return pts;
}

DecayFit fit_exponential(const std::vector<std::pair<int, double>>& curve,
                         std::pair<int, int> k_range, double noise_floor) {
  std::vector<std::pair<double, double>> pts;  // (k, ln d)
  for (auto [k, d] : curve) {
    if (k < k_range.first || k > k_range.second) continue;
    if (d <= 0.0)
      throw std::invalid_argument(
          "fit_exponential: nonpositive distance in fit range");
    if (d < noise_floor) continue;  // solver noise floor, excluded from log fit
    pts.emplace_back(static_cast<double>(k), std::log(d));
  }
  if (pts.size() < 2)
    throw std::invalid_argument("fit_exponential: fewer than 2 usable points");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(pts.size());
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;

  DecayFit fit;
  fit.A = std::exp(intercept);
  fit.B = -slope;
  fit.k_range = k_range;
  fit.n_points = static_cast<int>(pts.size());
  double ss = 0.0;
  for (auto [x, y] : pts) {
    double e = y - (intercept + slope * x);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

RescaleReport rescale_check(const Spectrum& spec, int k) {
  RescaleReport rep;
  long ambient = spec.ambient_dim > 0 ? spec.ambient_dim : spec.n_nonzero;
  FitResult scaled = fit_sos(spec, k, ambient, {}, true);
  FitResult plain = fit_sos(spec, k, ambient, {}, false);
  rep.dist_rescaled = scaled.distance;
  rep.dist_plain = plain.distance;

  auto cond_of = [&](bool rescale) {
    SdpProblem p = build_standard_form(spec, k, ambient, rescale);
    Eigen::JacobiSVD<RMat> svd(p.V);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  };
  rep.cond_rescaled = cond_of(true);
  rep.cond_plain = cond_of(false);
  rep.rescaled_not_worse = rep.dist_rescaled <= rep.dist_plain + 1e-8;
  return rep;
}

}  // namespace purikit
