#pragma once

#include "purikit/sdp.hpp"
#include "purikit/sos_method.hpp"
#include "purikit/spectra.hpp"

namespace purikit {

struct FitResult {
  int k = 1;
  GramPolynomial gram;
  double distance = 0.0;   // sum_i |lambda_i - p(lambda_i)| incl. zero modes
  double raw_trace = 0.0;  // sum_i p(lambda_i) over the ambient space
  SdpStatus solver_status = SdpStatus::numerical_failure;
  double solver_objective = 0.0;
  int iterations = 0;
};

struct DecayFit {
  double A = 0.0;
  double B = 0.0;
  double residual = 0.0;  // rms of the log-linear fit
  std::pair<int, int> k_range{0, 0};
  int n_points = 0;
};

FitResult fit_sos(const Spectrum& spec, int k, long ambient_dim,
                  const SdpOptions& opts = {}, bool rescale = true);

std::vector<FitResult> distance_curve(const Spectrum& spec, int k_min,
                                      int k_max, long ambient_dim,
                                      const SdpOptions& opts = {});

/// Least squares on (k, ln distance); points below noise_floor are dropped.
DecayFit fit_exponential(const std::vector<std::pair<int, double>>& curve,
                         std::pair<int, int> k_range,
                         double noise_floor = 1e-9);

std::vector<std::pair<int, double>> curve_points(
    const std::vector<FitResult>& fits);

struct RescaleReport {
  double dist_rescaled = 0.0;
  double dist_plain = 0.0;
  double cond_rescaled = 0.0;  // condition estimate of the Vandermonde data
  double cond_plain = 0.0;
  bool rescaled_not_worse = false;  // within 1e-8
};

RescaleReport rescale_check(const Spectrum& spec, int k = 3);

}  // namespace purikit
