#pragma once

#include "purikit/spectra.hpp"
#include "purikit/types.hpp"

namespace purikit {

/// Standard-form data for the sos fitting problem:
///   min <C, X>,  X = diag(z) (+) R,  C = I (+) 0,
///   <A_j, X> <= b_j with A_j = diag(0..-1..0) (+) -/+ |v_j><v_j|,
///   b = (-lambda_1..-lambda_P, lambda_1..lambda_P).
struct SdpProblem {
  long ambient = 0;  // P = d^N, number of scalar slack variables
  int k = 1;         // PSD block size
  std::vector<double> lambdas;  // length P, non-increasing, zeros included
  double scale = 1.0;           // nodes are lambda_i / scale
  RMat V;                       // k x P, column i = v_k(lambda_i / scale)

  long n_constraints() const { return 2 * ambient; }
  RVec b() const;

  struct Constraint {
    long slack_index;  // position of the -1 in the scalar block
    RMat psd_block;    // k x k block of A_j
  };
  Constraint constraint(long j) const;
};

enum class SdpStatus { optimal, max_iter, infeasible, numerical_failure };

const char* sdp_status_name(SdpStatus s);

struct SdpSolution {
  RVec z;
  RMat R;  // in the rescaled-node basis of the problem
  double objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::numerical_failure;
};

struct SdpOptions {
  double tol_gap = 1e-7;
  double tol_feas = 1e-7;
  int max_iter = 200;
  std::uint64_t seed = 0;
};

SdpProblem build_standard_form(const Spectrum& spec, int k, long ambient_dim,
                               bool rescale = true);

/// Interior primal point (z, R) with every inequality strict; requires k < m.
std::pair<RVec, RMat> strictly_feasible_point(const SdpProblem& problem,
                                              const Spectrum& spec);

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts = {});

}  // namespace purikit
