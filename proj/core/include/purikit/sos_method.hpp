#pragma once

#include "purikit/spectra.hpp"
#include "purikit/types.hpp"

namespace purikit {

enum class GramOrigin { exact, lagrange, exp_ansatz, sdp };

const char* gram_origin_name(GramOrigin o);

/// Sos polynomial p(lambda) = v_k(lambda)^T R v_k(lambda) with R PSD.
struct GramPolynomial {
  int k = 1;
  Mat gram;  // k x k, Hermitian PSD (usually real)
  GramOrigin origin = GramOrigin::exact;
};

struct SosDecomposition {
  RMat rows;  // r x k; row u holds the coefficients of y_u
  int rank = 0;
};

RVec vandermonde(double lam, int k);

GramPolynomial exact_gram(const Spectrum& spec, double tol = 1e-10);

double eval_poly(const GramPolynomial& gp, double lam);

SosDecomposition sos_decompose(const GramPolynomial& gp);

GramPolynomial real_reduce(const GramPolynomial& gp);

GramPolynomial lagrange_squared(const std::vector<double>& points);

GramPolynomial exp_ansatz(const Spectrum& spec, int k);

MPSPurification build_purifying_state(const DensityMatrix& rho,
                                      const GramPolynomial& gp,
                                      double tol = 1e-9);

Spectrum sigma_of_poly(const Spectrum& spec, const GramPolynomial& gp);

double sos_distance(const Spectrum& spec, const GramPolynomial& gp,
                    long ambient_dim);

struct RankBound {
  unsigned long long value = 0;
  bool saturated = false;
};

RankBound sos_rank_bound(int D, int k);

}  // namespace purikit
