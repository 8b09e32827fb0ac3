#pragma once

#include "purikit/spectra.hpp"
#include "purikit/types.hpp"

namespace purikit {

/// Audit record of the eigenbasis purification: which product-basis labels
/// were selected, the coefficient matrix f_{i a} = lambda_i <phi_i|p_a> and
/// its inverse g, the per-eigenvector Schmidt ranks, and the D*n bound.
struct EigenCertificate {
  std::vector<long> product_indices;  // computational-basis labels x_a
  Mat f_matrix;                       // n x n
  Mat g_matrix;                       // inverse of f
  std::vector<int> per_eigenvector_sr;
  int osr = 0;       // measured operator Schmidt rank D of the input
  int n_rank = 0;    // rank n of the input
  int bound_Dn = 0;  // D * n, bound on each SR(phi_i)
};

std::vector<long> select_product_basis(const DensityMatrix& rho, double tol);

std::pair<MPSPurification, EigenCertificate> eigen_purification(
    const DensityMatrix& rho, double tol = 1e-9);

/// Normalized truncation to the s largest eigenvalues, with the achieved
/// trace distance (equals 2 * tail weight for normalized input).
std::pair<DensityMatrix, double> truncate_spectrum(const DensityMatrix& rho,
                                                   int s, double tol = 1e-9);

/// Closed-form purification-rank bounds per eigenvalue distribution for a
/// target trace-distance eps; b is the exponential decay rate.
double bound_table(DistKind kind, int D, double eps, int n, double b = 1.0);

}  // namespace purikit
