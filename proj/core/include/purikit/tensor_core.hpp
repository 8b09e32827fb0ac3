#pragma once

#include "purikit/types.hpp"

namespace purikit {

/// Internal MPS form of a dense multipartite vector (left, phys, 1, right).
struct Mps {
  std::vector<int> dims;
  std::vector<Tensor4> sites;
  std::vector<int> ranks;  // N-1 bond dimensions
};

Mps mps_from_dense(const Vec& psi, const std::vector<int>& dims, double tol);
Vec mps_to_dense(const Mps& mps);

/// Numerical Schmidt ranks of a dense vector at each linear cut.
std::vector<int> ranks_per_cut(const Vec& psi, const std::vector<int>& dims,
                               double tol);

MPDO mpdo_from_dense(const DensityMatrix& rho, double tol);
DensityMatrix contract_mpdo(const MPDO& mpdo);

std::pair<std::vector<int>, int> operator_schmidt_rank(const DensityMatrix& rho,
                                                       double tol = 1e-9);
std::pair<std::vector<int>, int> schmidt_rank(const PureState& psi,
                                              double tol = 1e-9);

double trace_norm(const Mat& a);

MPSPurification purification_from_dense(const Vec& psi,
                                        const std::vector<int>& phys_dims,
                                        const std::vector<int>& anc_dims,
                                        double tol);
Vec purification_to_dense(const MPSPurification& psi);

DensityMatrix trace_out_ancilla(const MPSPurification& psi);
int purification_rank(const MPSPurification& psi, double tol = 1e-9);

PureState vectorize(const DensityMatrix& rho);

}  // namespace purikit
