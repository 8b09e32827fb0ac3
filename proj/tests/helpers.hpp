#pragma once

#include <random>

#include "purikit/spectra.hpp"
#include "purikit/tensor_core.hpp"
#include "purikit/types.hpp"

namespace test_helpers {

using namespace purikit;

// Random normalized density matrix on `sites` qudits via a random spectrum
// of the given rank and a Haar basis.
inline DensityMatrix random_density(int sites, int local_dim, int rank,
                                    std::uint64_t seed) {
  long dim = ipow(local_dim, sites);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> v(rank);
  double s = 0.0;
  for (double& x : v) {
    x = u(rng);
    s += x;
  }
  for (double& x : v) x /= s;
  std::sort(v.begin(), v.end(), std::greater<double>());
  Spectrum spec;
  spec.values = v;
  spec.n_nonzero = rank;
  spec.ambient_dim = dim;
  spec.normalized = true;
  spec.m_distinct = distinct_count(spec, 1e-10, dim);
  return assemble_density(spec, haar_unitary(dim, seed + 1), sites, local_dim);
}

// Random normalized product pure state on `sites` qudits.
inline Vec random_product_state(int sites, int local_dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec psi = Vec::Ones(1);
  for (int s = 0; s < sites; ++s) {
    Vec site(local_dim);
    for (int i = 0; i < local_dim; ++i) site(i) = cx(g(rng), g(rng));
    site /= site.norm();
    Vec next(psi.size() * local_dim);
    for (long a = 0; a < psi.size(); ++a)
      for (int i = 0; i < local_dim; ++i)
        next(a * local_dim + i) = psi(a) * site(i);
    psi = std::move(next);
  }
  return psi;
}

// Mixture of `n` random product states: operator Schmidt rank <= n.
inline DensityMatrix product_mixture(int sites, int local_dim, int n,
                                     std::uint64_t seed) {
  long dim = ipow(local_dim, sites);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Mat rho = Mat::Zero(dim, dim);
  double total = 0.0;
  std::vector<double> w(n);
  for (double& x : w) {
    x = u(rng);
    total += x;
  }
  for (int i = 0; i < n; ++i) {
    Vec psi = random_product_state(sites, local_dim, rng);
    rho += (w[i] / total) * (psi * psi.adjoint());
  }
  return DensityMatrix::from_dense(std::move(rho), sites, local_dim, true);
}

}  // namespace test_helpers
