#pragma once

#include "purikit/types.hpp"

namespace purikit {

enum class DistKind { uniform, equally_spaced, random_dist, one_fixed, exponential };

const char* dist_kind_name(DistKind k);
DistKind dist_kind_from_name(const std::string& name);

struct DistParams {
  double b = 1.0;                            // exponential decay rate
  std::uint64_t seed = 0;                    // random distribution
  std::pair<double, double> interval{0.0, 1.0};  // random values drawn from (lo, hi]
};

struct Spectrum {
  std::vector<double> values;  // nonzero eigenvalues, non-increasing
  int n_nonzero = 0;
  long ambient_dim = 0;        // d^N; zeros are implicit
  int m_distinct = 0;          // distinct nonnegative values, 0 counted when rank-deficient
  bool normalized = false;

  double sum() const;
  double value_or_zero(long i) const;  // i in [0, ambient_dim)
  void validate() const;
};

Spectrum make_distribution(DistKind kind, int n, const DistParams& params = {});

int distinct_count(const Spectrum& spec, double tol, long ambient_dim);

/// Representatives of each distinctness class (largest member), non-increasing,
/// with a trailing 0 when the spectrum is rank-deficient in its ambient space.
std::vector<double> distinct_representatives(const Spectrum& spec, double tol = 1e-10);

Mat haar_unitary(long dim, std::uint64_t seed);

DensityMatrix assemble_density(const Spectrum& spec, const Mat& basis,
                               int n_sites, int local_dim);

/// Sorted spectrum of a density matrix; n counts eigenvalues > tol * max.
Spectrum spectrum_of(const DensityMatrix& rho, double tol = 1e-9);

}  // namespace purikit
