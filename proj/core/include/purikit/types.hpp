#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace purikit {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Largest dense dimension d^N the library will materialize.
/// Overridable through the PURIKIT_DENSE_CAP environment variable.
long dense_cap();

void check_dense_cap(long dim, const char* where);

/// Dense Hermitian PSD operator on N sites of local dimension d.
struct DensityMatrix {
  int n_sites = 1;
  int local_dim = 2;
  Mat data;
  double trace = 0.0;
  bool normalized = false;

  long dim() const;

  static DensityMatrix from_dense(Mat m, int n_sites, int local_dim,
                                  bool normalized = false);

  /// Hermiticity / PSD / trace-field consistency checks.
  void validate(double psd_tol = 1e-10) const;
};

struct PureState {
  std::vector<int> local_dims;
  Vec amplitudes;

  int n_sites() const { return static_cast<int>(local_dims.size()); }
  long dim() const { return amplitudes.size(); }
  bool is_normalized(double tol = 1e-12) const;
};

/// Small dense 4-index tensor, row-major in (d0,d1,d2,d3).
struct Tensor4 {
  int d0 = 1, d1 = 1, d2 = 1, d3 = 1;
  std::vector<cx> v;

  Tensor4() = default;
  Tensor4(int a, int b, int c, int d)
      : d0(a), d1(b), d2(c), d3(d),
        v(static_cast<std::size_t>(a) * b * c * d, cx(0.0, 0.0)) {}

  cx& at(int i, int j, int k, int l) {
    return v[((static_cast<std::size_t>(i) * d1 + j) * d2 + k) * d3 + l];
  }
  cx at(int i, int j, int k, int l) const {
    return v[((static_cast<std::size_t>(i) * d1 + j) * d2 + k) * d3 + l];
  }
};

/// Chain of site tensors (left, ket, bra, right).
struct MPDO {
  int local_dim = 2;
  std::vector<Tensor4> sites;
  std::vector<int> bond_dims;  // N-1 internal bonds

  int n_sites() const { return static_cast<int>(sites.size()); }
  int max_bond() const;
};

/// Chain of site tensors (left, phys, anc, right) for a purifying MPS.
struct MPSPurification {
  std::vector<int> phys_dims;
  std::vector<int> anc_dims;
  std::vector<Tensor4> sites;
  std::vector<int> schmidt_ranks;  // N-1 internal bonds

  int n_sites() const { return static_cast<int>(sites.size()); }
  int max_rank() const;
};

long ipow(long base, int exp);

}  // namespace purikit
