#pragma once

#include "purikit/types.hpp"

namespace purikit {

/// Slack matrix of the regular t-gon, scaled so the minimal nonzero entry
/// is 1. Circulant: entries(i, j) = circulant_row[(j - i) mod t].
struct SlackMatrix {
  int t = 0;
  RMat entries;
  double normalization = 1.0;  // applied scale factor
  RVec circulant_row;

  void validate(double tol = 1e-10) const;
};

SlackMatrix tgon_slack(int t);

enum class Layout { flat, binary };

/// Diagonal two-site state rho_t = sum_{x,y} S(x,y) |x,y><x,y|; binary
/// layout splits each t-dimensional site into m = log2(t) qubits.
DensityMatrix rho_t(const SlackMatrix& slack, bool normalize = true,
                    Layout layout = Layout::flat);

/// Bond-dimension-3 MPO over 2m binary sites whose diagonal is S(x, y).
MPDO fourier_mpo(int m);

/// Eigenvalues of the circulant slack matrix via DFT of its first row.
std::vector<cx> circulant_eigenvalues(const SlackMatrix& slack,
                                      double tol = 1e-9);

/// phi   = sum sqrt(S(x,y)) |x,x,y,y>  (site order: x, copy, y, copy)
/// phi^2 = sum      S(x,y)  |x,x,y,y>
/// Binary layout merges each (bit, copy) pair into one dimension-4 site.
std::pair<PureState, PureState> phi_states(const SlackMatrix& slack,
                                           Layout layout = Layout::flat);

/// Schmidt ranks of the phi states at every linear cut, computed from the
/// t^2-sparse amplitude support (no dense state vector).
std::vector<int> phi_cut_ranks(const SlackMatrix& slack, bool squared,
                               Layout layout = Layout::flat,
                               double tol = 1e-9);

struct PsdFactors {
  bool success = false;
  std::vector<Mat> E;  // one r x r PSD factor per row index
  std::vector<Mat> F;  // one r x r PSD factor per column index
  double residual = 0.0;  // Frobenius norm of tr(E_x F_y) - S
};

/// Heuristic local search for a size-r psd factorization of a nonnegative
/// matrix. Failure is a value, not a certificate of infeasibility.
PsdFactors psd_factorization_search(const RMat& S, int r, int restarts,
                                    std::uint64_t seed);

}  // namespace purikit
