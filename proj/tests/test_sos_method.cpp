#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "purikit/sos_method.hpp"
#include "purikit/tensor_core.hpp"

using namespace purikit;

namespace {

Spectrum simple_spec(std::vector<double> vals, long ambient) {
  Spectrum s;
  s.values = std::move(vals);
  s.n_nonzero = static_cast<int>(s.values.size());
  s.ambient_dim = ambient;
  s.normalized = std::abs(s.sum() - 1.0) < 1e-12;
  s.m_distinct = distinct_count(s, 1e-10, ambient);
  return s;
}

}  // namespace

TEST_CASE("vandermonde") {
  RVec v = vandermonde(0.0, 3);
  CHECK(v(0) == 1.0);
  CHECK(v(1) == 0.0);
  CHECK(v(2) == 0.0);
  CHECK(vandermonde(1.0, 4).sum() == doctest::Approx(4.0));
  RVec w = vandermonde(2.0, 3);
  CHECK(w(2) == doctest::Approx(4.0));
}

TEST_CASE("exact_gram interpolates the distinct values") {
  // Uniform: m = 1, R = [1/n].
  Spectrum u = make_distribution(DistKind::uniform, 4);
  GramPolynomial g1 = exact_gram(u);
  CHECK(g1.k == 1);
  CHECK(g1.gram(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(eval_poly(g1, 0.77) == doctest::Approx(0.25).epsilon(1e-12));

  // Two distinct values: hand oracle for the biorthogonal construction.
  Spectrum two = simple_spec({2.0 / 3.0, 1.0 / 3.0}, 2);
  GramPolynomial g2 = exact_gram(two);
  CHECK(eval_poly(g2, 2.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(eval_poly(g2, 1.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(eval_poly(g2, 0.0) >= -1e-10);
  // Non-orthogonal ancillas: some off-diagonal entry nonzero.
  CHECK(std::abs(g2.gram(0, 1)) > 1e-12);

  // Pure state with counted zero: p(1) = 1, p(0) = 0.
  Spectrum pure = simple_spec({1.0}, 2);
  REQUIRE(pure.m_distinct == 2);
  GramPolynomial g3 = exact_gram(pure);
  CHECK(eval_poly(g3, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(eval_poly(g3, 0.0)) < 1e-10);
}

TEST_CASE("gram polynomials are nonnegative on [-2, 2]") {
  Spectrum s = simple_spec({0.5, 0.3, 0.2}, 4);
  GramPolynomial g = exact_gram(s);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) CHECK(eval_poly(g, u(rng)) >= -1e-10);
}

TEST_CASE("sos_decompose") {
  GramPolynomial d1;
  d1.k = 1;
  d1.gram = Mat::Constant(1, 1, cx(4.0, 0.0));
  SosDecomposition s1 = sos_decompose(d1);
  CHECK(s1.rank == 1);
  CHECK(std::abs(s1.rows(0, 0)) == doctest::Approx(2.0));

  GramPolynomial ones;
  ones.k = 2;
  ones.gram = Mat::Ones(2, 2);
  SosDecomposition s2 = sos_decompose(ones);
  CHECK(s2.rank == 1);

  // Random PSD Gram, k = 4: sum of squares reproduces the polynomial.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  RMat a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = g(rng);
  GramPolynomial gp;
  gp.k = 4;
  gp.gram = (a * a.transpose()).cast<cx>();
  SosDecomposition dec = sos_decompose(gp);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    double lam = u(rng);
    RVec v = vandermonde(lam, 4);
    double sum_sq = (dec.rows * v).squaredNorm();
    CHECK(sum_sq == doctest::Approx(eval_poly(gp, lam)).epsilon(1e-10));
  }
}

TEST_CASE("real_reduce") {
  GramPolynomial gp;
  gp.k = 2;
  gp.gram = Mat(2, 2);
  gp.gram << cx(1, 0), cx(0, 1), cx(0, -1), cx(1, 0);
  GramPolynomial rr = real_reduce(gp);
  CHECK(std::abs(rr.gram(0, 1)) < 1e-15);
  for (double lam : {-1.5, 0.0, 0.3, 2.0})
    CHECK(eval_poly(rr, lam) == doctest::Approx(eval_poly(gp, lam)));
}

TEST_CASE("lagrange_squared") {
  GramPolynomial c = lagrange_squared({0.5});
  CHECK(eval_poly(c, 0.1) == doctest::Approx(0.5));
  CHECK(eval_poly(c, 1.7) == doctest::Approx(0.5));

  GramPolynomial g = lagrange_squared({1.0, 2.0});
  CHECK(eval_poly(g, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval_poly(g, 2.0) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS(lagrange_squared({1.0, 1.0}));

  // Distance against direct summation for equally spaced n = 10.
  Spectrum s = make_distribution(DistKind::equally_spaced, 10);
  GramPolynomial l3 =
      lagrange_squared({s.values[0], s.values[1], s.values[2]});
  double direct = 0.0;
  for (double lam : s.values) direct += std::abs(lam - eval_poly(l3, lam));
  CHECK(sos_distance(s, l3, 10) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("exp_ansatz") {
  DistParams p;
  p.b = 1.0;
  Spectrum s20 = make_distribution(DistKind::exponential, 20, p);
  GramPolynomial k3 = exp_ansatz(s20, 3);
  CHECK(eval_poly(k3, s20.values[0]) ==
        doctest::Approx(s20.values[0]).epsilon(1e-10));
  // k = 3 single term: p(lam) = lam^2 / lambda_1.
  CHECK(eval_poly(k3, 0.1) ==
        doctest::Approx(0.01 / s20.values[0]).epsilon(1e-10));

  GramPolynomial k5 = exp_ansatz(s20, 5);
  for (int r = 0; r < 3; ++r)
    CHECK(eval_poly(k5, s20.values[r]) ==
          doctest::Approx(s20.values[r]).epsilon(1e-10));
  CHECK(std::abs(eval_poly(k5, 0.0)) < 1e-12);  // double root at 0
}

TEST_CASE("sigma_of_poly and sos_distance") {
  Spectrum s = simple_spec({0.6, 0.4}, 4);
  GramPolynomial g = exact_gram(s);
  Spectrum sig = sigma_of_poly(s, g);
  CHECK(sig.values[0] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(sig.values[1] == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(sos_distance(s, g, 4) < 1e-8);

  GramPolynomial zero;
  zero.k = 2;
  zero.gram = Mat::Zero(2, 2);
  CHECK(sos_distance(s, zero, 4) == doctest::Approx(1.0));
  Spectrum sig0 = sigma_of_poly(s, zero);
  for (double v : sig0.values) CHECK(v == 0.0);

  // Dense trace-norm oracle on a random 3-qubit instance.
  DensityMatrix rho = test_helpers::random_density(3, 2, 5, 77);
  Spectrum spec = spectrum_of(rho);
  GramPolynomial l =
      lagrange_squared({spec.values[0], spec.values[2], spec.values[4]});
  Mat sigma = Mat::Zero(8, 8);
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.data);
  for (long i = 0; i < 8; ++i) {
    double lam = std::max(es.eigenvalues()(i), 0.0);
    sigma += eval_poly(l, lam) *
             (es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint());
  }
  CHECK(sos_distance(spec, l, 8) ==
        doctest::Approx(trace_norm(rho.data - sigma)).epsilon(1e-8));
}

TEST_CASE("sos_rank_bound") {
  CHECK(sos_rank_bound(1, 5).value == 5);
  CHECK(sos_rank_bound(2, 3).value == 7);
  CHECK(sos_rank_bound(3, 4).value == 40);
  CHECK_FALSE(sos_rank_bound(3, 4).saturated);
  CHECK(sos_rank_bound(100, 50).saturated);
}

TEST_CASE("build_purifying_state") {
  // I/n with R = [1/n]: purification rank 1.
  DensityMatrix id4 =
      DensityMatrix::from_dense(Mat::Identity(4, 4) / 4.0, 2, 2, true);
  GramPolynomial g = exact_gram(spectrum_of(id4));
  MPSPurification pur = build_purifying_state(id4, g);
  DensityMatrix back = trace_out_ancilla(pur);
  CHECK((back.data - id4.data).norm() < 1e-10);
  CHECK(purification_rank(pur) == 1);

  // Exact Gram on a random state: sigma_m = rho, rank bound respected.
  DensityMatrix rho = test_helpers::random_density(2, 2, 4, 101);
  Spectrum spec = spectrum_of(rho);
  GramPolynomial ge = exact_gram(spec);
  MPSPurification pm = build_purifying_state(rho, ge);
  DensityMatrix sigma = trace_out_ancilla(pm);
  CHECK(trace_norm(rho.data - sigma.data) < 1e-8);
  int D = operator_schmidt_rank(rho).second;
  RankBound rb = sos_rank_bound(D, spec.m_distinct);
  if (!rb.saturated)
    CHECK(static_cast<unsigned long long>(purification_rank(pm)) <= rb.value);
}
