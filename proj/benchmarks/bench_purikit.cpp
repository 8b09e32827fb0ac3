#include <benchmark/benchmark.h>

#include "purikit/counterexamples.hpp"
#include "purikit/eigen_method.hpp"
#include "purikit/sdp.hpp"
#include "purikit/sos_method.hpp"
#include "purikit/spectra.hpp"
#include "purikit/tensor_core.hpp"

using namespace purikit;

namespace {

DensityMatrix bench_state(int sites, int rank) {
  Spectrum spec;
  long dim = ipow(2, sites);
  for (int i = 0; i < rank; ++i)
    spec.values.push_back(static_cast<double>(rank - i));
  double s = 0;
  for (double v : spec.values) s += v;
  for (double& v : spec.values) v /= s;
  spec.n_nonzero = rank;
  spec.ambient_dim = dim;
  spec.normalized = true;
  spec.m_distinct = distinct_count(spec, 1e-10, dim);
  return assemble_density(spec, haar_unitary(dim, 7), sites, 2);
}

void BM_tgon_rank(benchmark::State& state) {
  int t = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SlackMatrix s = tgon_slack(t);
    Eigen::JacobiSVD<RMat> svd(s.entries);
    benchmark::DoNotOptimize(svd.singularValues()(0));
  }
}
BENCHMARK(BM_tgon_rank)->Arg(16)->Arg(64)->Arg(128);

void BM_phi_cut_ranks(benchmark::State& state) {
  SlackMatrix s = tgon_slack(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(phi_cut_ranks(s, true, Layout::binary));
}
BENCHMARK(BM_phi_cut_ranks)->Arg(16)->Arg(64);

void BM_mpdo_from_dense(benchmark::State& state) {
  DensityMatrix rho = bench_state(static_cast<int>(state.range(0)), 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(mpdo_from_dense(rho, 1e-9).bond_dims);
}
BENCHMARK(BM_mpdo_from_dense)->Arg(3)->Arg(5);

void BM_sdp_solve(benchmark::State& state) {
  Spectrum s = make_distribution(DistKind::equally_spaced,
                                 static_cast<int>(state.range(0)));
  SdpProblem p = build_standard_form(s, 3, s.ambient_dim);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p).objective);
}
BENCHMARK(BM_sdp_solve)->Arg(20)->Arg(50)->Arg(100);

void BM_eigen_purification(benchmark::State& state) {
  DensityMatrix rho = bench_state(static_cast<int>(state.range(0)), 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(eigen_purification(rho).second.osr);
}
BENCHMARK(BM_eigen_purification)->Arg(3)->Arg(5);

void BM_exact_gram_purify(benchmark::State& state) {
  DensityMatrix rho = bench_state(static_cast<int>(state.range(0)), 4);
  Spectrum spec = spectrum_of(rho);
  for (auto _ : state) {
    GramPolynomial gp = exact_gram(spec);
    benchmark::DoNotOptimize(build_purifying_state(rho, gp).schmidt_ranks);
  }
}
BENCHMARK(BM_exact_gram_purify)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
