// Microbenchmarks for the hot paths: twisted Eisenstein series, moment-matrix
// assembly, the sewn determinant, kernel evaluation, the Fock-sum oracle, and
// the genus-two theta series.  Run with --benchmark_min_time=... as usual.

#include <g2sew/coeffs.hpp>
#include <g2sew/fermion.hpp>
#include <g2sew/qseries.hpp>
#include <g2sew/sewing.hpp>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <complex>

using namespace g2sew;
using fermion::CharPair;
using sewing::SewingConfig;

namespace {

const cplx kTau1(0.3, 0.9);
const cplx kTau2(0.0, 1.2);
const cplx kXi(0.0, 1.0);
const TwistData kTw1(0.87, 0.25);
const TwistData kTw2(0.13, 0.6);

SewingConfig make_cfg(int M) {
  SewingConfig probe = SewingConfig::make(kTau1, kTau2, cplx(1e-12, 0.0), kXi, M);
  const cplx eps = 0.1 * probe.r1 * probe.r2 * std::exp(cplx(0.0, 0.37));
  return SewingConfig::make(kTau1, kTau2, eps, kXi, M);
}

void BM_EisensteinTwisted(benchmark::State& state) {
  const ModularParam m(kTau1);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qseries::eisenstein_twisted(n, kTw1, m));
}
BENCHMARK(BM_EisensteinTwisted)->Arg(2)->Arg(6)->Arg(12);

void BM_FMatrixBuild(benchmark::State& state) {
  const SewingConfig cfg = make_cfg(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coeffs::f_matrix(1, cfg, kTw1));
}
BENCHMARK(BM_FMatrixBuild)->Arg(8)->Arg(16)->Arg(24);

void BM_DetIminusQ(benchmark::State& state) {
  const SewingConfig cfg = make_cfg(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sewing::det_i_minus_q(cfg, kTw1, kTw2));
}
BENCHMARK(BM_DetIminusQ)->Arg(8)->Arg(16)->Arg(24);

void BM_SzegoG2Cross(benchmark::State& state) {
  const SewingConfig cfg = make_cfg(16);
  const auto x = cfg.point(cplx(0.4, 0.7), 1);
  const auto y = cfg.point(cplx(-0.5, -0.6), 2);
  for (auto _ : state) benchmark::DoNotOptimize(sewing::szego_g2(x, y, cfg, kTw1, kTw2));
}
BENCHMARK(BM_SzegoG2Cross);

void BM_Z2FockSum(benchmark::State& state) {
  const SewingConfig cfg = make_cfg(12);
  const CharPair chars = CharPair::make(kTw1, kTw2);
  const auto cut = fermion::CutoffPolicy::make(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fermion::z2_fock_sum(cfg, chars, cut));
}
BENCHMARK(BM_Z2FockSum)->Arg(4)->Arg(6);

void BM_ThetaG2(benchmark::State& state) {
  Eigen::VectorXd alpha(2), beta(2);
  alpha << 0.37, 0.11;
  beta << 0.25, 0.6;
  Eigen::VectorXcd z(2);
  z << cplx(0.0, 0.0), cplx(0.0, 0.0);
  Eigen::MatrixXcd omega(2, 2);
  omega << kTau1, cplx(0.0, 0.1), cplx(0.0, 0.1), kTau2;
  for (auto _ : state) benchmark::DoNotOptimize(qseries::theta_char(2, alpha, beta, z, omega));
}
BENCHMARK(BM_ThetaG2);

}  // namespace

BENCHMARK_MAIN();
