#include <benchmark/benchmark.h>

#include <vector>

#include "elastica/contour.hpp"
#include "elastica/functionals.hpp"
#include "elastica/krylov.hpp"
#include "elastica/profiles.hpp"
#include "elastica/spectral.hpp"
#include "elastica/topology.hpp"

namespace {

using namespace elastica;

ScalarField circle(int n) {
  auto d = Domain::create(n, 1.05);
  CurveSpec s;
  s.components.emplace_back(Circle{{0.0, 0.0}, 0.4, +1});
  return build_recovery_field(s, default_recovery_params(s, 0.025), d);
}

EnergyParams all_on() {
  EnergyParams p;
  p.length_on = p.winding_on = p.mismatch_on = true;
  return p;
}

void BM_EnergyState(benchmark::State& state) {
  const ScalarField u = circle(static_cast<int>(state.range(0)));
  const EnergyParams p = all_on();
  for (auto _ : state) benchmark::DoNotOptimize(EnergyState(u, p).breakdown().total);
}
BENCHMARK(BM_EnergyState)->Arg(128)->Arg(192)->Arg(256);

void BM_HessianApply(benchmark::State& state) {
  const ScalarField u = circle(static_cast<int>(state.range(0)));
  const EnergyState s(u, all_on());
  auto ws = s.make_workspace();
  std::vector<double> v(u.data()), out(u.size());
  for (auto _ : state) {
    s.apply_hessian(v, out, ws);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_HessianApply)->Arg(128)->Arg(192)->Arg(256);

void BM_PcgSolve(benchmark::State& state) {
  const ScalarField u = circle(static_cast<int>(state.range(0)));
  const EnergyState s(u, all_on());
  const Domain& d = s.domain();
  const double shift = d.h() * d.h() / 1e-5;
  std::vector<double> diag(u.size()), b(u.size()), x(u.size());
  s.hessian_diagonal(diag);
  for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = d.mask().is_free(k) ? 1.0 / (diag[k] + shift) : 0.0;
  s.gradient(b);
  auto ws = s.make_workspace();
  const LinearOperator op = [&](std::span<const double> in, std::span<double> out) {
    s.apply_hessian(in, out, ws);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += d.mask().is_free(k) ? shift * in[k] : 0.0;
  };
  PcgParams p;
  for (auto _ : state) {
    std::fill(x.begin(), x.end(), 0.0);
    benchmark::DoNotOptimize(truncated_pcg(d, op, diag, b, x, p).iterations);
  }
}
BENCHMARK(BM_PcgSolve)->Arg(128)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_SineSolver(benchmark::State& state) {
  const ScalarField u = circle(static_cast<int>(state.range(0)));
  SineSolver solver(u.domain_ptr(), bending_symbol(u.domain().h(), 1e5, 37.7, 0.025, 2.0));
  std::vector<double> out(u.size());
  for (auto _ : state) {
    solver.apply(u.values(), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SineSolver)->Arg(192)->Arg(193)->Arg(257);

void BM_ImprovedWinding(benchmark::State& state) {
  const ScalarField u = circle(128);
  TVSolveParams t;
  t.max_iters = static_cast<int>(state.range(0));
  t.gap_tol = 1e-12;
  const EnergyParams p;
  for (auto _ : state) benchmark::DoNotOptimize(minimize_phi(u, p, t).primal);
}
BENCHMARK(BM_ImprovedWinding)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ExtractContour(benchmark::State& state) {
  const ScalarField u = circle(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_contour(u).components.size());
}
BENCHMARK(BM_ExtractContour)->Arg(192)->Arg(384);

}  // namespace

BENCHMARK_MAIN();
