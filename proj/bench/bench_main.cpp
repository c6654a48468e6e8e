#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "heunbc/parallel.hpp"
#include "heunbc/quad.hpp"
#include "heunbc/spectra.hpp"

using heunbc::Exec;
using heunbc::quad::circle;
using heunbc::quad::vsegment;

namespace {

double run_timed(const std::function<void()>& f, int reps) {
  f();  // warm caches and one-time setup before timing
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, int reps, const std::function<void(Exec)>& body) {
  double ts = run_timed([&] { body(Exec::serial); }, reps);
  double tp = run_timed([&] { body(Exec::par); }, reps);
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n",
              name, ts, tp, ts / tp);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", heunbc::thread_count(Exec::par));

  report("circle Gram, n=5, N=4096", 3, [](Exec ex) {
    auto rep = heunbc::quad::circle_orthogonality(5, 0.3, 0.7, circle(1.0, 4096), 160, ex);
    if (rep.normalized_offdiag > 1e-8) std::printf("  off-diagonal drifted\n");
  });

  report("segment Gram, n=4, N=4096", 3, [](Exec ex) {
    auto p = heunbc::quad::segment_problem(4, -2.0, -1.0);
    auto rep = heunbc::quad::single_orthogonality(p, vsegment(0.0, 4096), ex);
    if (rep.normalized_offdiag > 1e-8) std::printf("  off-diagonal drifted\n");
  });

  report("double pairing, 3x3, N=256", 3, [](Exec ex) {
    auto pn = heunbc::quad::segment_problem(2, -2.0, -1.0);
    auto pm = heunbc::quad::segment_problem(3, -2.0, -1.0);
    auto rep = heunbc::quad::double_orthogonality(pn, pm, vsegment(0.0, 256),
                                                  vsegment(3.141592653589793, 256), ex);
    if (rep.max_offpair > 1e-7) std::printf("  off-pair drifted\n");
  });

  report("kernel eigenvalue, N=4096", 3, [](Exec ex) {
    auto p = heunbc::spectra::make_problem(0, -1.6, 2.0 - 0.64, 0.0,
                                           heunbc::spectra::Branch::plus);
    auto sol = heunbc::spectra::bh_solution(p, 0);
    auto rep = heunbc::quad::fredholm_lambda(sol, {-0.5, 0.0}, -sol.K1, 16,
                                             circle(1.0, 4096), ex);
    if (rep.variation > 1e-7) std::printf("  variation drifted\n");
  });

  return 0;
}
