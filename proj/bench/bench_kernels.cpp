// Serial reference vs OpenMP kernels: wall time and agreement.
// Usage: bench_kernels [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "genbounds/fractal.hpp"
#include "genbounds/kernels.hpp"
#include "genbounds/pacbayes.hpp"
#include "genbounds/random.hpp"
#include "genbounds/stable_noise.hpp"

using namespace genbounds;

namespace {

template <typename F>
double seconds(F&& f, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

PointSet stable_path(std::size_t steps, double alpha, std::uint64_t seed) {
  RandomStream rng(seed);
  const auto inc = levy_path_increments(StableSpec(alpha, 1.0, 2), 1e-4, steps, rng);
  PointSet path{Vec(2, 0.0)};
  for (const auto& dl : inc) {
    Vec next = path.back();
    next[0] += dl[0];
    next[1] += dl[1];
    path.push_back(std::move(next));
  }
  return path;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : kernels::max_threads();
  std::printf("threads: %d\n", threads);

  const PointSet a = stable_path(4000, 1.5, 1);
  const PointSet b = stable_path(4000, 1.7, 2);
  double hs = 0, hp = 0;
  const double t_hs = seconds([&] { hs = kernels::serial::directed_hausdorff(a, b); });
  const double t_hp = seconds([&] { hp = kernels::parallel::directed_hausdorff(a, b, threads); });
  row("directed_hausdorff", t_hs, t_hp, hs == hp);

  const PointSet big = stable_path(400000, 1.5, 3);
  const Vec anchor = min_corner(big);
  const double delta = bounding_extent(big) / 512.0;
  std::size_t cs = 0, cp = 0;
  const double t_cs = seconds([&] { cs = kernels::serial::occupied_cells(big, anchor, delta); });
  const double t_cp = seconds([&] { cp = kernels::parallel::occupied_cells(big, anchor, delta, threads); });
  row("occupied_cells", t_cs, t_cp, cs == cp);

  PointSet sa(a.begin(), a.begin() + 150), sb(b.begin(), b.begin() + 150);
  const SmoothedOccupation post(sa, 0.02), prior(sb, 0.02);
  QuadratureOptions serial_opt, par_opt;
  serial_opt.threads = 1;
  par_opt.threads = threads;
  double ks = 0, kp = 0;
  const double t_ks = seconds([&] { ks = kl_oracle(post, prior, serial_opt); }, 1);
  const double t_kp = seconds([&] { kp = kl_oracle(post, prior, par_opt); }, 1);
  row("kl_oracle (d=2)", t_ks, t_kp, ks == kp);
  return 0;
}
