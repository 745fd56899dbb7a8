// Throughput comparison between the serial reference trial loop and the
// OpenMP worker pool, over a realistic per-trial kernel (verified deal plus
// public open). Also cross-checks that both paths produce identical results.

#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "q2mpc/trials.hpp"
#include "q2mpc/vss.hpp"

using namespace q2mpc;

namespace {

std::string kernel(uint64_t seed, int k) {
  Msp msp = threshold_msp(3, 1, 7);
  Field ff(347, FieldRole::authentication);
  Network net(3, seed, {false});
  Adversary adv;
  VssDealResult r = vss_deal(net, adv, msp, ff, k, 0, msp.field().fe(seed % 7));
  if (r.outcome != VssOutcome::success) return "deal failed";
  Fel v = vss_open(net, adv, *r.commitment);
  return to_string(v) + "/" + std::to_string(net.stats().messages);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int trials = 200;
  int workers = 4;
  int k = 4;
  uint64_t seed = 1;
  CLI::App app{"trial loop benchmark"};
  app.add_option("--trials", trials, "trials per timed run")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "worker count for the parallel run")
      ->check(CLI::PositiveNumber);
  app.add_option("--k", k, "security parameter of the kernel")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "master seed");
  CLI11_PARSE(app, argc, argv);

  auto fn = [k](int, uint64_t s) { return kernel(s, k); };

  auto t0 = std::chrono::steady_clock::now();
  auto serial = run_trials(trials, seed, fn, 1);
  double ts = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  auto parallel = run_trials(trials, seed, fn, workers);
  double tp = seconds_since(t0);

  std::printf("trials=%d k=%d workers=%d\n", trials, k, workers);
  std::printf("serial:   %.3f s  (%.1f trials/s)\n", ts, trials / ts);
  std::printf("parallel: %.3f s  (%.1f trials/s)  speedup %.2fx\n", tp, trials / tp, ts / tp);
  std::printf("identical results: %s\n", serial == parallel ? "yes" : "NO");
  return serial == parallel ? 0 : 1;
}
