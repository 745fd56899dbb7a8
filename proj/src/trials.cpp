#include "q2mpc/trials.hpp"

#include <cstdlib>

namespace q2mpc {

int trial_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("Q2MPC_TRIAL_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return (int)v;
  }
  return 1;
}

}  // namespace q2mpc
