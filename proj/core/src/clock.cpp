#include "parmax/clock.hpp"

#include <chrono>

namespace parmax {

void VirtualClock::advance_to(double t) {
  if (t > now_) now_ = t;
}

namespace {
double steady_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}
}  // namespace

WallClock::WallClock() : epoch_(steady_seconds()) {}

double WallClock::now() const { return steady_seconds() - epoch_; }

}  // namespace parmax
