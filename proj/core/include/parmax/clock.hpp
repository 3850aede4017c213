#pragma once

namespace parmax {

// Seconds-valued clock. Virtual clocks are advanced explicitly by the
// simulation; the wall clock reads the monotonic system clock.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
  virtual bool is_virtual() const = 0;
};

class VirtualClock : public Clock {
 public:
  explicit VirtualClock(double start_s = 0.0) : now_(start_s) {}
  double now() const override { return now_; }
  bool is_virtual() const override { return true; }

  // Time never moves backwards; advancing to the past is ignored.
  void advance_to(double t);

 private:
  double now_;
};

class WallClock : public Clock {
 public:
  WallClock();
  double now() const override;  // seconds since construction
  bool is_virtual() const override { return false; }

 private:
  double epoch_;
};

}  // namespace parmax
