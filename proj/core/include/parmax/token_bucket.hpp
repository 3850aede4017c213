#pragma once

namespace parmax {

// Token bucket over virtual time. Holds up to `burst` tokens, refills at
// `rate` tokens per second. acquire() grants tokens in strict FIFO order:
// when the bucket cannot cover a request, the caller is queued behind every
// earlier grant and the returned delay says how long the call waits for
// capacity. Calls must be issued with non-decreasing `now`.
class TokenBucket {
 public:
  TokenBucket(double rate_tokens_per_sec, double burst_tokens);

  // Returns the queueing delay in seconds (0 when capacity is free).
  double acquire(double tokens, double now);

  // Tokens available to a hypothetical zero-cost call at `now`.
  double available(double now) const;

  double rate() const { return rate_; }
  double burst() const { return burst_; }

 private:
  double rate_;
  double burst_;
  double level_;     // tokens on hand at ref_time_
  double ref_time_;  // accounting instant; grants never move it backwards
};

}  // namespace parmax
