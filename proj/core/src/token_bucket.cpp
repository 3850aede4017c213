#include "parmax/token_bucket.hpp"

#include <algorithm>

#include "parmax/errors.hpp"

namespace parmax {

TokenBucket::TokenBucket(double rate_tokens_per_sec, double burst_tokens)
    : rate_(rate_tokens_per_sec), burst_(burst_tokens), level_(burst_tokens), ref_time_(0.0) {
  if (!(rate_ > 0.0)) throw ValidationError("token bucket rate must be positive");
  if (burst_ < 0.0) throw ValidationError("token bucket burst must be non-negative");
}

double TokenBucket::available(double now) const {
  if (now <= ref_time_) return level_;
  return std::min(burst_, level_ + (now - ref_time_) * rate_);
}

double TokenBucket::acquire(double tokens, double now) {
  if (tokens < 0.0) throw ValidationError("token bucket acquire: negative token count");
  // ref_time_ only moves forward; a call arriving while earlier grants are
  // still draining (now < ref_time_) queues behind them, which is what makes
  // the discipline FIFO.
  if (now > ref_time_) {
    level_ = std::min(burst_, level_ + (now - ref_time_) * rate_);
    ref_time_ = now;
  }
  if (level_ >= tokens) {
    level_ -= tokens;
    return ref_time_ - now;  // zero unless queued behind earlier grants
  }
  const double wait = (tokens - level_) / rate_;
  level_ = 0.0;
  ref_time_ += wait;
  return ref_time_ - now;
}

}  // namespace parmax
