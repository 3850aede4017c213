#pragma once

#include <memory>
#include <string>

#include "parmax/backend.hpp"

namespace parmax {

// Adapter for a real inference endpoint. Each agent call is one POST of
//   {"agent": "<role>", "query_id": "...", "input_tokens": n, "text": "..."?}
// and expects {"latency_hint_ms": n?, "output_tokens": n, "text": "..."?}.
// HTTP 200 is success, 500 is a server error, and any other status is
// treated as a 500. Connection failures and deadline overruns surface as
// timeouts. Latency is measured on the wall clock.
class HttpBackend : public InferenceBackend {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string path = "/v1/agent";
    double timeout_s = 30.0;
  };

  explicit HttpBackend(Options options);
  ~HttpBackend() override;

  AgentCallResult call(const AgentCall& call) override;
  bool simulated() const override { return false; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace parmax
