#include "parmax/http_backend.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

using namespace parmax;

namespace {

// A local inference stub bound to an ephemeral port. The handler decides the
// status code and delay from the posted agent name.
class StubServer {
 public:
  StubServer() {
    server_.Post("/v1/agent", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      const std::string agent = body.at("agent").get<std::string>();
      if (agent == "code") {
        res.status = 500;
        return;
      }
      if (agent == "guidance") {
        res.status = 418;  // anything non-200/non-500 counts as a server error
        return;
      }
      if (agent == "synthesizer") {
        std::this_thread::sleep_for(std::chrono::milliseconds(1000));
      }
      nlohmann::json reply;
      reply["output_tokens"] = body.at("input_tokens").get<int>() / 10;
      reply["text"] = "ok";
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  int port() const { return port_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

AgentCall agent_call(AgentRole role) {
  AgentCall call;
  call.role = role;
  call.query_id = "q1";
  call.tokens_in = 500;
  call.tokens_out = 50;
  call.text = "prompt";
  return call;
}

}  // namespace

TEST_SUITE("http_backend") {

TEST_CASE("live calls measure wall time and parse the reply") {
  StubServer server;
  HttpBackend::Options options;
  options.port = server.port();
  HttpBackend backend(options);
  CHECK_FALSE(backend.simulated());

  // The synthesizer handler sleeps a full second.
  const AgentCallResult slow = backend.call(agent_call(AgentRole::Synthesizer));
  CHECK(slow.success);
  CHECK(slow.latency_s > 0.95);
  CHECK(slow.latency_s < 1.5);
  CHECK(slow.tokens_out == 50);
  CHECK(slow.text == "ok");

  const AgentCallResult fast = backend.call(agent_call(AgentRole::Video));
  CHECK(fast.success);
  CHECK(fast.latency_s < 0.5);
}

TEST_CASE("server errors and odd statuses surface as http_500") {
  StubServer server;
  HttpBackend::Options options;
  options.port = server.port();
  HttpBackend backend(options);

  const AgentCallResult failed = backend.call(agent_call(AgentRole::Code));
  CHECK_FALSE(failed.success);
  REQUIRE(failed.error.has_value());
  CHECK(*failed.error == ErrorKind::Http500);

  const AgentCallResult odd = backend.call(agent_call(AgentRole::Guidance));
  CHECK_FALSE(odd.success);
  REQUIRE(odd.error.has_value());
  CHECK(*odd.error == ErrorKind::Http500);
}

TEST_CASE("deadline overruns surface as timeouts") {
  StubServer server;
  HttpBackend::Options options;
  options.port = server.port();
  options.timeout_s = 0.3;
  HttpBackend backend(options);

  const AgentCallResult result = backend.call(agent_call(AgentRole::Synthesizer));
  CHECK_FALSE(result.success);
  REQUIRE(result.error.has_value());
  CHECK(*result.error == ErrorKind::Timeout);
  CHECK(result.latency_s < 0.95);
}

TEST_CASE("connection failures surface as timeouts") {
  HttpBackend::Options options;
  options.port = 1;  // nothing listens here
  options.timeout_s = 0.5;
  HttpBackend backend(options);

  const AgentCallResult result = backend.call(agent_call(AgentRole::Video));
  CHECK_FALSE(result.success);
  REQUIRE(result.error.has_value());
  CHECK(*result.error == ErrorKind::Timeout);
}

}  // TEST_SUITE
