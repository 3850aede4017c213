#include "parmax/http_backend.hpp"

#include <chrono>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "parmax/errors.hpp"

namespace parmax {

namespace {
using json = nlohmann::ordered_json;
}

struct HttpBackend::Impl {
  Options options;
  httplib::Client client;

  explicit Impl(Options opts) : options(std::move(opts)), client(options.host, options.port) {
    const auto whole = static_cast<time_t>(options.timeout_s);
    const auto micros =
        static_cast<time_t>(std::llround((options.timeout_s - static_cast<double>(whole)) * 1e6));
    client.set_connection_timeout(whole, micros);
    client.set_read_timeout(whole, micros);
    client.set_write_timeout(whole, micros);
    client.set_keep_alive(true);
  }
};

HttpBackend::HttpBackend(Options options) : impl_(std::make_unique<Impl>(std::move(options))) {
  if (!(impl_->options.timeout_s > 0.0))
    throw ValidationError("http backend: timeout must be positive");
}

HttpBackend::~HttpBackend() = default;

AgentCallResult HttpBackend::call(const AgentCall& call) {
  json body;
  body["agent"] = std::string(role_name(call.role));
  body["query_id"] = call.query_id;
  body["input_tokens"] = call.tokens_in;
  if (!call.text.empty()) body["text"] = call.text;

  const auto started = std::chrono::steady_clock::now();
  auto res = impl_->client.Post(impl_->options.path, body.dump(), "application/json");
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);

  AgentCallResult out;
  out.latency_s = elapsed.count();
  if (!res) {
    // Connection refused/reset and deadline overruns all land here.
    out.success = false;
    out.error = ErrorKind::Timeout;
    return out;
  }
  if (res->status != 200) {
    out.success = false;
    out.error = ErrorKind::Http500;
    return out;
  }
  try {
    const json doc = json::parse(res->body);
    if (doc.is_object()) {
      if (doc.contains("output_tokens") && doc.at("output_tokens").is_number_integer())
        out.tokens_out = doc.at("output_tokens").get<std::int64_t>();
      if (doc.contains("text") && doc.at("text").is_string())
        out.text = doc.at("text").get<std::string>();
    }
  } catch (const json::parse_error&) {
    // A 200 with an unreadable body still counts as a served call; token
    // accounting just has nothing to record.
  }
  return out;
}

}  // namespace parmax
