#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "zerofec/backends.hpp"
#include "zerofec/errors.hpp"

namespace zerofec {

struct HttpEndpoint {
  std::string host;
  int port = 80;
  std::string prefix;  // optional path mounted before /v1/...
};

// Accepts http://host[:port][/prefix]. TLS is out of scope: model servers
// sit on localhost or a trusted network, so https is rejected up front.
inline HttpEndpoint parse_http_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind("https://", 0) == 0)
    throw ConfigError("https backends are not supported, use plain http: " +
                      url);
  if (url.rfind(scheme, 0) != 0)
    throw ConfigError("backend URL must start with http://: " + url);
  std::string rest = url.substr(scheme.size());
  HttpEndpoint ep;
  std::size_t slash = rest.find('/');
  std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
  if (slash != std::string::npos) ep.prefix = rest.substr(slash);
  while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
  std::size_t colon = authority.find(':');
  if (colon == std::string::npos) {
    ep.host = authority;
  } else {
    ep.host = authority.substr(0, colon);
    std::string port_text = authority.substr(colon + 1);
    if (port_text.empty()) throw ConfigError("empty port in URL: " + url);
    for (char ch : port_text)
      if (ch < '0' || ch > '9')
        throw ConfigError("bad port in URL: " + url);
    ep.port = std::stoi(port_text);
    if (ep.port < 1 || ep.port > 65535)
      throw ConfigError("port out of range in URL: " + url);
  }
  if (ep.host.empty()) throw ConfigError("empty host in URL: " + url);
  return ep;
}

constexpr std::size_t kDefaultHttpPoolSize = 8;

namespace detail {

// httplib clients are not safe for concurrent requests, so each request
// leases one from a bounded pool; callers block when all are out.
class HttpClientPool {
public:
  HttpClientPool(std::string host, int port, std::size_t capacity)
      : host_(std::move(host)),
        port_(port),
        capacity_(capacity == 0 ? 1 : capacity) {}

  class Lease {
  public:
    Lease(HttpClientPool* pool, std::unique_ptr<httplib::Client> client)
        : pool_(pool), client_(std::move(client)) {}
    Lease(Lease&&) = default;
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;
    ~Lease() {
      if (pool_ && client_) pool_->release(std::move(client_));
    }
    httplib::Client& operator*() { return *client_; }
    httplib::Client* operator->() { return client_.get(); }

  private:
    HttpClientPool* pool_;
    std::unique_ptr<httplib::Client> client_;
  };

  Lease acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return !idle_.empty() || created_ < capacity_; });
    if (!idle_.empty()) {
      auto client = std::move(idle_.back());
      idle_.pop_back();
      return Lease(this, std::move(client));
    }
    ++created_;
    lock.unlock();
    auto client = std::make_unique<httplib::Client>(host_, port_);
    client->set_connection_timeout(10, 0);
    client->set_read_timeout(300, 0);
    client->set_write_timeout(300, 0);
    return Lease(this, std::move(client));
  }

private:
  void release(std::unique_ptr<httplib::Client> client) {
    std::lock_guard<std::mutex> lock(mu_);
    idle_.push_back(std::move(client));
    cv_.notify_one();
  }

  std::string host_;
  int port_;
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::unique_ptr<httplib::Client>> idle_;
  std::size_t created_ = 0;
};

inline nlohmann::json parse_response_body(const std::string& body) {
  nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object())
    throw ProtocolError("backend response is not a JSON object: " +
                        body.substr(0, 200));
  return parsed;
}

}  // namespace detail

// Text generation over POST {prefix}/v1/generate with body
// {"model", "inputs", "beam_width"} and response {"outputs"} of the same
// length and order as the inputs.
class HttpGenerator : public TextGenerator {
public:
  HttpGenerator(std::string name, const std::string& url, std::string model,
                std::size_t pool_size = kDefaultHttpPoolSize)
      : name_(std::move(name)),
        endpoint_(parse_http_url(url)),
        model_(std::move(model)),
        pool_(endpoint_.host, endpoint_.port, pool_size) {}

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  std::string generate(const std::string& prompt, int beam_width) override {
    nlohmann::json request;
    request["model"] = model_;
    request["inputs"] = nlohmann::json::array({prompt});
    request["beam_width"] = beam_width;
    auto lease = pool_.acquire();
    httplib::Result res = lease->Post(endpoint_.prefix + "/v1/generate",
                                      request.dump(), "application/json");
    if (!res)
      throw BackendError(name_, "transport failure: " +
                                    httplib::to_string(res.error()));
    if (res->status != 200)
      throw BackendError(name_,
                         "HTTP status " + std::to_string(res->status));
    nlohmann::json parsed = detail::parse_response_body(res->body);
    auto outputs = parsed.find("outputs");
    if (outputs == parsed.end() || !outputs->is_array())
      throw ProtocolError("response lacks an 'outputs' array");
    if (outputs->size() != 1)
      throw ProtocolError("expected 1 output, got " +
                          std::to_string(outputs->size()));
    if (!(*outputs)[0].is_string())
      throw ProtocolError("output is not a string");
    return (*outputs)[0].get<std::string>();
  }

private:
  std::string name_;
  HttpEndpoint endpoint_;
  std::string model_;
  detail::HttpClientPool pool_;
};

// Entailment over POST {prefix}/v1/entail with body
// {"premise", "hypothesis"} and response {"probability"}.
class HttpEntailment : public EntailmentScorer {
public:
  HttpEntailment(std::string name, const std::string& url,
                 std::size_t pool_size = kDefaultHttpPoolSize)
      : name_(std::move(name)),
        endpoint_(parse_http_url(url)),
        pool_(endpoint_.host, endpoint_.port, pool_size) {}

  const std::string& name() const override { return name_; }
  bool thread_safe() const override { return true; }

  double score(const std::string& premise,
               const std::string& hypothesis) override {
    nlohmann::json request;
    request["premise"] = premise;
    request["hypothesis"] = hypothesis;
    auto lease = pool_.acquire();
    httplib::Result res = lease->Post(endpoint_.prefix + "/v1/entail",
                                      request.dump(), "application/json");
    if (!res)
      throw BackendError(name_, "transport failure: " +
                                    httplib::to_string(res.error()));
    if (res->status != 200)
      throw BackendError(name_,
                         "HTTP status " + std::to_string(res->status));
    nlohmann::json parsed = detail::parse_response_body(res->body);
    auto prob = parsed.find("probability");
    if (prob == parsed.end() || !prob->is_number())
      throw ProtocolError("response lacks a numeric 'probability'");
    double p = prob->get<double>();
    if (!(p >= 0.0 && p <= 1.0))
      throw ProtocolError("probability out of [0,1]: " + std::to_string(p));
    return p;
  }

private:
  std::string name_;
  HttpEndpoint endpoint_;
  detail::HttpClientPool pool_;
};

}  // namespace zerofec
