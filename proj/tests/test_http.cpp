#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <httplib.h>
#include <json.hpp>

#include <zerofec/errors.hpp>
#include <zerofec/http_backend.hpp>

using Catch::Matchers::ContainsSubstring;

namespace {

// In-process stub model server. Routes are installed per test; the
// captured request bodies let tests pin the wire format byte for byte.
struct StubServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;
  std::mutex mu;
  std::vector<std::string> bodies;

  void capture(const httplib::Request& req) {
    std::lock_guard<std::mutex> lock(mu);
    bodies.push_back(req.body);
  }

  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  std::string url(const std::string& prefix = "") {
    return "http://127.0.0.1:" + std::to_string(port) + prefix;
  }

  ~StubServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
};

}  // namespace

TEST_CASE("backend URLs parse host, port and prefix", "[http]") {
  zerofec::HttpEndpoint ep = zerofec::parse_http_url("http://localhost:8080");
  CHECK(ep.host == "localhost");
  CHECK(ep.port == 8080);
  CHECK(ep.prefix.empty());

  ep = zerofec::parse_http_url("http://10.0.0.5");
  CHECK(ep.host == "10.0.0.5");
  CHECK(ep.port == 80);

  ep = zerofec::parse_http_url("http://models.internal:9000/serving/run/");
  CHECK(ep.host == "models.internal");
  CHECK(ep.port == 9000);
  CHECK(ep.prefix == "/serving/run");

  CHECK_THROWS_AS(zerofec::parse_http_url("https://models.internal"),
                  zerofec::ConfigError);
  CHECK_THROWS_AS(zerofec::parse_http_url("ftp://host"),
                  zerofec::ConfigError);
  CHECK_THROWS_AS(zerofec::parse_http_url("localhost:8080"),
                  zerofec::ConfigError);
  CHECK_THROWS_AS(zerofec::parse_http_url("http://host:"),
                  zerofec::ConfigError);
  CHECK_THROWS_AS(zerofec::parse_http_url("http://host:12ab"),
                  zerofec::ConfigError);
  CHECK_THROWS_AS(zerofec::parse_http_url("http://host:0"),
                  zerofec::ConfigError);
  CHECK_THROWS_AS(zerofec::parse_http_url("http://host:70000"),
                  zerofec::ConfigError);
  CHECK_THROWS_AS(zerofec::parse_http_url("http://:8080"),
                  zerofec::ConfigError);
}

TEST_CASE("generation round-trips the documented wire format", "[http]") {
  StubServer stub;
  stub.server.Post("/v1/generate", [&](const httplib::Request& req,
                                       httplib::Response& res) {
    stub.capture(req);
    nlohmann::json parsed = nlohmann::json::parse(req.body);
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& input : parsed["inputs"])
      outputs.push_back(input.get<std::string>() + " | beam=" +
                        std::to_string(parsed["beam_width"].get<int>()));
    nlohmann::json body;
    body["outputs"] = outputs;
    res.set_content(body.dump(), "application/json");
  });
  stub.start();

  zerofec::HttpGenerator gen("qg", stub.url(), "test-model");
  CHECK(gen.generate("anaphase \n a claim", 4) ==
        "anaphase \n a claim | beam=4");

  // Request keys ride in alphabetical order; the newline is escaped.
  REQUIRE(stub.bodies.size() == 1);
  CHECK(stub.bodies[0] ==
        "{\"beam_width\":4,\"inputs\":[\"anaphase \\n a claim\"],"
        "\"model\":\"test-model\"}");
}

TEST_CASE("generation honors a mounted path prefix", "[http]") {
  StubServer stub;
  stub.server.Post("/serving/v1/generate",
                   [&](const httplib::Request&, httplib::Response& res) {
                     res.set_content("{\"outputs\":[\"ok\"]}",
                                     "application/json");
                   });
  stub.start();
  zerofec::HttpGenerator gen("qg", stub.url("/serving"), "m");
  CHECK(gen.generate("p", 1) == "ok");
}

TEST_CASE("entailment round-trips the documented wire format", "[http]") {
  StubServer stub;
  stub.server.Post("/v1/entail", [&](const httplib::Request& req,
                                     httplib::Response& res) {
    stub.capture(req);
    res.set_content("{\"probability\":0.7222}", "application/json");
  });
  stub.start();

  zerofec::HttpEntailment nli("nli", stub.url());
  CHECK(nli.score("the evidence text", "the candidate text") == 0.7222);

  REQUIRE(stub.bodies.size() == 1);
  CHECK(stub.bodies[0] ==
        "{\"hypothesis\":\"the candidate text\","
        "\"premise\":\"the evidence text\"}");
}

TEST_CASE("out-of-range probability is a protocol error", "[http]") {
  StubServer stub;
  std::atomic<int> call{0};
  stub.server.Post("/v1/entail",
                   [&](const httplib::Request&, httplib::Response& res) {
                     const char* bodies[] = {"{\"probability\":1.5}",
                                             "{\"probability\":-0.1}"};
                     res.set_content(bodies[call++ % 2], "application/json");
                   });
  stub.start();

  zerofec::HttpEntailment nli("nli", stub.url());
  CHECK_THROWS_AS(nli.score("p", "h"), zerofec::ProtocolError);
  CHECK_THROWS_AS(nli.score("p", "h"), zerofec::ProtocolError);
}

TEST_CASE("non-200 statuses are backend errors", "[http]") {
  StubServer stub;
  stub.server.Post("/v1/generate",
                   [](const httplib::Request&, httplib::Response& res) {
                     res.status = 500;
                     res.set_content("boom", "text/plain");
                   });
  stub.server.Post("/v1/entail",
                   [](const httplib::Request&, httplib::Response& res) {
                     res.status = 503;
                   });
  stub.start();

  zerofec::HttpGenerator gen("qg", stub.url(), "m");
  try {
    gen.generate("p", 1);
    FAIL("expected BackendError");
  } catch (const zerofec::BackendError& e) {
    CHECK_THAT(e.what(), ContainsSubstring("500"));
  }
  zerofec::HttpEntailment nli("nli", stub.url());
  CHECK_THROWS_AS(nli.score("p", "h"), zerofec::BackendError);
}

TEST_CASE("malformed responses are protocol errors", "[http]") {
  StubServer stub;
  std::atomic<int> gen_call{0};
  stub.server.Post("/v1/generate",
                   [&](const httplib::Request&, httplib::Response& res) {
                     const char* bodies[] = {
                         "not json",
                         "{\"no_outputs\":true}",
                         "{\"outputs\":\"scalar\"}",
                         "{\"outputs\":[\"a\",\"b\"]}",
                         "{\"outputs\":[42]}",
                     };
                     res.set_content(bodies[gen_call++ % 5],
                                     "application/json");
                   });
  std::atomic<int> nli_call{0};
  stub.server.Post("/v1/entail",
                   [&](const httplib::Request&, httplib::Response& res) {
                     const char* bodies[] = {
                         "[]",
                         "{\"probability\":\"high\"}",
                         "{\"confidence\":0.5}",
                     };
                     res.set_content(bodies[nli_call++ % 3],
                                     "application/json");
                   });
  stub.start();

  zerofec::HttpGenerator gen("qg", stub.url(), "m");
  for (int i = 0; i < 5; ++i)
    CHECK_THROWS_AS(gen.generate("p", 1), zerofec::ProtocolError);

  zerofec::HttpEntailment nli("nli", stub.url());
  for (int i = 0; i < 3; ++i)
    CHECK_THROWS_AS(nli.score("p", "h"), zerofec::ProtocolError);
}

TEST_CASE("unreachable backend is a backend error", "[http]") {
  // Port 1 is reserved; loopback refuses the connection immediately.
  zerofec::HttpGenerator gen("qg", "http://127.0.0.1:1", "m");
  try {
    gen.generate("p", 1);
    FAIL("expected BackendError");
  } catch (const zerofec::BackendError& e) {
    CHECK_THAT(e.what(), ContainsSubstring("transport failure"));
  }
}

TEST_CASE("client pool serves concurrent requests", "[http]") {
  StubServer stub;
  std::atomic<int> served{0};
  stub.server.Post("/v1/generate", [&](const httplib::Request& req,
                                       httplib::Response& res) {
    ++served;
    nlohmann::json parsed = nlohmann::json::parse(req.body);
    nlohmann::json body;
    body["outputs"] =
        nlohmann::json::array({parsed["inputs"][0].get<std::string>()});
    res.set_content(body.dump(), "application/json");
  });
  stub.start();

  // Pool capacity below the thread count forces lease contention.
  zerofec::HttpGenerator gen("qg", stub.url(), "m", 3);
  std::atomic<int> failures{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 5; ++i) {
        std::string prompt = "p" + std::to_string(t) + "-" + std::to_string(i);
        if (gen.generate(prompt, 1) != prompt) ++failures;
      }
    });
  }
  for (std::thread& t : threads) t.join();
  CHECK(failures == 0);
  CHECK(served == 40);
}
