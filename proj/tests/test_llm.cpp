#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "fixtures.hpp"
#include "hhgen/embed/remote.hpp"
#include "hhgen/llm/gateway.hpp"
#include "hhgen/llm/memory.hpp"
#include "hhgen/llm/remote.hpp"
#include "hhgen/llm/stub.hpp"

using namespace hhgen;
using namespace hhgen::llm;
using fixture::code_of;

namespace {

json simple_schema() {
  return json::parse(R"({"type":"object","required":["n"],"properties":{"n":{"type":"integer","minimum":1}}})");
}

std::string task_prompt(const json& input) { return render_task_prompt("", "count", "Give n.", input); }

Gateway scripted_gateway(std::shared_ptr<ScriptedProvider> stub) {
  Gateway gw(std::move(stub));
  gw.schemas().add("count", simple_schema());
  return gw;
}

/// Throws ProviderUnavailable `failures` times, then answers.
class FlakyProvider : public Provider {
 public:
  explicit FlakyProvider(int failures, ErrorCode code = ErrorCode::provider_unavailable)
      : failures_(failures), code_(code) {}
  std::string id() const override { return "flaky"; }
  std::string complete(const std::string&, const GenParams&) override {
    ++calls;
    if (calls <= failures_) fail(code_, "simulated");
    return "ok";
  }
  int calls = 0;

 private:
  int failures_;
  ErrorCode code_;
};

/// In-process HTTP server on an ephemeral port.
class TestServer {
 public:
  template <typename Handler>
  explicit TestServer(Handler h) {
    server_.Post("/v1/chat", h);
    server_.Post("/v1/embed", h);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(Schema, AcceptsAndRejects) {
  const auto s = json::parse(R"({
    "type":"object","required":["a","t"],"additionalProperties":false,
    "properties":{"a":{"type":"array","minItems":1,"items":{"type":"string","enum":["x","y"]}},
                  "t":{"type":"string","format":"hh:mm"},"k":{"type":["integer","null"],"maximum":3}}})");
  EXPECT_FALSE(validate_against(json::parse(R"({"a":["x"],"t":"07:05"})"), s));
  EXPECT_FALSE(validate_against(json::parse(R"({"a":["y"],"t":"23:59","k":null})"), s));
  EXPECT_TRUE(validate_against(json::parse(R"({"a":[],"t":"07:05"})"), s));
  EXPECT_TRUE(validate_against(json::parse(R"({"a":["z"],"t":"07:05"})"), s));
  EXPECT_TRUE(validate_against(json::parse(R"({"a":["x"],"t":"7:5"})"), s));
  EXPECT_TRUE(validate_against(json::parse(R"({"a":["x"],"t":"07:05","k":4})"), s));
  EXPECT_TRUE(validate_against(json::parse(R"({"a":["x"],"t":"07:05","extra":1})"), s));
  const auto err = validate_against(json::parse(R"({"a":["x", 3],"t":"07:05"})"), s);
  ASSERT_TRUE(err);
  EXPECT_NE(err->find("/a/1"), std::string::npos) << *err;
}

TEST(Prompt, RenderAndParse) {
  const json input{{"rooms", 3}};
  const auto p = render_task_prompt("## Task\nx\n", "room_program", "Plan rooms.", input);
  EXPECT_EQ(prompt_task(p), "room_program");
  EXPECT_EQ(prompt_input(p), input);
  EXPECT_EQ(parse_reply_json("Sure!\n" + fence_json(input) + "\nDone."), input);
  EXPECT_EQ(parse_reply_json("{\"a\": 1}"), json({{"a", 1}}));
}

TEST(Params, Validation) {
  GenParams p;
  EXPECT_NO_THROW(p.validate());
  p.temperature = -0.1;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::precondition);
  p = {};
  p.top_p = 1.5;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::precondition);
  p = {};
  p.max_tokens = 0;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::precondition);
  p = {};
  p.seed = 9;
  p.top_k = 40;
  EXPECT_EQ(json(p).get<GenParams>().seed, 9u);
}

TEST(Gateway, StructuredSucceedsFirstTry) {
  auto stub = std::make_shared<ScriptedProvider>();
  stub->push_json("count", {{"n", 2}});
  auto gw = scripted_gateway(stub);
  EXPECT_EQ(gw.generate_structured(task_prompt({}), "count", {"m", "s"}), json({{"n", 2}}));
  EXPECT_EQ(gw.ledger().total_calls(), 1);
}

TEST(Gateway, RepairLoopCountsCalls) {
  auto stub = std::make_shared<ScriptedProvider>();
  stub->push("count", "no json here");
  stub->push_json("count", {{"n", 0}});
  stub->push_json("count", {{"n", 5}});
  auto gw = scripted_gateway(stub);
  EXPECT_EQ(gw.generate_structured(task_prompt({}), "count", {"m", "s"}), json({{"n", 5}}));
  EXPECT_EQ(gw.ledger().total_calls(), 3);
  ASSERT_EQ(stub->prompts().size(), 3u);
  EXPECT_NE(stub->prompts()[1].find("### VALIDATION ERROR"), std::string::npos);
  EXPECT_NE(stub->prompts()[2].find("/n"), std::string::npos);
  EXPECT_EQ(prompt_task(stub->prompts()[2]), "count");
}

TEST(Gateway, StructureFailureAfterMaxRepairs) {
  auto stub = std::make_shared<ScriptedProvider>(std::vector<std::string>{}, nullptr);
  for (int i = 0; i < 4; ++i) stub->push_json("count", {{"n", "x"}});
  auto gw = scripted_gateway(stub);
  EXPECT_EQ(code_of([&] { gw.generate_structured(task_prompt({}), "count", gw.defaults(), {"m", "s"}, 2); }),
            ErrorCode::structure_failure);
  EXPECT_EQ(gw.ledger().total_calls(), 3);
  EXPECT_EQ(code_of([&] { gw.generate_structured(task_prompt({}), "count", gw.defaults(), {"m", "s"}, 0); }),
            ErrorCode::structure_failure);
  EXPECT_EQ(gw.ledger().total_calls(), 4);
}

TEST(Gateway, SemanticCheckTriggersRepair) {
  auto stub = std::make_shared<ScriptedProvider>();
  stub->push_json("count", {{"n", 7}});
  stub->push_json("count", {{"n", 3}});
  auto gw = scripted_gateway(stub);
  const auto v = gw.generate_structured(task_prompt({}), "count", gw.defaults(), {"m", "s"}, 2,
                                        [](const json& j) -> std::optional<std::string> {
                                          if (j.at("n").get<int>() > 4) return "n too large";
                                          return std::nullopt;
                                        });
  EXPECT_EQ(v.at("n"), 3);
  EXPECT_NE(stub->prompts()[1].find("n too large"), std::string::npos);
}

TEST(Gateway, RejectsEmptyPromptAndUnknownSchema) {
  auto gw = scripted_gateway(std::make_shared<ScriptedProvider>(std::vector<std::string>{"x"}));
  EXPECT_EQ(code_of([&] { gw.generate("", {"m", "s"}); }), ErrorCode::precondition);
  EXPECT_EQ(code_of([&] { gw.generate_structured("p", "missing", {"m", "s"}); }), ErrorCode::precondition);
  EXPECT_EQ(gw.ledger().total_calls(), 0);
}

TEST(Ledger, CountsPerModuleAndStep) {
  auto stub = std::make_shared<TemplateProvider>();
  Gateway gw(stub);
  gw.generate("a b c", {"environment", "room_program"});
  gw.generate("a", {"environment", "doors"});
  gw.generate("a", {"hri", "day_fill"});
  EXPECT_EQ(gw.ledger().module("environment").calls, 2);
  EXPECT_EQ(gw.ledger().module("environment").prompt_tokens, 4);
  EXPECT_EQ(gw.ledger().by_step().at("hri/day_fill").calls, 1);
  const auto j = gw.ledger().counts_json();
  EXPECT_FALSE(j.dump().find("seconds") != std::string::npos);
  EXPECT_EQ(CallLedger::modules_from_json(j).at("hri").calls, 1);
}

TEST(Ledger, ThreadSafe) {
  CallLedger ledger;
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t)
    ts.emplace_back([&] {
      for (int i = 0; i < 1000; ++i) ledger.record({"m", "s"}, 0.0, 1, 1);
    });
  for (auto& t : ts) t.join();
  EXPECT_EQ(ledger.total_calls(), 4000);
}

TEST(Stub, TemplateIsDeterministicPerSeed) {
  auto stub = std::make_shared<TemplateProvider>();
  stub->on("count", [](const json& in, Rng& rng) { return json{{"n", in.at("base").get<int>() + rng.between(1, 1000)}}; });
  GenParams a, b;
  a.seed = 1;
  b.seed = 2;
  const auto p = task_prompt({{"base", 10}});
  EXPECT_EQ(stub->complete(p, a), stub->complete(p, a));
  EXPECT_NE(stub->complete(p, a), stub->complete(p, b));
  EXPECT_GT(parse_reply_json(stub->complete(p, a)).at("n").get<int>(), 10);
  EXPECT_EQ(stub->complete("free text", a).rfind("stub reply ", 0), 0u);
}

TEST(Stub, ScriptedQueuesAndFallback) {
  auto fb = std::make_shared<TemplateProvider>();
  ScriptedProvider s({"g1"}, fb);
  s.push("count", "t1");
  EXPECT_EQ(s.complete(task_prompt({}), {}), "t1");
  EXPECT_EQ(s.complete(task_prompt({}), {}), "g1");
  EXPECT_EQ(s.complete(task_prompt({}), {}).rfind("stub reply", 0), 0u);
  ScriptedProvider empty;
  EXPECT_EQ(code_of([&] { empty.complete("x", {}); }), ErrorCode::precondition);
}

TEST(Retry, BacksOffThenSucceeds) {
  auto flaky = std::make_shared<FlakyProvider>(2);
  std::vector<double> sleeps;
  RetryPolicy pol;
  pol.jitter = 0.0;
  RetryingProvider r(flaky, pol, [&](double s) { sleeps.push_back(s); });
  EXPECT_EQ(r.complete("x", {}), "ok");
  EXPECT_EQ(flaky->calls, 3);
  EXPECT_EQ(sleeps, (std::vector<double>{0.5, 1.0}));
}

TEST(Retry, GivesUpAndPassesRefusalsThrough) {
  auto down = std::make_shared<FlakyProvider>(100);
  RetryingProvider r(down, {}, [](double) {});
  EXPECT_EQ(code_of([&] { r.complete("x", {}); }), ErrorCode::provider_unavailable);
  EXPECT_EQ(down->calls, 4);
  auto refused = std::make_shared<FlakyProvider>(100, ErrorCode::provider_refused);
  RetryingProvider r2(refused, {}, [](double) {});
  EXPECT_EQ(code_of([&] { r2.complete("x", {}); }), ErrorCode::provider_refused);
  EXPECT_EQ(refused->calls, 1);
}

TEST(Memory, PreambleAndOrdering) {
  ContextualMemory m{"Build a home.", {"a", "b", "c"}, {}, "Be tidy."};
  m = record_step(m, "a", "done a");
  const auto pre = build_context_preamble(m);
  EXPECT_LT(pre.find("## Task"), pre.find("## Pipeline steps"));
  EXPECT_LT(pre.find("## Pipeline steps"), pre.find("## Completed steps"));
  EXPECT_LT(pre.find("## Completed steps"), pre.find("## Current step requirements"));
  EXPECT_NE(pre.find("- a: done a"), std::string::npos);
  EXPECT_NE(pre.find("2. b"), std::string::npos);
  EXPECT_EQ(code_of([&] { record_step(m, "z", ""); }), ErrorCode::unknown_step);
  EXPECT_EQ(code_of([&] { record_step(m, "a", ""); }), ErrorCode::duplicate_step);
  const auto m2 = record_step(m, "c", "skip b");
  EXPECT_EQ(code_of([&] { record_step(m2, "b", ""); }), ErrorCode::precondition);
  EXPECT_EQ(build_context_preamble(m), pre);
}

TEST(Remote, ChatRequestAndReply) {
  json seen;
  std::string auth;
  TestServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"message":{"content":"hello"},"finish_reason":"stop"}]})", "application/json");
  });
  ::setenv("HHGEN_TEST_TOKEN", "sekrit", 1);
  RemoteChatProvider p({server.url("/v1/chat"), "m1", "HHGEN_TEST_TOKEN", 5.0});
  GenParams params;
  params.seed = 4;
  EXPECT_EQ(p.complete("hi", params), "hello");
  EXPECT_EQ(seen.at("model"), "m1");
  EXPECT_EQ(seen.at("messages")[0].at("content"), "hi");
  EXPECT_EQ(seen.at("seed"), 4);
  EXPECT_FALSE(seen.contains("top_k"));
  EXPECT_EQ(auth, "Bearer sekrit");
}

TEST(Remote, ErrorMapping) {
  std::atomic<int> mode{0};
  TestServer server([&](const httplib::Request&, httplib::Response& res) {
    switch (mode.load()) {
      case 0: res.status = 503; break;
      case 1: res.status = 429; break;
      case 2: res.set_content("not json", "text/plain"); break;
      case 3: res.set_content(R"({"choices":[{"message":{"content":null,"refusal":"no"}}]})", "application/json"); break;
      case 4:
        res.set_content(R"({"choices":[{"message":{"content":"x"},"finish_reason":"content_filter"}]})",
                        "application/json");
        break;
      default: res.set_content(R"({"unexpected":true})", "application/json");
    }
  });
  RemoteChatProvider p({server.url("/v1/chat"), "m", "", 5.0});
  const ErrorCode expected[] = {ErrorCode::provider_unavailable, ErrorCode::provider_unavailable,
                                ErrorCode::provider_unavailable, ErrorCode::provider_refused,
                                ErrorCode::provider_refused, ErrorCode::provider_unavailable};
  for (int m = 0; m < 6; ++m) {
    mode = m;
    EXPECT_EQ(code_of([&] { p.complete("x", {}); }), expected[m]) << "mode " << m;
  }
}

TEST(Remote, UnreachableIsUnavailable) {
  RemoteChatProvider p({"http://127.0.0.1:1/v1/chat", "m", "", 1.0});
  EXPECT_EQ(code_of([&] { p.complete("x", {}); }), ErrorCode::provider_unavailable);
  EXPECT_EQ(code_of([] { RemoteChatProvider bad({"", "m", "", 1.0}); }), ErrorCode::config);
}

TEST(Remote, EmbeddingEndpoint) {
  TestServer server([&](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    const double n = static_cast<double>(body.at("input").get<std::string>().size());
    res.set_content(json{{"data", {{{"embedding", {n, 1.0}}}}}}.dump(), "application/json");
  });
  embed::RemoteEmbedder e({server.url("/v1/embed"), "emb", "", 5.0});
  EXPECT_EQ(e.embed_text("abc"), (embed::Embedding{3.0, 1.0}));
}
