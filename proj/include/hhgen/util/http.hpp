#pragma once

// Minimal JSON-over-HTTP POST used by the remote LLM and embedding clients.
// Transport problems and 5xx/429 answers surface as ProviderUnavailable so
// the retry layer can act on them.

#include <httplib.h>
// resolv.h, pulled in by httplib, defines _res as a macro; Eigen uses it as
// a parameter name.
#undef _res
#include <json.hpp>

#include <cstdlib>
#include <string>

#include "hhgen/error.hpp"

namespace hhgen::http {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/...
};

inline Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) fail(ErrorCode::config, "endpoint URL needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

/// Reads a bearer token from the named environment variable; empty if unset.
inline std::string token_from_env(const std::string& var) {
  if (var.empty()) return {};
  const char* v = std::getenv(var.c_str());
  return v ? v : "";
}

inline nlohmann::json post_json(const std::string& url, const nlohmann::json& body, const std::string& token,
                                double timeout_seconds) {
  const Endpoint ep = split_url(url);
  httplib::Client client(ep.base);
  if (!client.is_valid()) fail(ErrorCode::config, "unsupported endpoint (HTTPS needs OpenSSL support): " + url);
  const auto usec = static_cast<long>(timeout_seconds * 1e6);
  client.set_connection_timeout(usec / 1000000, usec % 1000000);
  client.set_read_timeout(usec / 1000000, usec % 1000000);
  client.set_write_timeout(usec / 1000000, usec % 1000000);
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  auto res = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!res) fail(ErrorCode::provider_unavailable, "request to " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500)
    fail(ErrorCode::provider_unavailable, "HTTP " + std::to_string(res->status) + " from " + url);
  if (res->status >= 400)
    fail(ErrorCode::provider_unavailable, "HTTP " + std::to_string(res->status) + " from " + url + ": " + res->body);
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::provider_unavailable, "malformed response from " + url + ": " + e.what());
  }
}

}  // namespace hhgen::http
