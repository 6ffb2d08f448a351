// Copyright 2026 The ontoenrich Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ontoenrich/sparql.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cctype>
#include <thread>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

using nlohmann::json;

std::string url_encode(std::string_view s) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (char raw : s) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

std::vector<SparqlRow> parse_sparql_json(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw UpstreamError(std::string("malformed SPARQL JSON: ") + e.what());
  }
  std::vector<SparqlRow> rows;
  const auto results = doc.find("results");
  if (results == doc.end() || !results->contains("bindings")) {
    throw UpstreamError("SPARQL JSON lacks results.bindings");
  }
  for (const auto& binding : (*results)["bindings"]) {
    SparqlRow row;
    for (const auto& [var, term] : binding.items()) {
      row[var] = term.value("value", "");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_sparql_json(const std::vector<SparqlRow>& rows,
                               const std::vector<std::string>& vars) {
  json bindings = json::array();
  for (const auto& row : rows) {
    json b = json::object();
    for (const auto& [var, value] : row) {
      const bool iri = value.rfind("http://", 0) == 0 || value.rfind("https://", 0) == 0;
      b[var] = {{"type", iri ? "uri" : "literal"}, {"value", value}};
    }
    bindings.push_back(std::move(b));
  }
  json doc = {{"head", {{"vars", vars}}}, {"results", {{"bindings", bindings}}}};
  return doc.dump();
}

HttpSparqlEndpoint::HttpSparqlEndpoint(std::string url, HttpEndpointOptions options)
    : options_(options) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ArgumentError("endpoint URL needs a scheme: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::vector<SparqlRow> HttpSparqlEndpoint::select(const std::string& query) {
  if (options_.minInterval.count() > 0) {
    std::lock_guard<std::mutex> lock(rate_mu_);
    const auto next = last_request_ + options_.minInterval;
    const auto now = std::chrono::steady_clock::now();
    if (now < next) std::this_thread::sleep_for(next - now);
    last_request_ = std::chrono::steady_clock::now();
  }
  const std::string target = path_ + (path_.find('?') == std::string::npos ? "?" : "&") +
                             "query=" + url_encode(query) +
                             "&format=" + url_encode("application/sparql-results+json");
  httplib::Headers headers = {{"Accept", "application/sparql-results+json"}};
  std::string last_error;
  auto backoff = options_.initialBackoff;
  for (int attempt = 1; attempt <= options_.maxAttempts; ++attempt) {
    httplib::Client client(origin_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    auto res = client.Get(target, headers);
    if (res && res->status == 200) return parse_sparql_json(res->body);
    if (res) {
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status != 429 && res->status < 500) break;
    } else {
      last_error = httplib::to_string(res.error());
    }
    if (attempt < options_.maxAttempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw UpstreamError("SPARQL endpoint " + origin_ + path_ + " failed: " + last_error);
}

CachedSparqlEndpoint::CachedSparqlEndpoint(std::shared_ptr<SparqlEndpoint> inner,
                                           std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path CachedSparqlEndpoint::cache_path(const std::string& query) const {
  return dir_ / (hex64(fnv1a64(query)) + ".json");
}

std::vector<SparqlRow> CachedSparqlEndpoint::select(const std::string& query) {
  const auto path = cache_path(query);
  if (std::filesystem::exists(path)) {
    const json doc = json::parse(read_file(path));
    if (doc.value("query", "") == query) return parse_sparql_json(doc["response"].dump());
  }
  auto rows = inner_->select(query);
  std::vector<std::string> vars;
  if (!rows.empty()) {
    for (const auto& [k, v] : rows.front()) vars.push_back(k);
  }
  json doc = {{"query", query}, {"response", json::parse(format_sparql_json(rows, vars))}};
  write_file_atomic(path, doc.dump(1));
  return rows;
}

}  // namespace ontoenrich
