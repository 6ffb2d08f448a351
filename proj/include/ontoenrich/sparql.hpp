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

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace ontoenrich {

// One solution of a SELECT query: variable name -> bound value (IRI or
// literal lexical form).
using SparqlRow = std::map<std::string, std::string>;

class SparqlEndpoint {
 public:
  virtual ~SparqlEndpoint() = default;
  // Throws UpstreamError when the endpoint cannot answer.
  virtual std::vector<SparqlRow> select(const std::string& query) = 0;
};

struct HttpEndpointOptions {
  int maxAttempts = 4;
  std::chrono::milliseconds initialBackoff{200};
  std::chrono::seconds timeout{30};
  // Minimum spacing between requests to this endpoint; 0 disables.
  std::chrono::milliseconds minInterval{0};
};

// SPARQL protocol over HTTP GET with JSON results. Transport failures,
// 429 and 5xx responses are retried with exponential backoff.
class HttpSparqlEndpoint final : public SparqlEndpoint {
 public:
  explicit HttpSparqlEndpoint(std::string url, HttpEndpointOptions options = {});
  std::vector<SparqlRow> select(const std::string& query) override;

 private:
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  HttpEndpointOptions options_;
  std::mutex rate_mu_;
  std::chrono::steady_clock::time_point last_request_{};
};

// Caches results on disk, one file per query hash, so dataset builds are
// reproducible offline.
class CachedSparqlEndpoint final : public SparqlEndpoint {
 public:
  CachedSparqlEndpoint(std::shared_ptr<SparqlEndpoint> inner, std::filesystem::path dir);
  std::vector<SparqlRow> select(const std::string& query) override;

  std::filesystem::path cache_path(const std::string& query) const;

 private:
  std::shared_ptr<SparqlEndpoint> inner_;
  std::filesystem::path dir_;
};

std::vector<SparqlRow> parse_sparql_json(std::string_view body);
std::string format_sparql_json(const std::vector<SparqlRow>& rows,
                               const std::vector<std::string>& vars);

std::string url_encode(std::string_view s);

}  // namespace ontoenrich
