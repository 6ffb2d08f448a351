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

// HTTP front end of the review service, versioned under /api/v1:
//
//   GET  /api/v1/health
//   GET  /api/v1/candidates?status=&predicate=&source=&min_confidence=
//                          &max_confidence=&offset=&limit=
//   GET  /api/v1/candidates/{id}
//   POST /api/v1/candidates/{id}/decision  {"decision", "predicate", "reviewer"}
//   GET  /api/v1/ontology/stats
//   GET  /api/v1/ontology/changes?since=
//   POST /api/v1/enrich                    {"url"}
//   GET  /api/v1/jobs/{id}
//
// Errors are {"error": message} with 400 (validation), 401 (token), 404,
// 409 (conflicting decision), 422 (data), 502 (upstream) or 500.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ontoenrich/review.hpp"

namespace ontoenrich {

struct ServerOptions {
  // When nonempty, every route except /api/v1/health requires
  // `Authorization: Bearer <token>`.
  std::string token;
  // Static assets (the review UI build) served at "/".
  std::optional<std::filesystem::path> staticDir;
};

// Runs one enrich job for a submitted URL and returns the number of queued
// candidates; throws on failure.
using EnrichJobRunner = std::function<std::size_t(const std::string& url)>;

class ReviewServer {
 public:
  ReviewServer(ReviewService& service, ServerOptions options, EnrichJobRunner runner = {});
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Returns the bound port; throws UpstreamError when binding fails.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready();

  // Blocks until every submitted enrich job has finished.
  void drain_jobs();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ontoenrich
