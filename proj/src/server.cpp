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

#include "ontoenrich/server.hpp"

#include <httplib.h>
#include <json.hpp>

#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <thread>

#include "ontoenrich/text.hpp"

namespace ontoenrich {

using nlohmann::json;

namespace {

struct Job {
  std::string id;
  std::string url;
  std::string status = "queued";  // queued, running, done, failed
  std::string message;
  std::size_t queued = 0;
};

json job_json(const Job& j) {
  return {{"id", j.id}, {"url", j.url}, {"status", j.status}, {"message", j.message},
          {"queued", j.queued}};
}

json change_json(const ChangeRecord& r) {
  return {{"version", r.version}, {"op", r.op}, {"subject", r.subject},
          {"predicate", std::string(to_string(r.predicate))}, {"object", r.object}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument(name);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ArgumentError(std::string("query parameter ") + name + " must be a non-negative integer");
  }
}

double double_param(const httplib::Request& req, const char* name, double fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(name);
    return d;
  } catch (const std::exception&) {
    throw ArgumentError(std::string("query parameter ") + name + " must be a number");
  }
}

ListQuery list_query(const httplib::Request& req) {
  ListQuery q;
  if (req.has_param("status")) {
    const std::string s = req.get_param_value("status");
    if (s == "any" || s.empty()) {
      q.status.reset();
    } else {
      q.status = parse_status(s);
      if (!q.status) throw ArgumentError("unknown status '" + s + "'");
    }
  }
  if (req.has_param("predicate")) {
    const std::string p = req.get_param_value("predicate");
    q.predicate = parse_label(p);
    if (!q.predicate) throw ArgumentError("unknown predicate '" + p + "'");
  }
  if (req.has_param("source")) q.source = req.get_param_value("source");
  q.minConfidence = double_param(req, "min_confidence", 0.0);
  q.maxConfidence = double_param(req, "max_confidence", 1.0);
  q.offset = size_param(req, "offset", 0);
  q.limit = std::min<std::size_t>(size_param(req, "limit", 50), 1000);
  return q;
}

Decision parse_decision(const std::string& id, const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception&) {
    throw ArgumentError("decision body must be a JSON object");
  }
  if (!j.is_object() || !j.contains("decision") || !j["decision"].is_string()) {
    throw ArgumentError("decision body needs a string field 'decision'");
  }
  Decision d;
  d.entryId = id;
  const auto kind = parse_decision_kind(j["decision"].get<std::string>());
  if (!kind) throw ArgumentError("decision must be accept, reject or accept-with-predicate");
  d.kind = *kind;
  if (j.contains("predicate") && !j["predicate"].is_null()) {
    if (!j["predicate"].is_string()) throw ArgumentError("predicate must be a string");
    d.predicate = parse_label(j["predicate"].get<std::string>());
    if (!d.predicate) throw ArgumentError("unknown predicate");
  }
  if (j.contains("reviewer") && j["reviewer"].is_string()) {
    d.reviewer = j["reviewer"].get<std::string>();
  }
  return d;
}

}  // namespace

struct ReviewServer::Impl {
  ReviewService& service;
  ServerOptions options;
  EnrichJobRunner runner;
  httplib::Server server;
  int port = 0;

  std::mutex jobMu;
  std::condition_variable jobCv;
  std::map<std::string, Job> jobs;
  std::deque<std::string> pending;
  bool running = false;  // a job is executing
  bool stopping = false;
  std::thread worker;

  Impl(ReviewService& s, ServerOptions o, EnrichJobRunner r)
      : service(s), options(std::move(o)), runner(std::move(r)) {
    routes();
    if (runner) worker = std::thread([this] { work(); });
  }

  ~Impl() {
    {
      std::lock_guard lock(jobMu);
      stopping = true;
    }
    jobCv.notify_all();
    if (worker.joinable()) worker.join();
  }

  void work() {
    for (;;) {
      std::string id;
      std::string url;
      {
        std::unique_lock lock(jobMu);
        jobCv.wait(lock, [&] { return stopping || !pending.empty(); });
        if (stopping) return;
        id = pending.front();
        pending.pop_front();
        jobs[id].status = "running";
        url = jobs[id].url;
        running = true;
      }
      Job result;
      try {
        result.queued = runner(url);
        result.status = "done";
      } catch (const std::exception& e) {
        result.status = "failed";
        result.message = e.what();
      }
      {
        std::lock_guard lock(jobMu);
        jobs[id].status = result.status;
        jobs[id].message = result.message;
        jobs[id].queued = result.queued;
        running = false;
      }
      jobCv.notify_all();
    }
  }

  template <typename F>
  void guarded(httplib::Response& res, F&& body) {
    try {
      body();
    } catch (const ArgumentError& e) {
      send_error(res, 400, e.what());
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    } catch (const ConflictError& e) {
      send_error(res, 409, e.what());
    } catch (const UpstreamError& e) {
      send_error(res, 502, e.what());
    } catch (const DataError& e) {
      send_error(res, 422, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  }

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (options.token.empty() || req.path == "/api/v1/health" ||
          req.path.rfind("/api/", 0) != 0) {
        return httplib::Server::HandlerResponse::Unhandled;
      }
      if (req.get_header_value("Authorization") != "Bearer " + options.token) {
        send_error(res, 401, "missing or invalid bearer token");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });

    server.Get("/api/v1/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}});
    });

    server.Get("/api/v1/candidates", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const ListQuery q = list_query(req);
        const ListPage page = service.list(q);
        json entries = json::array();
        for (const auto& e : page.entries) entries.push_back(json::parse(entry_to_json(e)));
        send_json(res, 200, {{"total", page.total}, {"offset", q.offset}, {"limit", q.limit},
                             {"entries", entries}});
      });
    });

    server.Get(R"(/api/v1/candidates/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   const std::string id = req.matches[1];
                   const auto e = service.get(id);
                   if (!e) throw NotFoundError("no review entry " + id);
                   send_json(res, 200, json::parse(entry_to_json(*e)));
                 });
               });

    server.Post(R"(/api/v1/candidates/([^/]+)/decision)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  try {
                    const Decision d = parse_decision(id, req.body);
                    const auto outcome = service.decide(d);
                    send_json(res, 200, {{"entry", json::parse(entry_to_json(outcome.entry))},
                                         {"replayed", outcome.replayed},
                                         {"version", outcome.version}});
                  } catch (const ConflictError& e) {
                    json body = {{"error", e.what()}};
                    if (auto current = service.get(id)) {
                      body["entry"] = json::parse(entry_to_json(*current));
                    }
                    send_json(res, 409, body);
                  } catch (...) {
                    guarded(res, [] { throw; });
                  }
                });

    server.Get("/api/v1/ontology/stats", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] {
        const auto s = service.stats();
        send_json(res, 200, {{"concepts", s.concepts}, {"relations", s.relations},
                             {"version", s.version}, {"pending", s.pending},
                             {"accepted", s.accepted}, {"rejected", s.rejected}});
      });
    });

    server.Get("/api/v1/ontology/changes",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   const auto since = size_param(req, "since", 0);
                   json changes = json::array();
                   for (const auto& r : service.changes_since(since)) changes.push_back(change_json(r));
                   send_json(res, 200, {{"since", since},
                                        {"version", service.stats().version},
                                        {"changes", changes}});
                 });
               });

    server.Post("/api/v1/enrich", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        if (!runner) throw UpstreamError("this service has no enrichment model configured");
        json j;
        try {
          j = json::parse(req.body);
        } catch (const json::exception&) {
          throw ArgumentError("enrich body must be a JSON object");
        }
        if (!j.is_object() || !j.contains("url") || !j["url"].is_string() ||
            trim(j["url"].get<std::string>()).empty()) {
          throw ArgumentError("enrich body needs a nonempty string field 'url'");
        }
        Job job;
        {
          std::lock_guard lock(jobMu);
          job.id = "job-" + std::to_string(jobs.size() + 1);
          job.url = trim(j["url"].get<std::string>());
          jobs[job.id] = job;
          pending.push_back(job.id);
        }
        jobCv.notify_all();
        send_json(res, 202, job_json(job));
      });
    });

    server.Get(R"(/api/v1/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        std::lock_guard lock(jobMu);
        auto it = jobs.find(req.matches[1]);
        if (it == jobs.end()) throw NotFoundError("no job " + std::string(req.matches[1]));
        send_json(res, 200, job_json(it->second));
      });
    });

    if (options.staticDir) server.set_mount_point("/", options.staticDir->string());
  }
};

ReviewServer::ReviewServer(ReviewService& service, ServerOptions options, EnrichJobRunner runner)
    : impl_(std::make_unique<Impl>(service, std::move(options), std::move(runner))) {}

ReviewServer::~ReviewServer() = default;

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    if (impl_->port < 0) throw UpstreamError("cannot bind " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      throw UpstreamError("cannot bind " + host + ":" + std::to_string(port));
    }
    impl_->port = port;
  }
  return impl_->port;
}

void ReviewServer::listen() { impl_->server.listen_after_bind(); }

void ReviewServer::stop() { impl_->server.stop(); }

void ReviewServer::wait_until_ready() { impl_->server.wait_until_ready(); }

void ReviewServer::drain_jobs() {
  std::unique_lock lock(impl_->jobMu);
  impl_->jobCv.wait(lock, [&] { return impl_->pending.empty() && !impl_->running; });
}

}  // namespace ontoenrich
