// Copyright 2026 The Authors.
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

#ifndef INFOFAIR_SERVICE_HPP_
#define INFOFAIR_SERVICE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/population_io.hpp"
#include "infofair/report_json.hpp"

namespace infofair {

struct Session {
  std::string id;
  PopulationFile file;
  std::string created;  // UTC, ISO 8601
  std::string parent;   // session this one was merged from, if any
};

// Append-only: sessions are never modified or removed once inserted.
class SessionStore {
 public:
  std::shared_ptr<const Session> add(PopulationFile file, std::string parent = {});
  std::shared_ptr<const Session> find(std::string_view id) const;
  std::vector<std::string> ids() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Session>, std::less<>> sessions_;
  std::uint64_t next_ = 1;
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  Json json() const { return Json::parse(body); }
};

// The HTTP API without the socket layer:
//   GET  /demos                         synth instances on offer
//   POST /demos/{name}                  session from a synth instance
//   POST /sessions                      session from a population file
//   GET  /sessions, /sessions/{id}
//   GET  /sessions/{id}/audit?predictor=&scope=
//   GET  /sessions/{id}/curves?predictor=&group=&points=[&format=csv]
//   POST /sessions/{id}/optimize        spec fields plus "predictor"
//   POST /sessions/{id}/merge           {"z","q","per_group","name"}
//   GET  /sessions/{id}/compare?base=&refined=&spec=
class Service {
 public:
  HttpResponse handle(const HttpRequest& request);
  SessionStore& sessions() { return store_; }

 private:
  SessionStore store_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
};

// The socket layer over a Service: loopback by default, CORS headers on
// every response.
class HttpServer {
 public:
  HttpServer(Service& service, ServeOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind();
  // Blocks until stop() is called from another thread.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Binds and blocks. Returns false when the address cannot be bound.
bool serve(Service& service, const ServeOptions& options, std::ostream& log);

}  // namespace infofair

#endif  // INFOFAIR_SERVICE_HPP_
