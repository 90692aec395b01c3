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

#include "infofair/service.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <charconv>
#include <chrono>
#include <ctime>
#include <mutex>
#include <set>

#include "infofair/commands.hpp"
#include "infofair/error.hpp"
#include "infofair/refinement.hpp"
#include "infofair/synth.hpp"

namespace infofair {
namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

HttpResponse json_response(int status, const Json& body) {
  return {status, "application/json", body.dump()};
}

HttpResponse error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, {{"error", code}, {"message", message}});
}

int status_for(const std::string& code) {
  static const std::set<std::string, std::less<>> not_found = {
      "unknown-predictor", "unknown-instance", "unknown-session", "not-found"};
  static const std::set<std::string, std::less<>> unprocessable = {
      "calibration", "not-refinement", "needs-two-groups", "degenerate-rate",
      "empty-scope", "infinite-divergence"};
  if (not_found.contains(code)) return 404;
  if (unprocessable.contains(code)) return 422;
  if (code == "duplicate-id") return 409;
  if (code == "lp-iterations") return 500;
  return 400;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t end = std::min(path.find('/', start), path.size());
    if (end > start) parts.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

const std::string& required(const HttpRequest& r, const std::string& key) {
  const auto it = r.query.find(key);
  if (it == r.query.end() || it->second.empty()) {
    throw Error("argument", fmt::format("query parameter \"{}\" is required", key));
  }
  return it->second;
}

std::string optional_param(const HttpRequest& r, const std::string& key, std::string fallback) {
  const auto it = r.query.find(key);
  return it == r.query.end() || it->second.empty() ? fallback : it->second;
}

std::size_t size_param(const HttpRequest& r, const std::string& key, std::size_t fallback) {
  const auto it = r.query.find(key);
  if (it == r.query.end() || it->second.empty()) return fallback;
  std::size_t value = 0;
  const auto [end, ec] =
      std::from_chars(it->second.data(), it->second.data() + it->second.size(), value);
  if (ec != std::errc() || end != it->second.data() + it->second.size()) {
    throw Error("argument", fmt::format("query parameter \"{}\" must be a nonnegative integer "
                                        "(got \"{}\")",
                                        key, it->second));
  }
  return value;
}

Json parse_body(const HttpRequest& r) {
  try {
    return Json::parse(r.body);
  } catch (const Json::parse_error& e) {
    throw Error("parse", fmt::format("request body is not JSON: {}", e.what()));
  }
}

// Spec from the "spec" query parameter (JSON) or from individual fields.
OptimizationSpec spec_from_query(const HttpRequest& r) {
  if (const auto it = r.query.find("spec"); it != r.query.end() && !it->second.empty()) {
    try {
      return spec_from_json(Json::parse(it->second));
    } catch (const Json::parse_error&) {
      throw Error("spec", "query parameter \"spec\" is not JSON");
    }
  }
  Json j = Json::object();
  for (const char* key : {"objective", "fairness_metric"}) {
    if (r.query.contains(key)) j[key] = r.query.at(key);
  }
  if (r.query.contains("h")) j["fairness_metric"] = r.query.at("h");
  for (const char* key : {"eps", "t_i", "t_u", "lambda_u", "lambda_i", "lambda_beta"}) {
    if (r.query.contains(key)) {
      try {
        j[key] = std::stod(r.query.at(key));
      } catch (const std::exception&) {
        throw Error("spec", fmt::format("query parameter \"{}\" must be a number", key));
      }
    }
  }
  for (const char* key : {"tau_u", "tau_l"}) {
    if (r.query.contains(key)) {
      try {
        j["impact_params"][key] = std::stod(r.query.at(key));
      } catch (const std::exception&) {
        throw Error("spec", fmt::format("query parameter \"{}\" must be a number", key));
      }
    }
  }
  return spec_from_json(j);
}

Json session_summary(const Session& s) {
  Json predictors = Json::array();
  for (const auto& p : s.file.predictors) predictors.push_back(p.name());
  return {{"id", s.id},
          {"created", s.created},
          {"parent", s.parent.empty() ? Json(nullptr) : Json(s.parent)},
          {"cells", s.file.population.size()},
          {"groups", {{"A", s.file.population.has_group(Group::A)},
                      {"B", s.file.population.has_group(Group::B)}}},
          {"predictors", std::move(predictors)},
          {"population", Json::parse(serialize_population(s.file))}};
}

HttpResponse created(const Session& s) {
  Json predictors = Json::array();
  for (const auto& p : s.file.predictors) predictors.push_back(p.name());
  return json_response(201, {{"id", s.id}, {"predictors", std::move(predictors)}});
}

}  // namespace

std::shared_ptr<const Session> SessionStore::add(PopulationFile file, std::string parent) {
  auto session = std::make_shared<Session>(Session{{}, std::move(file), utc_now(), std::move(parent)});
  std::unique_lock lock(mutex_);
  session->id = fmt::format("s{}", next_++);
  sessions_.emplace(session->id, session);
  return session;
}

std::shared_ptr<const Session> SessionStore::find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

HttpResponse Service::handle(const HttpRequest& r) {
  if (r.method == "OPTIONS") return {204, "text/plain", ""};
  const auto parts = split_path(r.path);
  const bool get = r.method == "GET";
  const bool post = r.method == "POST";
  try {
    if (parts.size() == 1 && parts[0] == "demos" && get) {
      Json list = Json::array();
      for (const auto& name : constructed_instance_names()) {
        const auto inst = constructed_instance(name);
        list.push_back({{"name", name},
                        {"cells", inst.population.size()},
                        {"two_groups", inst.population.has_both_groups()},
                        {"predictors", {inst.z.name(), inst.z_prime.name()}},
                        {"threshold", inst.threshold ? Json(*inst.threshold) : Json(nullptr)}});
      }
      return json_response(200, {{"instances", std::move(list)}});
    }
    if (parts.size() == 2 && parts[0] == "demos" && post) {
      return created(*store_.add(instance_file(constructed_instance(parts[1]))));
    }
    if (parts.size() == 1 && parts[0] == "sessions") {
      if (post) return created(*store_.add(parse_population(r.body)));
      if (get) return json_response(200, {{"sessions", store_.ids()}});
    }
    if (parts.size() < 2 || parts[0] != "sessions") {
      return error_response(404, "not-found", fmt::format("no route for {} {}", r.method, r.path));
    }
    const auto session = store_.find(parts[1]);
    if (!session) {
      return error_response(404, "unknown-session", fmt::format("no session \"{}\"", parts[1]));
    }
    const PopulationFile& file = session->file;
    const std::string action = parts.size() == 3 ? parts[2] : std::string();
    if (parts.size() == 2 && get) return json_response(200, session_summary(*session));
    if (action == "audit" && get) {
      const auto scopes = parse_scopes(optional_param(r, "scope", "all"));
      return json_response(200, audit_json(file, required(r, "predictor"), scopes));
    }
    if (action == "curves" && get) {
      const Group g = parse_group(required(r, "group"));
      const std::size_t points = size_param(r, "points", kDefaultCurvePoints);
      if (points < 2) throw Error("argument", "points must be at least 2");
      const std::string& predictor = required(r, "predictor");
      if (optional_param(r, "format", "json") == "csv") {
        const auto profile = score_profile(file.population, file.predictor(predictor));
        if (!profile.has(g)) throw Error("empty-scope", fmt::format("group {} has no cells", to_string(g)));
        const auto rows = sweep_curves(profile.group(g), curve_grid(profile.group(g), points));
        return {200, "text/csv", curves_csv(rows)};
      }
      return json_response(200, curves_json(file, predictor, g, points));
    }
    if (action == "optimize" && post) {
      const Json body = parse_body(r);
      if (!body.is_object() || !body.contains("predictor") || !body.at("predictor").is_string()) {
        throw Error("schema", "body needs a string field \"predictor\"");
      }
      const OptimizationSpec spec =
          spec_from_json(body.contains("spec") ? body.at("spec") : body);
      OptimizationResult result;
      Json j = optimize_json(file, body.at("predictor").get<std::string>(), spec, &result);
      return json_response(result.status == LpStatus::Optimal ? 200 : 422, j);
    }
    if (action == "merge" && post) {
      const Json body = parse_body(r);
      for (const char* key : {"z", "q"}) {
        if (!body.is_object() || !body.contains(key) || !body.at(key).is_string()) {
          throw Error("schema", fmt::format("body needs a string field \"{}\"", key));
        }
      }
      const bool per_group = body.value("per_group", false);
      const Predictor& z = file.predictor(body.at("z").get<std::string>());
      const Predictor& q = file.predictor(body.at("q").get<std::string>());
      std::string name = body.value("name", default_merge_name(z, q));
      if (file.has_predictor(name)) {
        throw Error("duplicate-id", fmt::format("session already has a predictor \"{}\"", name));
      }
      const auto report = merge_oracle(file.population, z, q,
                                       per_group ? Partition::PerGroup : Partition::Whole, name);
      PopulationFile next = file;
      next.predictors.push_back(report.result);
      const auto child = store_.add(std::move(next), session->id);
      return json_response(201, {{"session", child->id},
                                 {"predictor", name},
                                 {"report", to_json(file.population, report)}});
    }
    if (action == "compare" && get) {
      const std::vector<OptimizationSpec> specs = {spec_from_query(r)};
      return json_response(200, compare_json(file, required(r, "base"), required(r, "refined"),
                                             specs));
    }
    return error_response(404, "not-found", fmt::format("no route for {} {}", r.method, r.path));
  } catch (const Error& e) {
    return error_response(status_for(e.code()), e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

struct HttpServer::Impl {
  Impl(Service& s, ServeOptions o) : service(s), options(std::move(o)) {}
  Service& service;
  ServeOptions options;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service, ServeOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  auto& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", impl_->options.cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  const auto adapter = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    const HttpResponse response = impl_->service.handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  server.Get(".*", adapter);
  server.Post(".*", adapter);
  server.Options(".*", adapter);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& o = impl_->options;
  if (o.port == 0) return o.port = impl_->server.bind_to_any_port(o.host);
  return impl_->server.bind_to_port(o.host, o.port) ? o.port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool serve(Service& service, const ServeOptions& options, std::ostream& log) {
  HttpServer server(service, options);
  const int port = server.bind();
  if (port < 0) return false;
  log << fmt::format("listening on http://{}:{}\n", options.host, port) << std::flush;
  return server.listen();
}

}  // namespace infofair
