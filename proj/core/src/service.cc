// Copyright 2026 The OpenIME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "openime/service.h"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "openime/checkpoint.h"
#include "openime/error.h"
#include "openime/utf8.h"

namespace openime {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxTurnsPerSession = 4096;

HttpReply Json(int status, const json& body) { return {status, body.dump()}; }

HttpReply Error(int status, std::string_view code, std::string_view message,
                std::optional<std::size_t> offset = std::nullopt) {
  json body = {{"error_code", code}, {"message", message}};
  if (offset) body["offset"] = *offset;
  return Json(status, body);
}

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const json& Field(const json& body, const char* key, json::value_t type) {
  auto it = body.find(key);
  if (it == body.end()) throw BadRequest(std::string("missing field '") + key + "'");
  bool ok = it->type() == type ||
            (type == json::value_t::number_unsigned && it->is_number_integer() && *it >= 0);
  if (!ok) throw BadRequest(std::string("field '") + key + "' has the wrong type");
  return *it;
}

}  // namespace

struct ImeService::Impl {
  struct Session {
    std::chrono::system_clock::time_point created_at;
    std::uint64_t turn_counter = 0;
    std::set<std::uint64_t> open_turns;
  };

  Impl(OnlineEngine& e, ServiceConfig c) : engine(e), config(std::move(c)) {}

  OnlineEngine& engine;
  ServiceConfig config;

  std::mutex sessions_mutex;
  std::unordered_map<std::string, Session> sessions;
  std::mt19937_64 id_rng{std::random_device{}()};

  httplib::Server server;
  std::thread thread;
  bool bound = false;

  std::string NewSessionId() {
    // Caller holds sessions_mutex.
    for (;;) {
      std::string id = fmt::format("{:016x}{:016x}", id_rng(), id_rng());
      if (!sessions.contains(id)) return id;
    }
  }

  HttpReply CreateSession() {
    std::lock_guard lock(sessions_mutex);
    std::string id = NewSessionId();
    sessions[id].created_at = std::chrono::system_clock::now();
    return Json(200, {{"session_id", id}});
  }

  bool HasSession(const std::string& id) {
    std::lock_guard lock(sessions_mutex);
    return sessions.contains(id);
  }

  HttpReply Convert(const json& body) {
    const std::string id = Field(body, "session_id", json::value_t::string);
    const std::string pinyin = Field(body, "pinyin", json::value_t::string);
    if (!HasSession(id)) return Error(404, "unknown_session", "no session " + id);

    PendingTurn turn;
    try {
      turn = engine.Convert(pinyin);
    } catch (const InputError& e) {
      return Error(422, "unsegmentable_pinyin", e.what(), e.offset());
    }
    {
      std::lock_guard lock(sessions_mutex);
      auto it = sessions.find(id);
      if (it == sessions.end()) return Error(404, "unknown_session", "no session " + id);
      auto& open = it->second.open_turns;
      open.insert(turn.turn_id);
      if (open.size() > kMaxTurnsPerSession) open.erase(open.begin());
      ++it->second.turn_counter;
    }
    json candidates = json::array();
    for (const auto& c : turn.shown)
      candidates.push_back({{"text", U32ToUtf8(c.text)}, {"score", c.score}});
    return Json(200, {{"turn_id", turn.turn_id},
                      {"candidates", candidates},
                      {"page_size", config.page_size}});
  }

  HttpReply Select(const json& body) {
    const std::string id = Field(body, "session_id", json::value_t::string);
    const std::uint64_t turn_id = Field(body, "turn_id", json::value_t::number_unsigned);
    const std::string chosen_text = Field(body, "chosen_text", json::value_t::string);
    HanziSeq chosen;
    try {
      chosen = Utf8ToU32(chosen_text);
    } catch (const std::exception& e) {
      return Error(422, "bad_text", e.what());
    }
    {
      std::lock_guard lock(sessions_mutex);
      auto it = sessions.find(id);
      if (it == sessions.end()) return Error(404, "unknown_session", "no session " + id);
      if (!it->second.open_turns.contains(turn_id))
        return Error(409, "stale_turn",
                     fmt::format("turn {} is not open in this session", turn_id));
    }

    SessionTurn turn;
    try {
      turn = engine.Submit(turn_id, chosen);
    } catch (const StaleTurnError& e) {
      return Error(409, "stale_turn", e.what());
    } catch (const ContractError& e) {
      return Error(422, "length_mismatch", e.what());
    }
    {
      std::lock_guard lock(sessions_mutex);
      auto it = sessions.find(id);
      if (it != sessions.end()) it->second.open_turns.erase(turn_id);
    }
    json added = json::array();
    for (const auto& entry : turn.update.added) added.push_back(U32ToUtf8(entry.hanzi));
    return Json(200, {{"added_words", added},
                      {"vocab_size", turn.vocab_size},
                      {"flush_performed", turn.flushed}});
  }

  HttpReply Stats() {
    EngineStats s = engine.stats();
    json body = {{"vocab_size", s.vocab_size},
                 {"model_config", json::parse(ModelConfigJson(engine.model()->config()))},
                 {"turns", s.turns},
                 {"last_flush_turn", nullptr}};
    if (s.last_flush_turn) body["last_flush_turn"] = *s.last_flush_turn;
    return Json(200, body);
  }

  HttpReply Handle(std::string_view method, std::string_view path, std::string_view raw) {
    const bool post = method == "POST";
    const bool known = path == "/api/session" || path == "/api/convert" ||
                       path == "/api/select" || path == "/api/stats";
    if (!known) return Error(404, "not_found", "no route " + std::string(path));
    if (path == "/api/stats") {
      if (method != "GET") return Error(405, "method_not_allowed", "use GET");
      return Stats();
    }
    if (!post) return Error(405, "method_not_allowed", "use POST");
    if (path == "/api/session") return CreateSession();

    json body;
    try {
      body = json::parse(raw);
      if (!body.is_object()) throw BadRequest("body must be a JSON object");
      return path == "/api/convert" ? Convert(body) : Select(body);
    } catch (const json::exception& e) {
      return Error(400, "bad_request", e.what());
    } catch (const BadRequest& e) {
      return Error(400, "bad_request", e.what());
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", method, path, e.what());
      return Error(500, "internal", e.what());
    }
  }
};

ImeService::ImeService(OnlineEngine& engine, ServiceConfig config)
    : impl_(std::make_unique<Impl>(engine, std::move(config))) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    HttpReply reply = Handle(req.method, req.path, req.body);
    res.status = reply.status;
    res.set_content(reply.body, "application/json; charset=utf-8");
  };
  impl_->server.Post(R"(/api/.*)", route);
  impl_->server.Get(R"(/api/.*)", route);
  if (impl_->config.serve_ui && !impl_->config.static_dir.empty() &&
      !impl_->server.set_mount_point("/", impl_->config.static_dir))
    spdlog::warn("static dir {} not found; UI disabled", impl_->config.static_dir);
}

ImeService::~ImeService() { Stop(); }

HttpReply ImeService::Handle(std::string_view method, std::string_view path,
                             std::string_view body) {
  return impl_->Handle(method, path, body);
}

int ImeService::Start() {
  auto& server = impl_->server;
  int port = impl_->config.port;
  if (port == 0) {
    port = server.bind_to_any_port(impl_->config.host);
    if (port < 0) throw std::runtime_error("cannot bind " + impl_->config.host);
  } else if (!server.bind_to_port(impl_->config.host, port)) {
    throw std::runtime_error(fmt::format("cannot bind {}:{}", impl_->config.host, port));
  }
  impl_->bound = true;
  impl_->thread = std::thread([&server] { server.listen_after_bind(); });
  spdlog::info("listening on http://{}:{}", impl_->config.host, port);
  return port;
}

void ImeService::Run() {
  if (impl_->thread.joinable()) throw ContractError("service already started");
  auto& server = impl_->server;
  if (!server.bind_to_port(impl_->config.host, impl_->config.port))
    throw std::runtime_error(
        fmt::format("cannot bind {}:{}", impl_->config.host, impl_->config.port));
  impl_->bound = true;
  spdlog::info("listening on http://{}:{}", impl_->config.host, impl_->config.port);
  server.listen_after_bind();
}

void ImeService::Stop() {
  if (!impl_->bound) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->bound = false;
}

}  // namespace openime
