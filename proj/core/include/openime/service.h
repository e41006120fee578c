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


// Local JSON-over-HTTP front end for one shared OnlineEngine.
//
// Sessions only do turn bookkeeping: a turn id can be selected from the
// session that converted it. Requests can also be fed to Handle() directly,
// which is what the tests do.

#ifndef OPENIME_SERVICE_H_
#define OPENIME_SERVICE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "openime/engine.h"

namespace openime {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8601;
  // Serve files from static_dir under "/" when serve_ui is set.
  bool serve_ui = false;
  std::string static_dir;
  std::size_t page_size = 5;
};

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

class ImeService {
 public:
  ImeService(OnlineEngine& engine, ServiceConfig config = {});
  ~ImeService();
  ImeService(const ImeService&) = delete;
  ImeService& operator=(const ImeService&) = delete;

  // Routes one API request without going through a socket.
  HttpReply Handle(std::string_view method, std::string_view path, std::string_view body);

  // Binds and serves on a background thread. Returns the bound port (useful
  // with port 0). Throws std::runtime_error when the bind fails.
  int Start();
  // Binds and serves on the calling thread until Stop() is called from
  // another thread. Use instead of Start().
  void Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace openime

#endif  // OPENIME_SERVICE_H_
