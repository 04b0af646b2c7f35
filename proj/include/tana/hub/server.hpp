#pragma once

#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "tana/hub/hub.hpp"

namespace httplib {
class Server;
}

namespace tana::hub {

struct ListenAddress {
  std::string host;
  int port = 0;
};

/// Parses "HOST:PORT". Returns nullopt when malformed.
std::optional<ListenAddress> parse_listen_address(const std::string& text);

/// HTTP/1.1 front end for a Hub:
///   GET  /v1/spaces
///   GET  /v1/stream?view=ID[&kind=K]   chunked JSONL
///   POST /v1/sensors/{id}/rate         {"rate_hz": number} -> 202
///   GET  /v1/events?since=S
///   GET  /v1/admin/sensors
///   GET  /v1/health
class HubServer {
 public:
  explicit HubServer(Hub& hub);
  ~HubServer();
  HubServer(const HubServer&) = delete;
  HubServer& operator=(const HubServer&) = delete;

  /// Binds the socket. Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves on a background thread; requires a successful bind().
  void start();
  void stop();
  int port() const { return port_; }

 private:
  Hub& hub_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace tana::hub
