#include "tana/hub/server.hpp"

#include <charconv>
#include <cstdlib>

#include "httplib.h"
#include "tana/error.hpp"

namespace tana::hub {
namespace {

constexpr const char* kJson = "application/json";
constexpr std::chrono::milliseconds kPollInterval{100};

void send_error(httplib::Response& res, const Error& e) {
  res.status = http_status_for(e.code());
  res.set_content(error_body(e).dump(), kJson);
}

void send_json(httplib::Response& res, const nlohmann::ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

double parse_number(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorCode::MalformedQuery, what + " is not a number");
  }
  return v;
}

}  // namespace

std::optional<ListenAddress> parse_listen_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) return std::nullopt;
  ListenAddress addr;
  addr.host = text.substr(0, colon);
  const auto port_text = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), addr.port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || addr.port < 0 || addr.port > 65535) {
    return std::nullopt;
  }
  return addr;
}

HubServer::HubServer(Hub& hub) : hub_(hub), server_(std::make_unique<httplib::Server>()) {
  // Streams hold a worker each for their whole lifetime.
  server_->new_task_queue = [] { return new httplib::ThreadPool(64); };
  // The library default is SO_REUSEPORT, which lets a second process share an occupied port.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  server_->Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, nlohmann::ordered_json{{"status", "ok"}});
  });

  server_->Get("/v1/spaces", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, hub_.list_spaces());
  });

  server_->Get("/v1/admin/sensors", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, hub_.admin_sensors());
  });

  server_->Get("/v1/events", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const double since = req.has_param("since") ? parse_number(req.get_param_value("since"), "since") : 0.0;
      send_json(res, hub_.list_events(since));
    } catch (const Error& e) {
      send_error(res, e);
    }
  });

  server_->Post(R"(/v1/sensors/([^/]+)/rate)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("rate_hz") || !body["rate_hz"].is_number()) {
        throw Error(ErrorCode::MalformedQuery, "body must be {\"rate_hz\": number}");
      }
      const auto ack = hub_.post_rate_command(req.matches[1].str(), body["rate_hz"].get<double>());
      nlohmann::ordered_json out;
      out["applied_period_ticks"] = ack.applied_period_ticks;
      out["effective_from_tick"] = ack.effective_from_tick;
      send_json(res, out, 202);
    } catch (const Error& e) {
      send_error(res, e);
    }
  });

  server_->Get("/v1/stream", [this](const httplib::Request& req, httplib::Response& res) {
    std::shared_ptr<Subscription> sub;
    try {
      if (!req.has_param("view")) throw Error(ErrorCode::MalformedQuery, "view parameter is required");
      std::optional<spaces::PayloadKind> filter;
      if (req.has_param("kind")) {
        const auto kind_text = req.get_param_value("kind");
        filter = spaces::payload_kind_from_string(kind_text);
        if (!filter) throw Error(ErrorCode::MalformedQuery, "unknown kind " + kind_text);
      }
      sub = hub_.subscribe(req.get_param_value("view"), filter);
    } catch (const Error& e) {
      send_error(res, e);
      return;
    }
    const auto id = sub->id();
    res.set_chunked_content_provider(
        "application/x-ndjson",
        [sub](std::size_t, httplib::DataSink& sink) {
          if (auto line = sub->next(kPollInterval)) {
            line->push_back('\n');
            return sink.write(line->data(), line->size());
          }
          if (sub->exhausted()) sink.done();
          return sink.is_writable();
        },
        [this, id](bool) { hub_.unsubscribe(id); });
  });
}

HubServer::~HubServer() { stop(); }

int HubServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  return port_;
}

void HubServer::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HubServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace tana::hub
