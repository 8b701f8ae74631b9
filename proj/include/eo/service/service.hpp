#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "eo/engine/engine.hpp"
#include "eo/service/view.hpp"

namespace httplib
{
class Server;
}

namespace eo::service
{

struct Reply
{
  int status = 200;
  nlohmann::json body;
};

/**
 * Engine access for request handlers. Mutations take the lock exclusively, so each
 * request plus its cascade commits before the next one starts; queries share it.
 */
class Service
{
public:
  explicit Service(engine::Engine engine = {});
  ~Service();
  Service(const Service &) = delete;
  Service & operator=(const Service &) = delete;

  Reply view(std::string_view name) const;
  Reply trigger(std::string_view individual, std::string_view action, std::string_view body);
  Reply set(std::string_view individual, std::string_view property, std::string_view body);
  Reply trace(std::string_view event_id, std::optional<int> depth) const;
  Reply analysis() const;
  Reply load(std::string_view bsl_source);

  /// Append position just past `since`; nullopt when the id is unknown.
  std::optional<std::size_t> position_after(const EventId & since) const;
  /// Portable records from append position `from` onwards.
  std::vector<nlohmann::json> events_from(std::size_t from) const;
  /// Blocks until the graph holds more than `known` events, the timeout passes, or close() is called.
  bool wait_for_events(std::size_t known, std::chrono::milliseconds timeout) const;
  std::size_t event_count() const;

  /// Wakes every waiter and makes further waits return immediately.
  void close();
  bool closing() const { return closing_; }

  /// Runs `fn` with shared access to the engine.
  template <typename Fn>
  auto read(Fn && fn) const
  {
    std::shared_lock lock(mutex_);
    return fn(engine_);
  }

private:
  Reply mutate(std::string_view individual, std::string_view property, std::string_view body, bool action);

  mutable std::shared_mutex mutex_;
  mutable std::condition_variable_any appended_;
  engine::Engine engine_;
  std::atomic<bool> closing_{false};
};

/// HTTP front end over a Service.
class HttpServer
{
public:
  explicit HttpServer(Service & service);
  ~HttpServer();

  /// Binds to host:port; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string & host, int port);
  /// Serves on the calling thread until stop().
  void run();
  /// Serves on a background thread.
  void start();
  void stop();

private:
  void routes();

  Service & service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace eo::service
