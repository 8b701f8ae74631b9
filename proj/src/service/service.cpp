#include "eo/service/service.hpp"

#include <httplib.h>

#include "eo/bsl/parser.hpp"
#include "eo/graph/portable.hpp"
#include "eo/models/analysis.hpp"

namespace eo::service
{

namespace
{

Reply error(int status, const std::string & code, const std::string & message)
{
  return {status, {{"error", code}, {"message", message}}};
}

Scalar value_from_json(const nlohmann::json & j)
{
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? 1.0 : 0.0;
  if (j.is_null()) return Scalar{};
  throw engine::InvalidValue("value must be a number or a string");
}

nlohmann::json cascade_json(const engine::Engine & engine, const engine::CascadeResult & r)
{
  nlohmann::json derived = nlohmann::json::array();
  for (const auto & id : r.derived) derived.push_back(graph::to_json(engine.graph().at(id)));
  return {{"seed", r.seed ? nlohmann::json(r.seed->hex()) : nlohmann::json(nullptr)},
          {"derived", derived},
          {"evaluations", r.evaluations},
          {"status", r.status == engine::CascadeStatus::Quiescent ? "Quiescent" : "DepthExceeded"},
          {"errors", r.errors}};
}

template <typename Fn>
Reply guarded(Fn && fn)
{
  try {
    return fn();
  } catch (const engine::ActionUnavailable & e) {
    return error(409, e.code(), e.what());
  } catch (const engine::NotEditable & e) {
    return error(409, e.code(), e.what());
  } catch (const engine::InvalidValue & e) {
    return error(400, e.code(), e.what());
  } catch (const engine::EngineError & e) {
    return error(404, e.code(), e.what());
  } catch (const graph::GraphError & e) {
    return error(404, e.code(), e.what());
  } catch (const UnknownView & e) {
    return error(404, "UnknownView", e.what());
  } catch (const engine::RegistrationFailed & e) {
    return {422, {{"ok", false}, {"report", e.report().to_json()}}};
  } catch (const bsl::BslError & e) {
    return {400, {{"error", "ParseError"},
                  {"message", e.detail()},
                  {"line", e.location().line},
                  {"column", e.location().column}}};
  } catch (const nlohmann::json::exception & e) {
    return error(400, "BadRequest", e.what());
  }
}

}  // namespace

Service::Service(engine::Engine engine) : engine_(std::move(engine))
{
  engine_.graph().subscribe([this](const graph::Event &) { appended_.notify_all(); });
}

Service::~Service() { close(); }

void Service::close()
{
  closing_ = true;
  appended_.notify_all();
}

Reply Service::view(std::string_view name) const
{
  return guarded([&] { return read([&](const engine::Engine & e) { return Reply{200, resolve_view(e, name).to_json()}; }); });
}

Reply Service::mutate(std::string_view individual, std::string_view property, std::string_view body, bool action)
{
  return guarded([&] {
    nlohmann::json request = body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
    Scalar value = 1.0;
    if (request.contains("value")) {
      value = value_from_json(request["value"]);
    } else if (!action) {
      return error(400, "BadRequest", "body must carry a value");
    }
    std::string actor = request.value("actor", std::string("player"));
    std::unique_lock lock(mutex_);
    auto result = action ? engine_.trigger_action(individual, property, value, actor)
                         : engine_.set_property(individual, property, value, actor);
    nlohmann::json view = nullptr;
    auto views = views_of(engine_, individual);
    if (!views.empty()) view = resolve_view(engine_, views.front()).to_json();
    return Reply{200, {{"result", cascade_json(engine_, result)}, {"view", view}}};
  });
}

Reply Service::trigger(std::string_view individual, std::string_view action, std::string_view body)
{
  return mutate(individual, action, body, true);
}

Reply Service::set(std::string_view individual, std::string_view property, std::string_view body)
{
  return mutate(individual, property, body, false);
}

Reply Service::trace(std::string_view event_id, std::optional<int> depth) const
{
  auto id = EventId::parse(event_id);
  if (!id) return error(400, "BadRequest", "malformed event id");
  if (depth && *depth < 0) return error(400, "BadRequest", "depth must be non-negative");
  return guarded([&] {
    return read([&](const engine::Engine & e) {
      if (!e.graph().contains(*id)) return error(404, "UnknownEvent", "no event " + std::string(event_id));
      auto t = e.graph().causal_trace(*id, depth.value_or(16));
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto & n : t.nodes) nodes.push_back(graph::to_json(e.graph().at(n)));
      nlohmann::json edges = nlohmann::json::array();
      for (const auto & [effect, cause] : t.edges) edges.push_back({effect.hex(), cause.hex()});
      return Reply{200, {{"root", t.root.hex()}, {"depth", t.depth}, {"nodes", nodes}, {"edges", edges}}};
    });
  });
}

Reply Service::analysis() const
{
  return read([](const engine::Engine & e) { return Reply{200, models::analyze(e.registry()).to_json()}; });
}

Reply Service::load(std::string_view bsl_source)
{
  return guarded([&] {
    auto doc = bsl::parse_document(bsl_source);
    std::unique_lock lock(mutex_);
    auto r = engine_.load(doc);
    nlohmann::json names = nlohmann::json::array();
    for (const auto & id : r.individuals) names.push_back(engine_.graph().individual_name(id));
    return Reply{200, {{"ok", true},
                       {"report", r.report.to_json()},
                       {"individuals", names},
                       {"genesis", cascade_json(engine_, r.genesis)}}};
  });
}

std::optional<std::size_t> Service::position_after(const EventId & since) const
{
  return read([&](const engine::Engine & e) -> std::optional<std::size_t> {
    if (!e.graph().contains(since)) return std::nullopt;
    return e.graph().position(since) + 1;
  });
}

std::vector<nlohmann::json> Service::events_from(std::size_t from) const
{
  return read([&](const engine::Engine & e) {
    std::vector<nlohmann::json> out;
    const auto & events = e.graph().events();
    for (std::size_t i = from; i < events.size(); ++i) out.push_back(graph::to_json(events[i]));
    return out;
  });
}

std::size_t Service::event_count() const
{
  return read([](const engine::Engine & e) { return e.graph().size(); });
}

bool Service::wait_for_events(std::size_t known, std::chrono::milliseconds timeout) const
{
  std::shared_lock lock(mutex_);
  return appended_.wait_for(lock, timeout, [&] { return closing_ || engine_.graph().size() > known; }) &&
         engine_.graph().size() > known;
}

HttpServer::HttpServer(Service & service) : service_(service), server_(std::make_unique<httplib::Server>())
{
  routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string & host, int port)
{
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::start()
{
  thread_ = std::thread([this] { run(); });
  server_->wait_until_ready();
}

void HttpServer::stop()
{
  service_.close();
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

void HttpServer::routes()
{
  auto send = [](httplib::Response & res, const Reply & r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto & s = service_;

  server_->Get(R"(/api/views/(.+))", [&, send](const httplib::Request & req, httplib::Response & res) {
    send(res, s.view(req.matches[1].str()));
  });
  server_->Post(R"(/api/individuals/(.+)/actions/([^/]+))",
                [&, send](const httplib::Request & req, httplib::Response & res) {
                  send(res, s.trigger(req.matches[1].str(), req.matches[2].str(), req.body));
                });
  server_->Post(R"(/api/individuals/(.+)/properties/([^/]+))",
                [&, send](const httplib::Request & req, httplib::Response & res) {
                  send(res, s.set(req.matches[1].str(), req.matches[2].str(), req.body));
                });
  server_->Get(R"(/api/trace/([0-9a-fA-F]+))", [&, send](const httplib::Request & req, httplib::Response & res) {
    std::optional<int> depth;
    if (req.has_param("depth")) {
      try {
        depth = std::stoi(req.get_param_value("depth"));
      } catch (const std::exception &) {
        return send(res, error(400, "BadRequest", "depth must be an integer"));
      }
    }
    send(res, s.trace(req.matches[1].str(), depth));
  });
  server_->Get("/api/analysis", [&, send](const httplib::Request &, httplib::Response & res) { send(res, s.analysis()); });
  server_->Post("/api/load", [&, send](const httplib::Request & req, httplib::Response & res) {
    send(res, s.load(req.body));
  });
  server_->Get("/api/events", [&, send](const httplib::Request & req, httplib::Response & res) {
    std::string since = req.has_param("since") ? req.get_param_value("since") : req.get_header_value("Last-Event-ID");
    std::size_t start = 0;
    if (!since.empty()) {
      auto id = EventId::parse(since);
      auto pos = id ? s.position_after(*id) : std::nullopt;
      if (!pos) return send(res, error(404, "UnknownEvent", "no event " + since));
      start = *pos;
    }
    auto cursor = std::make_shared<std::size_t>(start);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [&s, cursor](std::size_t, httplib::DataSink & sink) {
      if (s.closing()) {
        sink.done();
        return true;
      }
      auto events = s.events_from(*cursor);
      for (const auto & e : events) {
        std::string msg = "id: " + e["id"].get<std::string>() + "\nevent: event\ndata: " + e.dump() + "\n\n";
        if (!sink.write(msg.data(), msg.size())) return false;
        ++*cursor;
      }
      if (events.empty()) s.wait_for_events(*cursor, std::chrono::milliseconds(250));
      return sink.is_writable();
    });
  });
}

}  // namespace eo::service
