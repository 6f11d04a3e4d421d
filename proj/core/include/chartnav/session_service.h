#ifndef CHARTNAV_SESSION_SERVICE_H_
#define CHARTNAV_SESSION_SERVICE_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chartnav/data_table.h"
#include "chartnav/description.h"
#include "chartnav/navigation.h"
#include "chartnav/spec_model.h"
#include "chartnav/structure.h"

namespace chartnav {

// Everything a live session needs. The spec and structure are shared
// read-only; `state` is guarded by `mutex`.
struct SessionRecord {
  std::string session_id;
  std::shared_ptr<const ChartSpec> spec;
  std::shared_ptr<const AccessStructure> structure;
  SessionState state;
  DescriptionConfig config;
  std::chrono::system_clock::time_point created_at;
  std::chrono::steady_clock::time_point last_used;
  // Kept so a session can be dumped and rebuilt.
  std::string spec_text;
  std::string data_text;
  DataFormat data_format = DataFormat::kDelimited;
  std::mutex mutex;
};

// Machine-readable protocol error.
struct ServiceError {
  int http_status = 400;
  std::string code;  // e.g. SESSION_GONE, SCHEMA_ERROR
  std::string message;
};

struct CreateSessionRequest {
  std::string spec_text;
  std::string data_text;
  DataFormat data_format = DataFormat::kDelimited;
  StructureConfig structure_config;
  DescriptionConfig description_config;
};

struct CreateSessionResponse {
  std::string session_id;
  Utterance summary;
  std::string structure_dump;  // JSON
};

struct LandmarkEntry {
  std::string id;
  std::string label;
};

// In-memory session store with idle eviction. Thread-safe; commands to one
// session are applied one at a time in arrival order.
class SessionManager {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  static constexpr std::chrono::minutes kDefaultIdleTimeout{30};

  explicit SessionManager(std::chrono::steady_clock::duration idle_timeout = kDefaultIdleTimeout,
                          Clock clock = {});

  // Throws chartnav::Error subclasses for bad specs, data or configs.
  CreateSessionResponse Create(const CreateSessionRequest& request);

  // nullopt when the session is unknown or evicted.
  std::optional<NavResult> Apply(std::string_view session_id, const NavCommand& command);
  std::optional<std::vector<LandmarkEntry>> Landmarks(std::string_view session_id,
                                                      NodeKind kind);
  bool Delete(std::string_view session_id);

  // JSON holding spec, data, configs and cursor; Restore() rebuilds from it
  // under a new id.
  std::optional<std::string> Dump(std::string_view session_id);
  CreateSessionResponse Restore(std::string_view dump_json);

  std::shared_ptr<const AccessStructure> Structure(std::string_view session_id);

  // Cursor id path (root to cursor) of a live session.
  std::optional<std::vector<std::string>> CursorPath(std::string_view session_id);

  std::size_t EvictIdle();
  std::size_t size() const;

 private:
  std::shared_ptr<SessionRecord> Lookup(std::string_view session_id);
  std::string NewSessionId();

  std::chrono::steady_clock::duration idle_timeout_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<SessionRecord>, std::less<>> sessions_;
  std::uint64_t id_state_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-independent implementation of the HTTP protocol:
//   POST   /sessions
//   POST   /sessions/{id}/commands
//   GET    /sessions/{id}/landmarks?kind=...
//   GET    /sessions/{id}/dump
//   POST   /sessions/restore
//   DELETE /sessions/{id}
class ServiceHandler {
 public:
  explicit ServiceHandler(SessionManager& sessions) : sessions_(sessions) {}

  HttpResponse Handle(std::string_view method, std::string_view path,
                      const std::map<std::string, std::string>& query,
                      std::string_view body);

 private:
  SessionManager& sessions_;
};

// JSON for a command response, shared by the service and its tests' expected
// values: status, cursorId, cursorPath, utterance, highlightRowIds,
// levelChanged, clamped and (for invalid results) code.
std::string NavResultJson(const AccessStructure& structure, const NavResult& result);

std::string ServiceErrorJson(const ServiceError& error);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string corpus_dir;  // served under /corpus/ when set
  std::string static_dir;  // frontend bundle served under / when set
};

// Blocking HTTP server over ServiceHandler.
class HttpServer {
 public:
  HttpServer(SessionManager& sessions, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or -1.
  int Bind();
  // Serves until Stop(). Call after Bind().
  bool Run();
  void Stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ServerOptions options_;
  int port_ = -1;
};

}  // namespace chartnav

#endif  // CHARTNAV_SESSION_SERVICE_H_
