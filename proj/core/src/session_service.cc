#include "chartnav/session_service.h"

#include <random>

#include "chartnav/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace chartnav {

namespace {

// Ordered so that records data keeps its field order through the service.
using json = nlohmann::ordered_json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kSessionsPrefix = "/sessions";

// Splits "/a/b/c" into {"a", "b", "c"}.
std::vector<std::string> PathSegments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

HttpResponse ErrorResponse(int status, std::string code, std::string message) {
  ServiceError error{status, std::move(code), std::move(message)};
  return {status, ServiceErrorJson(error)};
}

HttpResponse SessionGone(std::string_view id) {
  return ErrorResponse(404, "SESSION_GONE", "no live session \"" + std::string(id) + "\"");
}

// Translates library exceptions into protocol errors.
HttpResponse FromException(const std::exception& e) {
  if (dynamic_cast<const SyntaxError*>(&e) || dynamic_cast<const ParseError*>(&e)) {
    return ErrorResponse(400, "SYNTAX_ERROR", e.what());
  }
  if (dynamic_cast<const SchemaError*>(&e)) return ErrorResponse(400, "SCHEMA_ERROR", e.what());
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const EmptyDataError*>(&e)) {
    return ErrorResponse(422, "VALIDATION_ERROR", e.what());
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const TypeMismatchError*>(&e)) {
    return ErrorResponse(422, "CONFIG_ERROR", e.what());
  }
  return ErrorResponse(500, "INTERNAL_ERROR", e.what());
}

json ParseBody(std::string_view body) {
  try {
    return json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError("request body is not valid JSON", 1, e.byte);
  }
}

std::vector<std::string> StringList(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError("expected a list of strings", path);
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) throw SchemaError("expected a list of strings", path);
    out.push_back(item.get<std::string>());
  }
  return out;
}

void RejectUnknown(const json& object, std::initializer_list<std::string_view> allowed,
                   const std::string& path) {
  if (!object.is_object()) throw SchemaError("expected an object", path);
  for (const auto& item : object.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == item.key();
    if (!known) throw SchemaError("unknown key", path.empty() ? item.key() : path + "." + item.key());
  }
}

// The JSON request shape shared by POST /sessions and dumps.
CreateSessionRequest RequestFromJson(const json& body) {
  RejectUnknown(body,
                {"spec", "data", "dataFormat", "variant", "structureConfig", "descriptionConfig",
                 "cursorPath"},
                "");
  CreateSessionRequest request;
  if (!body.contains("spec")) throw SchemaError("missing spec", "spec");
  const json& spec = body["spec"];
  if (spec.is_string()) request.spec_text = spec.get<std::string>();
  else if (spec.is_object()) request.spec_text = spec.dump();
  else throw SchemaError("spec must be an object or a string", "spec");

  if (!body.contains("data")) throw SchemaError("missing data", "data");
  const json& data = body["data"];
  if (data.is_string()) {
    request.data_text = data.get<std::string>();
    request.data_format = DataFormat::kDelimited;
  } else if (data.is_array()) {
    request.data_text = data.dump();
    request.data_format = DataFormat::kStructured;
  } else {
    throw SchemaError("data must be delimited text or an array of records", "data");
  }
  if (body.contains("dataFormat")) {
    std::string format = body["dataFormat"].is_string() ? body["dataFormat"].get<std::string>() : "";
    if (format == "delimited") request.data_format = DataFormat::kDelimited;
    else if (format == "structured") request.data_format = DataFormat::kStructured;
    else throw SchemaError("dataFormat must be delimited or structured", "dataFormat");
  }

  StructureConfig& sc = request.structure_config;
  if (body.contains("variant")) {
    auto variant = body["variant"].is_string() ? VariantFromString(body["variant"].get<std::string>())
                                               : std::nullopt;
    if (!variant) throw SchemaError("unknown variant", "variant");
    sc.variant = *variant;
  }
  if (body.contains("structureConfig")) {
    const json& c = body["structureConfig"];
    RejectUnknown(c, {"branchOrder", "binaryLeafSize", "drillOrders"}, "structureConfig");
    if (c.contains("branchOrder")) {
      sc.branch_order = StringList(c["branchOrder"], "structureConfig.branchOrder");
    }
    if (c.contains("binaryLeafSize")) {
      if (!c["binaryLeafSize"].is_number_integer()) {
        throw SchemaError("expected an integer", "structureConfig.binaryLeafSize");
      }
      sc.binary_leaf_size = c["binaryLeafSize"].get<int>();
    }
    if (c.contains("drillOrders")) {
      if (!c["drillOrders"].is_array()) {
        throw SchemaError("expected a list of field lists", "structureConfig.drillOrders");
      }
      for (const auto& order : c["drillOrders"]) {
        sc.drill_orders.push_back(StringList(order, "structureConfig.drillOrders"));
      }
    }
  }

  DescriptionConfig& dc = request.description_config;
  if (body.contains("descriptionConfig")) {
    const json& c = body["descriptionConfig"];
    RejectUnknown(c, {"composition", "verbosity", "suppressRepeatedLevel", "numberFormat"},
                  "descriptionConfig");
    if (c.contains("composition")) {
      auto v = c["composition"].is_string() ? CompositionFromString(c["composition"].get<std::string>())
                                            : std::nullopt;
      if (!v) throw SchemaError("unknown composition", "descriptionConfig.composition");
      dc.composition = *v;
    }
    if (c.contains("verbosity")) {
      auto v = c["verbosity"].is_string() ? VerbosityFromString(c["verbosity"].get<std::string>())
                                          : std::nullopt;
      if (!v) throw SchemaError("unknown verbosity", "descriptionConfig.verbosity");
      dc.verbosity = *v;
    }
    if (c.contains("suppressRepeatedLevel")) {
      if (!c["suppressRepeatedLevel"].is_boolean()) {
        throw SchemaError("expected a boolean", "descriptionConfig.suppressRepeatedLevel");
      }
      dc.suppress_repeated_level = c["suppressRepeatedLevel"].get<bool>();
    }
    if (c.contains("numberFormat")) {
      if (!c["numberFormat"].is_number_integer() || c["numberFormat"].get<int>() < 1) {
        throw SchemaError("expected a positive integer", "descriptionConfig.numberFormat");
      }
      dc.significant_digits = c["numberFormat"].get<int>();
    }
  }
  return request;
}

ordered_json RequestToJson(const SessionRecord& record) {
  ordered_json j;
  j["spec"] = record.spec_text;
  j["data"] = record.data_text;
  j["dataFormat"] = record.data_format == DataFormat::kDelimited ? "delimited" : "structured";
  const StructureConfig& sc = record.structure->config();
  j["variant"] = ToString(sc.variant);
  j["structureConfig"] = {{"branchOrder", sc.branch_order},
                          {"binaryLeafSize", sc.binary_leaf_size},
                          {"drillOrders", sc.drill_orders}};
  j["descriptionConfig"] = {{"composition", ToString(record.config.composition)},
                            {"verbosity", ToString(record.config.verbosity)},
                            {"suppressRepeatedLevel", record.config.suppress_repeated_level},
                            {"numberFormat", record.config.significant_digits}};
  return j;
}

std::vector<std::string> IdPath(const AccessStructure& structure, NodeIndex index) {
  std::vector<std::string> out;
  for (NodeIndex i : structure.PathFromRoot(index)) out.push_back(structure.node(i).id);
  return out;
}

HttpResponse CreatedResponse(const CreateSessionResponse& created) {
  ordered_json j;
  j["sessionId"] = created.session_id;
  j["summaryUtterance"] = created.summary.text;
  j["structureDump"] = ordered_json::parse(created.structure_dump);
  return {201, j.dump()};
}

}  // namespace

SessionManager::SessionManager(std::chrono::steady_clock::duration idle_timeout, Clock clock)
    : idle_timeout_(idle_timeout),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::steady_clock::now(); })),
      id_state_(std::random_device{}()) {
  id_state_ = (id_state_ << 32) ^ std::random_device{}();
}

std::string SessionManager::NewSessionId() {
  // splitmix64 over a random seed; ids only need to be unique and opaque.
  std::uint64_t z = (id_state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id(16, '0');
  for (int i = 15; i >= 0; --i, z >>= 4) id[static_cast<std::size_t>(i)] = kHex[z & 0xF];
  return id;
}

CreateSessionResponse SessionManager::Create(const CreateSessionRequest& request) {
  auto spec = std::make_shared<const ChartSpec>(ParseChartSpec(request.spec_text));
  LoadOptions options;
  options.allow_empty = true;
  auto data = std::make_shared<const DataTable>(LoadData(request.data_text, request.data_format, options));
  const auto issues = ValidateSpec(*spec, *data);
  if (const auto* issue = FirstError(issues)) throw ValidationError(issue->path, issue->message);
  auto structure = BuildStructure(spec, data, request.structure_config);

  auto record = std::make_shared<SessionRecord>();
  record->spec = spec;
  record->structure = structure;
  record->state = CreateSession(structure);
  record->config = request.description_config;
  record->created_at = std::chrono::system_clock::now();
  record->last_used = clock_();
  record->spec_text = request.spec_text;
  record->data_text = request.data_text;
  record->data_format = request.data_format;

  CreateSessionResponse response;
  response.summary = DescribeStructureSummary(*structure, record->config);
  response.structure_dump = DumpStructure(*structure, DumpFormat::kJson);
  {
    std::lock_guard lock(mutex_);
    do {
      record->session_id = NewSessionId();
    } while (sessions_.contains(record->session_id));
    sessions_.emplace(record->session_id, record);
  }
  response.session_id = record->session_id;
  return response;
}

std::shared_ptr<SessionRecord> SessionManager::Lookup(std::string_view session_id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return nullptr;
  auto now = clock_();
  std::shared_ptr<SessionRecord> record = it->second;
  {
    std::lock_guard record_lock(record->mutex);
    if (now - record->last_used > idle_timeout_) {
      sessions_.erase(it);
      return nullptr;
    }
    record->last_used = now;
  }
  return record;
}

std::optional<NavResult> SessionManager::Apply(std::string_view session_id, const NavCommand& command) {
  auto record = Lookup(session_id);
  if (!record) return std::nullopt;
  std::lock_guard lock(record->mutex);
  return ApplyCommand(record->state, command, record->config);
}

std::optional<std::vector<LandmarkEntry>> SessionManager::Landmarks(std::string_view session_id,
                                                                    NodeKind kind) {
  auto record = Lookup(session_id);
  if (!record) return std::nullopt;
  std::vector<LandmarkEntry> out;
  const auto& index = record->structure->landmark_index();
  if (auto it = index.find(kind); it != index.end()) {
    for (NodeIndex i : it->second) {
      const AccessNode& node = record->structure->node(i);
      out.push_back({node.id, node.label});
    }
  }
  return out;
}

bool SessionManager::Delete(std::string_view session_id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return false;
  sessions_.erase(it);
  return true;
}

std::optional<std::string> SessionManager::Dump(std::string_view session_id) {
  auto record = Lookup(session_id);
  if (!record) return std::nullopt;
  std::lock_guard lock(record->mutex);
  ordered_json j = RequestToJson(*record);
  j["cursorPath"] = IdPath(*record->structure, record->state.cursor);
  return j.dump(2) + "\n";
}

CreateSessionResponse SessionManager::Restore(std::string_view dump_json) {
  json doc = ParseBody(dump_json);
  CreateSessionRequest request = RequestFromJson(doc);
  CreateSessionResponse response = Create(request);
  if (doc.contains("cursorPath")) {
    auto path = StringList(doc["cursorPath"], "cursorPath");
    auto record = Lookup(response.session_id);
    std::lock_guard lock(record->mutex);
    const AccessStructure& s = *record->structure;
    std::optional<NodeIndex> cursor;
    for (const auto& id : path) {
      auto index = s.Find(id);
      if (!index) throw SchemaError("cursor path names unknown node \"" + id + "\"", "cursorPath");
      cursor = index;
    }
    if (cursor) {
      record->state.cursor = *cursor;
      record->state.last_announced_level = s.node(*cursor).kind;
      std::vector<NodeIndex> chain = s.PathFromRoot(*cursor);
      for (std::size_t i = 1; i < chain.size(); ++i) {
        record->state.last_visited_child[chain[i - 1]] = chain[i];
      }
    }
  }
  return response;
}

std::shared_ptr<const AccessStructure> SessionManager::Structure(std::string_view session_id) {
  auto record = Lookup(session_id);
  return record ? record->structure : nullptr;
}

std::optional<std::vector<std::string>> SessionManager::CursorPath(std::string_view session_id) {
  auto record = Lookup(session_id);
  if (!record) return std::nullopt;
  std::lock_guard lock(record->mutex);
  return IdPath(*record->structure, record->state.cursor);
}

std::size_t SessionManager::EvictIdle() {
  std::lock_guard lock(mutex_);
  auto now = clock_();
  std::size_t evicted = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::lock_guard record_lock(it->second->mutex);
    if (now - it->second->last_used > idle_timeout_) {
      it = sessions_.erase(it);
      ++evicted;
    } else {
      ++it;
    }
  }
  return evicted;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::string NavResultJson(const AccessStructure& structure, const NavResult& result) {
  ordered_json j;
  j["status"] = ToString(result.status);
  j["cursorId"] = result.new_cursor;
  j["cursorPath"] = IdPath(structure, result.cursor_index);
  j["utterance"] = result.utterance.text;
  auto tokens = ordered_json::array();
  for (const auto& token : result.utterance.tokens) {
    tokens.push_back({{"kind", ToString(token.kind)}, {"text", token.text}});
  }
  j["tokens"] = std::move(tokens);
  j["highlightRowIds"] = result.highlight_row_ids;
  j["levelChanged"] = result.level_changed;
  j["clamped"] = result.clamped;
  if (result.error != NavError::kNone) j["code"] = ToString(result.error);
  return j.dump();
}

std::string ServiceErrorJson(const ServiceError& error) {
  ordered_json j;
  j["error"] = {{"code", error.code}, {"message", error.message}};
  return j.dump();
}

HttpResponse ServiceHandler::Handle(std::string_view method, std::string_view path,
                                    const std::map<std::string, std::string>& query,
                                    std::string_view body) {
  std::vector<std::string> parts = PathSegments(path);
  if (parts.empty() || "/" + parts[0] != kSessionsPrefix) {
    return ErrorResponse(404, "NOT_FOUND", "no route for " + std::string(path));
  }
  try {
    if (parts.size() == 1) {
      if (method != "POST") return ErrorResponse(405, "METHOD_NOT_ALLOWED", "use POST /sessions");
      return CreatedResponse(sessions_.Create(RequestFromJson(ParseBody(body))));
    }
    if (parts.size() == 2 && parts[1] == "restore") {
      if (method != "POST") return ErrorResponse(405, "METHOD_NOT_ALLOWED", "use POST /sessions/restore");
      return CreatedResponse(sessions_.Restore(body));
    }
    const std::string& id = parts[1];
    if (parts.size() == 2) {
      if (method != "DELETE") return ErrorResponse(405, "METHOD_NOT_ALLOWED", "use DELETE");
      if (!sessions_.Delete(id)) return SessionGone(id);
      return {200, ordered_json{{"deleted", id}}.dump()};
    }
    if (parts.size() == 3 && parts[2] == "commands") {
      if (method != "POST") return ErrorResponse(405, "METHOD_NOT_ALLOWED", "use POST");
      json command = ParseBody(body);
      RejectUnknown(command, {"verb", "target"}, "");
      if (!command.contains("verb") || !command["verb"].is_string()) {
        throw SchemaError("missing verb", "verb");
      }
      auto verb = VerbFromString(command["verb"].get<std::string>());
      if (!verb) throw SchemaError("unknown verb \"" + command["verb"].get<std::string>() + "\"", "verb");
      NavCommand cmd{*verb, std::nullopt};
      if (command.contains("target")) {
        if (!command["target"].is_string()) throw SchemaError("target must be a node id", "target");
        cmd.target = command["target"].get<std::string>();
      }
      auto structure = sessions_.Structure(id);
      if (!structure) return SessionGone(id);
      auto result = sessions_.Apply(id, cmd);
      if (!result) return SessionGone(id);
      return {200, NavResultJson(*structure, *result)};
    }
    if (parts.size() == 3 && parts[2] == "landmarks") {
      if (method != "GET") return ErrorResponse(405, "METHOD_NOT_ALLOWED", "use GET");
      auto kind_it = query.find("kind");
      if (kind_it == query.end()) throw SchemaError("missing kind", "kind");
      auto kind = NodeKindFromString(kind_it->second);
      if (!kind) throw SchemaError("unknown node kind \"" + kind_it->second + "\"", "kind");
      auto landmarks = sessions_.Landmarks(id, *kind);
      if (!landmarks) return SessionGone(id);
      ordered_json list = ordered_json::array();
      for (const auto& entry : *landmarks) list.push_back({{"id", entry.id}, {"label", entry.label}});
      return {200, list.dump()};
    }
    if (parts.size() == 3 && parts[2] == "dump") {
      if (method != "GET") return ErrorResponse(405, "METHOD_NOT_ALLOWED", "use GET");
      auto dump = sessions_.Dump(id);
      if (!dump) return SessionGone(id);
      return {200, *dump};
    }
  } catch (const std::exception& e) {
    return FromException(e);
  }
  return ErrorResponse(404, "NOT_FOUND", "no route for " + std::string(path));
}

struct HttpServer::Impl {
  httplib::Server server;
  ServiceHandler handler;

  explicit Impl(SessionManager& sessions) : handler(sessions) {}
};

HttpServer::HttpServer(SessionManager& sessions, ServerOptions options)
    : impl_(std::make_unique<Impl>(sessions)), options_(std::move(options)) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [key, value] : req.params) query.emplace(key, value);
    HttpResponse out = impl_->handler.Handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  httplib::Server& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Post(R"(/sessions(/.*)?)", route);
  server.Get(R"(/sessions/.*)", route);
  server.Delete(R"(/sessions/.*)", route);
  server.Options(R"(/sessions(/.*)?)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  if (!options_.corpus_dir.empty()) server.set_mount_point("/corpus", options_.corpus_dir);
  if (!options_.static_dir.empty()) server.set_mount_point("/", options_.static_dir);
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind() {
  if (options_.port == 0) {
    port_ = impl_->server.bind_to_any_port(options_.host);
  } else {
    port_ = impl_->server.bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  return port_;
}

bool HttpServer::Run() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace chartnav
