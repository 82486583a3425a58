#include "puzzlelab/service.hpp"

#include <algorithm>
#include <charconv>
#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "puzzlelab/combinatorics.hpp"
#include "puzzlelab/error.hpp"
#include "puzzlelab/presets.hpp"
#include "puzzlelab/rng.hpp"
#include "puzzlelab/wire.hpp"

namespace puzzlelab::service {

namespace {

Response error_response(int status, std::string_view code, const std::string& detail) {
  return {status, json{{"error", code}, {"detail", detail}}};
}

Response not_found(const std::string& what) { return error_response(404, "NotFound", what); }

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapExceeded: return 422;
    case ErrorCode::IllegalCut:
    case ErrorCode::WrongModel: return 409;
    default: return 400;
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream in(path);
  std::string part;
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<int> int_param(const Request& r, const std::string& name) {
  auto it = r.query.find(name);
  if (it == r.query.end()) return std::nullopt;
  auto value = parse_number<int>(it->second);
  if (!value) throw Error(ErrorCode::InvalidArgument, name + " must be an integer");
  return value;
}

int required_int(const Request& r, const std::string& name) {
  auto value = int_param(r, name);
  if (!value) throw Error(ErrorCode::InvalidArgument, "missing query parameter " + name);
  return *value;
}

json parse_body(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("request body is not JSON: ") + e.what());
  }
}

poly::Polyomino shape_from_body(const json& body) {
  if (body.contains("preset")) {
    if (!body["preset"].is_string()) throw Error(ErrorCode::ParseError, "preset must be a string");
    const std::string name = body["preset"].get<std::string>();
    auto shape = presets::find(name);
    if (!shape) throw Error(ErrorCode::InvalidArgument, "unknown preset '" + name + "'");
    return *shape;
  }
  if (body.contains("cells")) return poly::parse_json(json{{"cells", body["cells"]}}.dump());
  if (body.contains("ascii")) {
    if (!body["ascii"].is_string()) throw Error(ErrorCode::ParseError, "ascii must be a string");
    return poly::parse_ascii(body["ascii"].get<std::string>());
  }
  throw Error(ErrorCode::ParseError, "expected one of preset, cells or ascii");
}

std::string phase_name(MontyPhase phase) { return std::string(to_string(phase)); }

MontyPhase parse_phase(const std::string& text) {
  for (MontyPhase p : {MontyPhase::AwaitPick, MontyPhase::AwaitDecision, MontyPhase::Resolved}) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::ParseError, "unknown monty phase '" + text + "'");
}

std::string strategy_name(prob::Strategy s) { return s == prob::Strategy::Switch ? "SWITCH" : "STAY"; }

}  // namespace

std::string_view to_string(MontyPhase phase) {
  switch (phase) {
    case MontyPhase::AwaitPick: return "AWAIT_PICK";
    case MontyPhase::AwaitDecision: return "AWAIT_DECISION";
    case MontyPhase::Resolved: return "RESOLVED";
  }
  return "UNKNOWN";
}

void apply_environment(ServiceConfig& config, int& port) {
  if (const char* v = std::getenv("PORT")) {
    if (auto p = parse_number<int>(v)) port = *p;
  }
  if (const char* v = std::getenv("SNAPSHOT_PATH"); v != nullptr && *v != '\0') config.snapshot_path = v;
  if (const char* v = std::getenv("SEED")) {
    if (auto s = parse_number<std::uint64_t>(v)) config.seed = *s;
  }
  if (const char* v = std::getenv("CAP_N")) {
    if (auto c = parse_number<int>(v)) config.caps.per_piece_cap = *c;
  }
}

int monty_car_door(std::uint64_t seed) {
  Xoshiro256 rng(seed);
  return static_cast<int>(rng.uniform(3)) + 1;
}

int monty_reveal(std::uint64_t seed, int picked) {
  Xoshiro256 rng(seed);
  const int car = static_cast<int>(rng.uniform(3)) + 1;
  return prob::host_reveal(picked, car, rng);
}

Service::Service(ServiceConfig config) : config_(std::move(config)), solver_(config_.caps) {}

Service::~Service() { stop_autosave(); }

// ---- Routing ---------------------------------------------------------------

Response Service::handle(const Request& request) {
  if (request.method != "POST" || !request.idempotency_key) return route(request);

  const std::string fingerprint = request.method + " " + request.path + "\n" + request.body;
  std::shared_ptr<IdempotencyEntry> entry;
  {
    std::lock_guard lock(idempotency_mutex_);
    auto& slot = idempotency_[*request.idempotency_key];
    if (!slot) {
      slot = std::make_shared<IdempotencyEntry>();
      slot->fingerprint = fingerprint;
    }
    entry = slot;
  }
  if (entry->fingerprint != fingerprint) {
    return error_response(422, "IdempotencyKeyReused",
                          "Idempotency-Key was already used with a different request");
  }
  std::lock_guard lock(entry->mutex);
  if (!entry->response) entry->response = route(request);
  return *entry->response;
}

Response Service::route(const Request& request) {
  try {
    const auto parts = split_path(request.path);
    if (parts.size() < 2 || parts[0] != "api") return not_found("no route " + request.path);
    const bool get = request.method == "GET";
    const bool post = request.method == "POST";
    const std::string& area = parts[1];

    if (area == "dissection") {
      if (parts.size() == 2 && post) return create_dissection(parse_body(request.body));
      if (parts.size() == 3 && get) return get_dissection(parts[2]);
      if (parts.size() == 4 && parts[3] == "cut" && post) return post_cut(parts[2], parse_body(request.body));
      if (parts.size() == 4 && parts[3] == "hint" && get) return get_hint(parts[2]);
    } else if (area == "monty") {
      if (parts.size() == 2 && post) return create_monty(parse_body(request.body));
      if (parts.size() == 3 && parts[2] == "stats" && get) return monty_stats();
      if (parts.size() == 3 && get) return get_monty(parts[2]);
      if (parts.size() == 4 && parts[3] == "pick" && post) return monty_pick(parts[2], parse_body(request.body));
      if (parts.size() == 4 && parts[3] == "decide" && post) return monty_decide(parts[2], parse_body(request.body));
    } else if (parts.size() == 2 && get) {
      if (area == "catalog") return catalog();
      if (area == "birthday") return birthday(request);
      if (area == "hanoi") return hanoi(request);
      if (area == "queens") return queens(request);
      if (area == "knight") return knight(request);
      if (area == "domination") return domination(request);
    }
    return not_found("no route " + request.method + " " + request.path);
  } catch (const Error& e) {
    return error_response(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_response(400, "ParseError", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

std::string Service::next_id(char prefix) {
  return std::string(1, prefix) + "-" + std::to_string(++id_counter_);
}

std::shared_ptr<Service::Slot<DissectionSession>> Service::find_dissection(const std::string& id) const {
  std::shared_lock lock(store_mutex_);
  auto it = dissections_.find(id);
  return it == dissections_.end() ? nullptr : it->second;
}

std::shared_ptr<Service::Slot<MontySession>> Service::find_monty(const std::string& id) const {
  std::shared_lock lock(store_mutex_);
  auto it = monty_.find(id);
  return it == monty_.end() ? nullptr : it->second;
}

// ---- Dissection sessions ---------------------------------------------------

json Service::dissection_view(const DissectionSession& s) const {
  const int remaining = solver_.hint(s.state);
  const int used = s.cut_count();
  const int projected = used + remaining;
  std::string note;
  if (s.finished()) {
    note = std::to_string(used) + " cuts (optimal " + std::to_string(s.optimal_total) + ")";
  } else if (projected == s.optimal_total) {
    note = "on an optimal path";
  } else {
    note = std::to_string(projected - s.optimal_total) + " above optimal";
  }
  return json{{"id", s.id},
              {"model", dissect::to_string(s.state.model())},
              {"shape", wire::polyomino_json(s.shape)},
              {"n", s.shape.size()},
              {"n_minus_1", static_cast<int>(s.shape.size()) - 1},
              {"pieces", wire::pieces_json(s.state)},
              {"piece_count", s.state.pieces().size()},
              {"cut_count", used},
              {"optimal_total", s.optimal_total},
              {"hint", remaining},
              {"finished", s.finished()},
              {"history", wire::cuts_json(s.state.history())},
              {"score",
               {{"cuts_used", used},
                {"remaining_optimal", remaining},
                {"projected_total", projected},
                {"optimal_total", s.optimal_total},
                {"excess", projected - s.optimal_total},
                {"note", note}}},
              {"created_at", s.created_at}};
}

Response Service::create_dissection(const json& body) {
  dissect::CutModel model = dissect::CutModel::SingleSplit;
  if (body.contains("model")) {
    if (!body["model"].is_string()) throw Error(ErrorCode::ParseError, "model must be a string");
    auto parsed = dissect::parse_cut_model(body["model"].get<std::string>());
    if (!parsed) throw Error(ErrorCode::InvalidArgument, "unknown model '" + body["model"].get<std::string>() + "'");
    model = *parsed;
  }
  poly::Polyomino shape = shape_from_body(body);
  const int optimal = solver_.min_cuts(shape, model).count;

  DissectionSession session{"", shape, dissect::DissectionState::start(shape, model), utc_now(), optimal};
  auto slot = std::make_shared<Slot<DissectionSession>>(std::move(session));
  {
    std::unique_lock lock(store_mutex_);
    slot->session.id = next_id('d');
    dissections_.emplace(slot->session.id, slot);
  }
  std::lock_guard lock(slot->mutex);
  return {201, dissection_view(slot->session)};
}

Response Service::get_dissection(const std::string& id) {
  auto slot = find_dissection(id);
  if (!slot) return not_found("no dissection session " + id);
  std::optional<DissectionSession> copy;
  {
    std::lock_guard lock(slot->mutex);
    copy = slot->session;
  }
  return {200, dissection_view(*copy)};
}

Response Service::post_cut(const std::string& id, const json& body) {
  auto slot = find_dissection(id);
  if (!slot) return not_found("no dissection session " + id);
  std::lock_guard lock(slot->mutex);
  DissectionSession& s = slot->session;
  if (s.finished()) return error_response(410, "Finished", "session " + id + " is already finished");

  const json& cut_body = body.contains("cut") ? body["cut"] : body;
  const dissect::CutSegment cut = wire::cut_from_json(cut_body);
  try {
    s.state = dissect::apply_cut(s.state, cut);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllegalCut && e.code() != ErrorCode::WrongModel) throw;
    Response r = error_response(409, to_string(e.code()), e.what());
    r.body["legal_cuts"] = wire::cuts_json(dissect::legal_cuts(s.state));
    return r;
  }
  json view = dissection_view(s);
  view["applied"] = wire::cut_json(s.state.history().back());
  return {200, std::move(view)};
}

Response Service::get_hint(const std::string& id) {
  auto slot = find_dissection(id);
  if (!slot) return not_found("no dissection session " + id);
  dissect::DissectionState state;
  {
    std::lock_guard lock(slot->mutex);
    state = slot->session.state;
  }
  return {200, json{{"id", id}, {"hint", solver_.hint(state)}, {"finished", state.finished()}}};
}

// ---- Monty Hall sessions ---------------------------------------------------

json Service::monty_view(const MontySession& s) {
  json view{{"id", s.id}, {"phase", phase_name(s.phase)}, {"doors", {1, 2, 3}}};
  if (s.picked) view["picked"] = *s.picked;
  if (s.revealed) {
    view["revealed"] = *s.revealed;
    view["offer"] = prob::other_closed_door(*s.picked, *s.revealed);
  }
  if (s.phase != MontyPhase::Resolved) return view;

  const int final_door = *s.strategy == prob::Strategy::Stay ? *s.picked
                                                              : prob::other_closed_door(*s.picked, *s.revealed);
  view["strategy"] = strategy_name(*s.strategy);
  view["final_door"] = final_door;
  view["car_door"] = s.car_door;
  view["won"] = *s.won;
  view["seed"] = s.seed;
  view["transcript"] = json::array({
      json{{"step", "hide"}, {"car_door", s.car_door}, {"seed", s.seed}},
      json{{"step", "pick"}, {"door", *s.picked}},
      json{{"step", "reveal"}, {"door", *s.revealed}},
      json{{"step", "decide"}, {"strategy", strategy_name(*s.strategy)}, {"final_door", final_door}},
      json{{"step", "result"}, {"won", *s.won}},
  });
  return view;
}

Response Service::create_monty(const json& body) {
  std::optional<std::uint64_t> seed;
  if (body.contains("seed")) {
    if (!body["seed"].is_number_unsigned()) throw Error(ErrorCode::InvalidArgument, "seed must be a non-negative integer");
    seed = body["seed"].get<std::uint64_t>();
  }
  std::shared_ptr<Slot<MontySession>> slot;
  {
    std::unique_lock lock(store_mutex_);
    MontySession s;
    s.id = next_id('m');
    s.seed = seed ? *seed : shard_seed(config_.seed, monty_counter_++);
    s.car_door = monty_car_door(s.seed);
    slot = std::make_shared<Slot<MontySession>>(std::move(s));
    monty_.emplace(slot->session.id, slot);
  }
  std::lock_guard lock(slot->mutex);
  return {201, monty_view(slot->session)};
}

Response Service::get_monty(const std::string& id) {
  auto slot = find_monty(id);
  if (!slot) return not_found("no monty session " + id);
  std::lock_guard lock(slot->mutex);
  return {200, monty_view(slot->session)};
}

Response Service::monty_pick(const std::string& id, const json& body) {
  auto slot = find_monty(id);
  if (!slot) return not_found("no monty session " + id);
  if (!body.contains("door") || !body["door"].is_number_integer()) {
    throw Error(ErrorCode::InvalidArgument, "door must be 1, 2 or 3");
  }
  const int door = body["door"].get<int>();
  if (door < 1 || door > 3) throw Error(ErrorCode::InvalidArgument, "door must be 1, 2 or 3");

  std::lock_guard lock(slot->mutex);
  MontySession& s = slot->session;
  if (s.phase != MontyPhase::AwaitPick) {
    return error_response(409, "OutOfPhase", "session " + id + " is in phase " + phase_name(s.phase));
  }
  s.picked = door;
  s.revealed = monty_reveal(s.seed, door);
  s.phase = MontyPhase::AwaitDecision;
  return {200, monty_view(s)};
}

Response Service::monty_decide(const std::string& id, const json& body) {
  auto slot = find_monty(id);
  if (!slot) return not_found("no monty session " + id);
  if (!body.contains("strategy") || !body["strategy"].is_string()) {
    throw Error(ErrorCode::InvalidArgument, "strategy must be SWITCH or STAY");
  }
  auto strategy = prob::parse_strategy(body["strategy"].get<std::string>());
  if (!strategy) throw Error(ErrorCode::InvalidArgument, "strategy must be SWITCH or STAY");

  std::lock_guard lock(slot->mutex);
  MontySession& s = slot->session;
  if (s.phase != MontyPhase::AwaitDecision) {
    return error_response(409, "OutOfPhase", "session " + id + " is in phase " + phase_name(s.phase));
  }
  const int final_door =
      *strategy == prob::Strategy::Stay ? *s.picked : prob::other_closed_door(*s.picked, *s.revealed);
  s.strategy = *strategy;
  s.won = final_door == s.car_door;
  s.phase = MontyPhase::Resolved;
  return {200, monty_view(s)};
}

Response Service::monty_stats() const {
  std::vector<std::shared_ptr<Slot<MontySession>>> slots;
  {
    std::shared_lock lock(store_mutex_);
    for (const auto& [id, slot] : monty_) slots.push_back(slot);
  }
  std::uint64_t games[2] = {0, 0};
  std::uint64_t wins[2] = {0, 0};
  for (const auto& slot : slots) {
    std::lock_guard lock(slot->mutex);
    const MontySession& s = slot->session;
    if (s.phase != MontyPhase::Resolved) continue;
    const int k = *s.strategy == prob::Strategy::Switch ? 0 : 1;
    ++games[k];
    if (*s.won) ++wins[k];
  }
  auto entry = [&](int k, prob::Strategy strategy) {
    const Rational exact = prob::monty_exact(strategy);
    return json{{"games", games[k]},
                {"wins", wins[k]},
                {"win_rate", games[k] == 0 ? json(nullptr) : json(static_cast<double>(wins[k]) / games[k])},
                {"exact", exact.to_string()},
                {"exact_value", exact.to_double()}};
  };
  return {200, json{{"switch", entry(0, prob::Strategy::Switch)}, {"stay", entry(1, prob::Strategy::Stay)}}};
}

// ---- Stateless computations -----------------------------------------------

Response Service::catalog() const {
  json presets = json::array();
  for (const presets::Preset& p : presets::catalog()) {
    presets.push_back(json{{"name", p.name},
                           {"description", p.description},
                           {"n", p.shape.size()},
                           {"cells", wire::cells_json(p.shape.cells())}});
  }
  json models = json::array();
  for (auto m : {dissect::CutModel::SingleSplit, dissect::CutModel::FullLine, dissect::CutModel::GlobalLine}) {
    models.push_back(dissect::to_string(m));
  }
  return {200, json{{"presets", presets}, {"models", models}}};
}

Response Service::birthday(const Request& request) const {
  if (auto it = request.query.find("threshold"); it != request.query.end()) {
    auto target = parse_number<double>(it->second);
    if (!target) throw Error(ErrorCode::InvalidArgument, "threshold must be a number");
    return {200, json{{"threshold", *target},
                      {"exact", prob::birthday_threshold(*target, prob::BirthdayFormula::Exact)},
                      {"approx", prob::birthday_threshold(*target, prob::BirthdayFormula::Approx)}}};
  }
  const auto from = int_param(request, "from");
  const auto to = int_param(request, "to");
  if (from || to) {
    if (!from || !to || *from < 1 || *to < *from) throw Error(ErrorCode::InvalidArgument, "need 1 <= from <= to");
    if (*to - *from > 1000) throw Error(ErrorCode::CapExceeded, "at most 1001 points per curve");
    json curve = json::array();
    for (int n = *from; n <= *to; ++n) {
      curve.push_back(json{{"n", n}, {"exact", prob::birthday_exact(n)}, {"approx", prob::birthday_approx(n)}});
    }
    return {200, json{{"curve", curve}}};
  }
  const int n = required_int(request, "n");
  if (auto it = request.query.find("formula"); it != request.query.end()) {
    auto formula = prob::parse_formula(it->second);
    if (!formula) throw Error(ErrorCode::InvalidArgument, "formula must be exact or approx");
    return {200, json{{"n", n},
                      {"formula", *formula == prob::BirthdayFormula::Exact ? "exact" : "approx"},
                      {"probability", prob::birthday(n, *formula)}}};
  }
  return {200, json{{"n", n}, {"exact", prob::birthday_exact(n)}, {"approx", prob::birthday_approx(n)}}};
}

Response Service::hanoi(const Request& request) const {
  const int n = required_int(request, "n");
  const comb::HanoiSolution s = comb::hanoi(n);
  return {200, json{{"n", n}, {"count", s.count}, {"moves", wire::hanoi_moves_json(s.moves)}}};
}

Response Service::queens(const Request& request) const {
  const int n = required_int(request, "n");
  const comb::QueensResult r = comb::queens(n);
  json view{{"n", n}, {"count", r.count}};
  view["first"] = r.solutions.empty() ? json(nullptr) : wire::squares_json(r.solutions.front().squares);
  return {200, std::move(view)};
}

Response Service::knight(const Request& request) const {
  const int rows = required_int(request, "rows");
  const int cols = required_int(request, "cols");
  comb::Square start{0, 0};
  if (auto it = request.query.find("start"); it != request.query.end()) {
    const std::string& text = it->second;
    const auto comma = text.find(',');
    auto r = comma == std::string::npos ? std::nullopt : parse_number<int>(std::string_view(text).substr(0, comma));
    auto c = comma == std::string::npos ? std::nullopt : parse_number<int>(std::string_view(text).substr(comma + 1));
    if (!r || !c) throw Error(ErrorCode::InvalidArgument, "start must be row,col");
    start = {*r, *c};
  }
  bool closed = false;
  if (auto it = request.query.find("closed"); it != request.query.end()) closed = it->second == "true" || it->second == "1";
  auto tour = comb::knight_tour(rows, cols, start, closed);
  json view{{"rows", rows}, {"cols", cols}, {"start", {start.row, start.col}}, {"closed", closed}};
  view["found"] = tour.has_value();
  view["path"] = tour ? wire::squares_json(tour->path) : json::array();
  return {200, std::move(view)};
}

Response Service::domination(const Request& request) const {
  const int n = required_int(request, "n");
  const comb::Domination d = comb::queens_domination(n);
  return {200, json{{"n", n}, {"k", d.k}, {"queens", wire::squares_json(d.placement.squares)}}};
}

// ---- Snapshots ---------------------------------------------------------------

json Service::snapshot() const {
  json dissections = json::array();
  json monty = json::array();
  json out{{"version", 1}};
  {
    std::shared_lock lock(store_mutex_);
    out["id_counter"] = id_counter_;
    out["monty_counter"] = monty_counter_;
    for (const auto& [id, slot] : dissections_) {
      std::lock_guard slot_lock(slot->mutex);
      const DissectionSession& s = slot->session;
      dissections.push_back(json{{"id", s.id},
                                 {"model", dissect::to_string(s.state.model())},
                                 {"cells", wire::cells_json(s.shape.cells())},
                                 {"created_at", s.created_at},
                                 {"optimal_total", s.optimal_total},
                                 {"history", wire::cuts_json(s.state.history())}});
    }
    for (const auto& [id, slot] : monty_) {
      std::lock_guard slot_lock(slot->mutex);
      const MontySession& s = slot->session;
      json m{{"id", s.id}, {"seed", s.seed}, {"phase", phase_name(s.phase)}, {"car_door", s.car_door}};
      if (s.picked) m["picked"] = *s.picked;
      if (s.revealed) m["revealed"] = *s.revealed;
      if (s.strategy) m["strategy"] = strategy_name(*s.strategy);
      if (s.won) m["won"] = *s.won;
      monty.push_back(std::move(m));
    }
  }
  json cache = json::array();
  {
    std::lock_guard lock(idempotency_mutex_);
    for (const auto& [key, entry] : idempotency_) {
      std::lock_guard entry_lock(entry->mutex);
      if (!entry->response) continue;
      cache.push_back(json{{"key", key},
                           {"fingerprint", entry->fingerprint},
                           {"status", entry->response->status},
                           {"body", entry->response->body}});
    }
  }
  auto by_id = [](const json& a, const json& b) { return a["id"].get<std::string>() < b["id"].get<std::string>(); };
  std::sort(dissections.begin(), dissections.end(), by_id);
  std::sort(monty.begin(), monty.end(), by_id);
  std::sort(cache.begin(), cache.end(), [](const json& a, const json& b) { return a["key"] < b["key"]; });
  out["dissections"] = std::move(dissections);
  out["monty"] = std::move(monty);
  out["idempotency"] = std::move(cache);
  return out;
}

void Service::restore(const json& snap) {
  std::unordered_map<std::string, std::shared_ptr<Slot<DissectionSession>>> dissections;
  std::unordered_map<std::string, std::shared_ptr<Slot<MontySession>>> monty;
  std::unordered_map<std::string, std::shared_ptr<IdempotencyEntry>> cache;

  for (const json& d : snap.at("dissections")) {
    auto model = dissect::parse_cut_model(d.at("model").get<std::string>());
    if (!model) throw Error(ErrorCode::ParseError, "snapshot has an unknown model");
    const poly::Polyomino shape = poly::parse_json(json{{"cells", d.at("cells")}}.dump());
    std::vector<dissect::CutSegment> cuts;
    for (const json& c : d.at("history")) cuts.push_back(wire::cut_from_json(c));
    DissectionSession s{d.at("id").get<std::string>(), shape, dissect::replay(shape, *model, cuts),
                        d.at("created_at").get<std::string>(), d.at("optimal_total").get<int>()};
    std::string id = s.id;
    dissections.emplace(std::move(id), std::make_shared<Slot<DissectionSession>>(std::move(s)));
  }
  for (const json& m : snap.at("monty")) {
    MontySession s;
    s.id = m.at("id").get<std::string>();
    s.seed = m.at("seed").get<std::uint64_t>();
    s.phase = parse_phase(m.at("phase").get<std::string>());
    s.car_door = m.at("car_door").get<int>();
    if (m.contains("picked")) s.picked = m["picked"].get<int>();
    if (m.contains("revealed")) s.revealed = m["revealed"].get<int>();
    if (m.contains("strategy")) s.strategy = prob::parse_strategy(m["strategy"].get<std::string>());
    if (m.contains("won")) s.won = m["won"].get<bool>();
    std::string id = s.id;
    monty.emplace(std::move(id), std::make_shared<Slot<MontySession>>(std::move(s)));
  }
  for (const json& e : snap.at("idempotency")) {
    auto entry = std::make_shared<IdempotencyEntry>();
    entry->fingerprint = e.at("fingerprint").get<std::string>();
    entry->response = Response{e.at("status").get<int>(), e.at("body")};
    cache.emplace(e.at("key").get<std::string>(), std::move(entry));
  }

  {
    std::unique_lock lock(store_mutex_);
    dissections_ = std::move(dissections);
    monty_ = std::move(monty);
    id_counter_ = snap.at("id_counter").get<std::uint64_t>();
    monty_counter_ = snap.at("monty_counter").get<std::uint64_t>();
  }
  std::lock_guard lock(idempotency_mutex_);
  idempotency_ = std::move(cache);
}

void Service::save_snapshot(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write snapshot " + tmp);
    out << snapshot().dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

void Service::load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read snapshot " + path);
  json snap;
  try {
    snap = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("snapshot is not JSON: ") + e.what());
  }
  restore(snap);
}

void Service::start_autosave(std::chrono::milliseconds interval) {
  stop_autosave();
  if (!config_.snapshot_path) return;
  autosave_ = std::jthread([this, interval, path = *config_.snapshot_path](std::stop_token stop) {
    std::mutex m;
    std::condition_variable_any cv;
    std::unique_lock lock(m);
    while (!stop.stop_requested()) {
      cv.wait_for(lock, stop, interval, [] { return false; });
      try {
        save_snapshot(path);
      } catch (const std::exception&) {
        // Keep serving; the next tick retries.
      }
    }
  });
}

void Service::stop_autosave() {
  if (autosave_.joinable()) {
    autosave_.request_stop();
    autosave_.join();
  }
}

}  // namespace puzzlelab::service
