#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "puzzlelab/dissection.hpp"
#include "puzzlelab/probability.hpp"

namespace puzzlelab::service {

using nlohmann::json;

struct ServiceConfig {
  std::uint64_t seed = 0;
  dissect::SearchConfig caps;
  std::optional<std::string> snapshot_path;
};

/// Reads PORT, SNAPSHOT_PATH, SEED and CAP_N into `config`/`port`; unset
/// variables leave the defaults. CAP_N sets the per-piece search cap.
void apply_environment(ServiceConfig& config, int& port);

struct Request {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::optional<std::string> idempotency_key;
};

struct Response {
  int status = 200;
  json body;
};

struct DissectionSession {
  std::string id;
  poly::Polyomino shape;
  dissect::DissectionState state;
  std::string created_at;
  int optimal_total = 0;

  int cut_count() const { return static_cast<int>(state.history().size()); }
  bool finished() const { return state.finished(); }
};

enum class MontyPhase { AwaitPick, AwaitDecision, Resolved };
std::string_view to_string(MontyPhase phase);

struct MontySession {
  std::string id;
  std::uint64_t seed = 0;
  MontyPhase phase = MontyPhase::AwaitPick;
  int car_door = 0;
  std::optional<int> picked;
  std::optional<int> revealed;
  std::optional<prob::Strategy> strategy;
  std::optional<bool> won;
};

/// The car door and, when the host has a choice, the opened door both come
/// from this seeded stream, so a resolved transcript can be re-derived.
int monty_car_door(std::uint64_t seed);
int monty_reveal(std::uint64_t seed, int picked);

/// Session store and request router. Every mutation of one session runs under
/// that session's lock; reads of different sessions proceed in parallel.
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const ServiceConfig& config() const noexcept { return config_; }

  /// Routes one request. Never throws; failures become error responses of the
  /// form {"error": code, "detail": text, "legal_cuts": [...]?}.
  Response handle(const Request& request);

  void save_snapshot(const std::string& path) const;
  void load_snapshot(const std::string& path);
  json snapshot() const;
  void restore(const json& snapshot);

  /// Writes the snapshot every `interval` until stop_autosave() or destruction.
  void start_autosave(std::chrono::milliseconds interval);
  void stop_autosave();

 private:
  template <typename T>
  struct Slot {
    explicit Slot(T s) : session(std::move(s)) {}
    std::mutex mutex;
    T session;
  };
  struct IdempotencyEntry {
    std::mutex mutex;
    std::string fingerprint;
    std::optional<Response> response;
  };

  Response route(const Request& request);

  Response create_dissection(const json& body);
  Response get_dissection(const std::string& id);
  Response post_cut(const std::string& id, const json& body);
  Response get_hint(const std::string& id);

  Response create_monty(const json& body);
  Response monty_pick(const std::string& id, const json& body);
  Response monty_decide(const std::string& id, const json& body);
  Response get_monty(const std::string& id);
  Response monty_stats() const;

  Response catalog() const;
  Response birthday(const Request& request) const;
  Response hanoi(const Request& request) const;
  Response queens(const Request& request) const;
  Response knight(const Request& request) const;
  Response domination(const Request& request) const;

  json dissection_view(const DissectionSession& s) const;
  static json monty_view(const MontySession& s);

  std::shared_ptr<Slot<DissectionSession>> find_dissection(const std::string& id) const;
  std::shared_ptr<Slot<MontySession>> find_monty(const std::string& id) const;
  std::string next_id(char prefix);

  ServiceConfig config_;
  dissect::MinCutSolver solver_;

  mutable std::shared_mutex store_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Slot<DissectionSession>>> dissections_;
  std::unordered_map<std::string, std::shared_ptr<Slot<MontySession>>> monty_;
  std::uint64_t id_counter_ = 0;
  std::uint64_t monty_counter_ = 0;

  mutable std::mutex idempotency_mutex_;
  std::unordered_map<std::string, std::shared_ptr<IdempotencyEntry>> idempotency_;

  std::jthread autosave_;
};

/// HTTP front end: routes /api/* to a Service and answers CORS preflights.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  /// Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace puzzlelab::service
