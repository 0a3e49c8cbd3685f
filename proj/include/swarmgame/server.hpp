#pragma once

// Websocket game server. One engine thread owns the Match and ticks at the
// engine rate; one I/O thread runs the websocket sessions. They share only
// the command mailbox (parsed commands in) and posted immutable snapshot
// strings (out). The engine never waits on a socket.

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmgame/bots.hpp"
#include "swarmgame/protocol.hpp"
#include "swarmgame/runner.hpp"

namespace swarmgame {

class ServerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SessionId = std::uint64_t;

/// What the I/O side should do after a client frame.
struct ServerAction {
  std::vector<std::string> replies;                  // frames back to the sender
  std::optional<std::pair<Team, Command>> command;  // for the engine
};

/// Session bookkeeping and message handling, free of any networking.
/// Not thread-safe; the I/O thread owns it.
class ServerCore {
 public:
  /// `bot_seats[i]` marks a team played by an in-process bot.
  ServerCore(GameConfig cfg, std::array<bool, 2> bot_seats = {false, false});

  ServerAction handle_message(SessionId id, std::string_view text);
  void disconnect(SessionId id);

  std::optional<Role> role(SessionId id) const;
  bool seat_taken(Team t) const { return seats_[index(t)].has_value() || bots_[index(t)]; }

 private:
  GameConfig cfg_;
  std::array<bool, 2> bots_;
  std::array<std::optional<SessionId>, 2> seats_;
  std::map<SessionId, Role> roles_;
};

/// Latest command per team, handed from the I/O thread to the engine.
class CommandMailbox {
 public:
  void post(Team t, Command c);
  std::array<std::optional<Command>, 2> take();

 private:
  std::mutex mu_;
  std::array<std::optional<Command>, 2> slots_;
};

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
  std::size_t client_queue = 64;
  long max_ticks = 0;  // 0 = until GameOver
  bool start_when_seated = true;  // hold tick 0 until both seats are filled
  std::chrono::milliseconds linger{500};  // keep serving after the game ends
};

struct TickStats {
  long ticks = 0;
  double max_step_ms = 0.0;  // engine work per tick
  double max_lateness_ms = 0.0;  // wake-up past the scheduled tick time
  std::uint64_t dropped_frames = 0;
};

class GameServer {
 public:
  /// Binds immediately; throws ServerError when the address is unusable.
  GameServer(const GameConfig& cfg, ServerOptions opt, MatchLogs logs, std::array<std::optional<BotPolicy>, 2> bots);
  ~GameServer();
  GameServer(const GameServer&) = delete;
  GameServer& operator=(const GameServer&) = delete;

  std::uint16_t port() const;

  /// Serves until the game ends (plus linger), max_ticks, or stop().
  RunSummary run();
  void stop();

  TickStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace swarmgame
