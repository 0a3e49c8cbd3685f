#pragma once

// JSON wire format shared by the websocket server, the recorder and the
// bots' script files. One JSON object per websocket text frame / log line.

#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "swarmgame/game.hpp"

namespace swarmgame {

using json = nlohmann::json;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Role : std::uint8_t { PlayerRed, PlayerBlue, Spectator };

std::string_view to_string(Role r);

struct JoinRequest {
  Role role = Role::Spectator;
};

using ClientMessage = std::variant<JoinRequest, Command>;

/// Parses one client frame. Throws ProtocolError with a short reason.
ClientMessage parse_client_message(std::string_view text);

/// Command body in the client schema ({"type":"command_strokes",...} etc).
/// Flock commands only carry attractors; radii and gains come from `defaults`.
Command command_from_json(const json& j, const FlockCommand& defaults = {});
json command_to_json(const Command& cmd);

json stroke_to_json(const Stroke& s);
Stroke stroke_from_json(const json& j);

json event_to_json(const GameEvent& e);
GameEvent event_from_json(const json& j);  // throws ProtocolError

/// Full state message. Capture layers are divided by their own max and sent
/// as zeros when the max does not exceed the activity floor.
json state_message(const GameState& state, const EngineConfig& cfg);

json joined_message(Role role, const GameConfig& cfg);
json rejected_message(std::string_view reason);
json error_message(std::string_view reason);

/// Every tunable, as written to recording headers and join acks.
json config_to_json(const GameConfig& cfg);
GameConfig config_from_json(const json& j);  // throws ProtocolError

}  // namespace swarmgame
