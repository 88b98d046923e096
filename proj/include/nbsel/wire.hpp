#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nbsel/state_encoding.hpp"

namespace nbsel::wire {

inline constexpr std::string_view kProtocolVersion = "nbsel-wire/1";
inline constexpr std::uint32_t kMaxFrameBytes = 1U << 30;

/// Malformed frame or payload, or a reply that breaks request/response order.
class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Hello {
  std::string version{kProtocolVersion};
  std::string problem;     // tsp | pdptw | csp
  std::uint64_t action_count = 0;
  EncodingSchema schema;   // schema.is_graph selects "graph" or "matrix"
  std::string agent;       // ddqn | ppo | mock
  std::string reward;      // r1 | r2 | r3
  std::map<std::string, double> hyperparameters;
  double gamma = 1.0;
  std::uint64_t seed = 0;

  friend bool operator==(const Hello&, const Hello&) = default;
};

struct Act {
  std::uint64_t step = 0;
  std::vector<std::uint8_t> tabu_mask;  // 1 = tabu
  StateEncoding state;

  friend bool operator==(const Act&, const Act&) = default;
};

struct Action {
  std::int64_t id = 0;
  friend bool operator==(const Action&, const Action&) = default;
};

/// Sent by the engine after every iteration; echoed (empty) as acknowledgement.
struct Learn {
  std::int64_t action = 0;
  double reward = 0.0;
  std::optional<StateEncoding> state;  // absent in the acknowledgement
  bool done = false;

  friend bool operator==(const Learn&, const Learn&) = default;
};

struct EpisodeEnd {
  friend bool operator==(const EpisodeEnd&, const EpisodeEnd&) = default;
};

/// Agent-side tallies reported in the reply to `bye`.
struct Summary {
  std::uint64_t episodes = 0;    // episode_end messages received
  std::uint64_t done_count = 0;  // learn messages with done = 1
  std::uint64_t acts = 0;
  std::uint64_t learns = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct Bye {
  std::string text;
  std::optional<Summary> summary;
  friend bool operator==(const Bye&, const Bye&) = default;
};

struct Error {
  std::string text;
  friend bool operator==(const Error&, const Error&) = default;
};

using Message = std::variant<Hello, Act, Action, Learn, EpisodeEnd, Bye, Error>;

std::string_view type_name(const Message& m);

/// JSON object text; reals carry 17 significant digits. Non-finite reals throw.
std::string encode(const Message& m);
Message decode(std::string_view payload);

/// 4-byte big-endian length followed by the payload.
std::string frame(std::string_view payload);
std::uint32_t read_length_prefix(const unsigned char* header);

}  // namespace nbsel::wire
