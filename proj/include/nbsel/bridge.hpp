#pragma once

#include <chrono>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "nbsel/defaults.hpp"
#include "nbsel/selectors.hpp"
#include "nbsel/transport.hpp"

namespace nbsel::bridge {

struct Timeouts {
  std::chrono::milliseconds handshake{30000};
  std::chrono::milliseconds reply{60000};
};

/// Engine side of one agent connection: strict request/response, one
/// message in flight at a time.
class Session {
 public:
  /// Sends `hello` and waits for the agent's acknowledgement.
  static Session open(wire::Connection connection, const wire::Hello& hello, Timeouts timeouts);

  /// Returns the agent's choice after checking it is in range and not tabu.
  OperatorId request_action(std::uint64_t step, const StateEncoding& state,
                            const std::vector<bool>& tabu);
  void send_learn(OperatorId action, double reward, const StateEncoding& state_after, bool done);
  void send_episode_end();
  /// Sends `bye` and returns the agent's tallies.
  wire::Summary close();
  /// Tells the agent the run is aborted; no reply expected.
  void abort(const std::string& reason);

  [[nodiscard]] bool is_open() const { return conn_.is_open(); }
  [[nodiscard]] const std::string& agent_version() const { return agent_version_; }

 private:
  Session(wire::Connection c, std::size_t actions, Timeouts t)
      : conn_(std::move(c)), action_count_(actions), timeouts_(t) {}
  wire::Message await(std::string_view expected);

  wire::Connection conn_;
  std::size_t action_count_;
  Timeouts timeouts_;
  std::string agent_version_;
};

struct BridgeConfig {
  std::string address;
  std::string agent = "mock";  // ddqn | ppo | mock
  std::string reward = "r1";
  Hyperparameters hyperparameters;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  Timeouts timeouts;
};

/// Selector that forwards every decision and transition to an external agent.
/// Connects on the first decision, when the problem schema is known.
class BridgeSelector final : public Selector {
 public:
  explicit BridgeSelector(BridgeConfig config) : config_(std::move(config)) {}
  ~BridgeSelector() override;

  [[nodiscard]] std::string name() const override { return config_.agent; }
  OperatorId get_move(const SearchModel& model, const std::vector<bool>& tabu,
                      std::uint64_t step) override;
  void learn(const Transition& transition) override;
  void terminate_episode() override;
  void finish() override;

  /// Agent tallies from the closing handshake, once finish() has run.
  [[nodiscard]] const std::optional<wire::Summary>& summary() const { return summary_; }
  [[nodiscard]] std::uint64_t episode_ends_sent() const { return episode_ends_; }

 private:
  BridgeConfig config_;
  std::optional<Session> session_;
  std::optional<wire::Summary> summary_;
  std::uint64_t episode_ends_ = 0;
};

struct MockAgentOptions {
  ScriptedPolicy policy = ScriptedPolicy::parse("round-robin");
  std::string version{wire::kProtocolVersion};
  std::chrono::milliseconds idle_timeout{60000};
};

/// Serves one session with a scripted policy until `bye`; returns its tallies.
wire::Summary serve_mock_agent(wire::Connection& connection, MockAgentOptions options);

/// Mock agent on a background thread, accepting a single connection.
class MockAgentServer {
 public:
  MockAgentServer(const wire::Address& listen_on, MockAgentOptions options);
  ~MockAgentServer();
  MockAgentServer(const MockAgentServer&) = delete;
  MockAgentServer& operator=(const MockAgentServer&) = delete;

  [[nodiscard]] std::string address() const { return listener_.address().to_string(); }
  /// Joins the thread; rethrows anything the agent failed with.
  wire::Summary wait();

 private:
  wire::Listener listener_;
  MockAgentOptions options_;
  wire::Summary summary_;
  std::exception_ptr error_;
  std::thread thread_;
};

}  // namespace nbsel::bridge
