#include "nbsel/bridge.hpp"

#include <cmath>

#include <fmt/format.h>

namespace nbsel::bridge {

using wire::Message;

wire::Message Session::await(std::string_view expected) {
  Message reply = conn_.receive(timeouts_.reply);
  if (const auto* err = std::get_if<wire::Error>(&reply)) {
    conn_.close();
    throw wire::WireError("agent reported an error: " + err->text);
  }
  if (wire::type_name(reply) != expected) {
    const std::string got(wire::type_name(reply));
    conn_.close();
    throw wire::WireError(fmt::format("expected '{}' from agent, got '{}'", expected, got));
  }
  return reply;
}

Session Session::open(wire::Connection connection, const wire::Hello& hello, Timeouts timeouts) {
  Session s(std::move(connection), hello.action_count, timeouts);
  s.conn_.send(hello);
  Message reply = s.conn_.receive(timeouts.handshake);
  if (const auto* err = std::get_if<wire::Error>(&reply)) {
    throw wire::WireError("handshake rejected by agent: " + err->text);
  }
  const auto* ack = std::get_if<wire::Hello>(&reply);
  if (ack == nullptr) {
    throw wire::WireError(fmt::format("expected 'hello' acknowledgement, got '{}'",
                                      wire::type_name(reply)));
  }
  s.agent_version_ = ack->version;
  if (ack->version != hello.version) {
    throw wire::WireError(fmt::format("protocol version mismatch: engine speaks '{}', agent '{}'",
                                      hello.version, ack->version));
  }
  if (ack->action_count != hello.action_count) {
    throw wire::WireError(fmt::format("agent acknowledged {} actions, engine has {}",
                                      ack->action_count, hello.action_count));
  }
  return s;
}

OperatorId Session::request_action(std::uint64_t step, const StateEncoding& state,
                                   const std::vector<bool>& tabu) {
  wire::Act act;
  act.step = step;
  act.tabu_mask.reserve(tabu.size());
  for (bool b : tabu) act.tabu_mask.push_back(b ? 1 : 0);
  act.state = state;
  conn_.send(act);
  const auto reply = std::get<wire::Action>(await("action"));
  if (reply.id < 0 || static_cast<std::size_t>(reply.id) >= action_count_) {
    const std::string msg = fmt::format("agent chose operator {} outside [0, {})", reply.id,
                                        action_count_);
    abort(msg);
    throw ProtocolViolation(msg, reply.id);
  }
  if (tabu[static_cast<std::size_t>(reply.id)]) {
    const std::string msg = fmt::format("agent chose tabu operator {}", reply.id);
    abort(msg);
    throw ProtocolViolation(msg, reply.id);
  }
  return static_cast<OperatorId>(reply.id);
}

void Session::send_learn(OperatorId action, double reward, const StateEncoding& state_after,
                         bool done) {
  if (!std::isfinite(reward)) {
    throw wire::WireError(fmt::format("refusing to send non-finite reward {}", reward));
  }
  conn_.send(wire::Learn{static_cast<std::int64_t>(action), reward, state_after, done});
  await("learn");
}

void Session::send_episode_end() {
  conn_.send(wire::EpisodeEnd{});
  await("episode_end");
}

wire::Summary Session::close() {
  conn_.send(wire::Bye{});
  const auto reply = std::get<wire::Bye>(await("bye"));
  conn_.close();
  return reply.summary.value_or(wire::Summary{});
}

void Session::abort(const std::string& reason) {
  if (!conn_.is_open()) return;
  try {
    conn_.send(wire::Error{reason});
  } catch (const wire::WireError&) {
  }
  conn_.close();
}

BridgeSelector::~BridgeSelector() {
  if (session_ && session_->is_open()) session_->abort("engine shut down");
}

OperatorId BridgeSelector::get_move(const SearchModel& model, const std::vector<bool>& tabu,
                                    std::uint64_t step) {
  if (!session_) {
    wire::Hello hello;
    hello.problem = std::string(to_string(model.kind()));
    hello.action_count = model.operator_count();
    hello.schema = model.encoding_schema();
    hello.agent = config_.agent;
    hello.reward = config_.reward;
    hello.hyperparameters = config_.hyperparameters;
    hello.gamma = config_.gamma;
    hello.seed = config_.seed;
    auto conn = wire::Connection::connect(wire::Address::parse(config_.address),
                                          config_.timeouts.handshake);
    session_.emplace(Session::open(std::move(conn), hello, config_.timeouts));
  }
  return session_->request_action(step, model.encode_state(), tabu);
}

void BridgeSelector::learn(const Transition& t) {
  session_->send_learn(t.operator_id, t.reward, t.state_after->encode_state(), t.episode_done);
}

void BridgeSelector::terminate_episode() {
  session_->send_episode_end();
  ++episode_ends_;
}

void BridgeSelector::finish() {
  if (session_ && session_->is_open()) summary_ = session_->close();
}

wire::Summary serve_mock_agent(wire::Connection& conn, MockAgentOptions options) {
  wire::Summary tally;
  auto fail = [&](const std::string& text) {
    try {
      conn.send(wire::Error{text});
    } catch (const wire::WireError&) {
    }
    throw wire::WireError("mock agent: " + text);
  };

  Message first = conn.receive(options.idle_timeout);
  auto* hello = std::get_if<wire::Hello>(&first);
  if (hello == nullptr) fail(fmt::format("expected hello, got '{}'", wire::type_name(first)));
  if (hello->version != options.version) {
    fail(fmt::format("protocol version mismatch: agent speaks '{}', engine '{}'", options.version,
                     hello->version));
  }
  const std::size_t actions = hello->action_count;
  wire::Hello ack = *hello;
  ack.version = options.version;
  conn.send(ack);

  bool awaiting_learn = false;
  std::uint64_t last_step = 0;
  for (;;) {
    Message m = conn.receive(options.idle_timeout);
    if (auto* act = std::get_if<wire::Act>(&m)) {
      if (awaiting_learn) fail("act received before the previous learn");
      if (act->tabu_mask.size() != actions) fail("tabu mask length differs from action count");
      if (tally.acts > 0 && act->step <= last_step) fail("act steps are not increasing");
      last_step = act->step;
      std::vector<bool> tabu(act->tabu_mask.begin(), act->tabu_mask.end());
      ++tally.acts;
      awaiting_learn = true;
      conn.send(wire::Action{static_cast<std::int64_t>(options.policy.choose(tabu))});
    } else if (auto* learn = std::get_if<wire::Learn>(&m)) {
      if (!awaiting_learn) fail("learn received without a pending act");
      if (!std::isfinite(learn->reward)) fail("non-finite reward");
      awaiting_learn = false;
      ++tally.learns;
      if (learn->done) ++tally.done_count;
      conn.send(wire::Learn{});
    } else if (std::holds_alternative<wire::EpisodeEnd>(m)) {
      ++tally.episodes;
      conn.send(wire::EpisodeEnd{});
    } else if (std::holds_alternative<wire::Bye>(m)) {
      conn.send(wire::Bye{"", tally});
      conn.close();
      return tally;
    } else if (auto* err = std::get_if<wire::Error>(&m)) {
      conn.close();
      throw wire::WireError("engine aborted the session: " + err->text);
    } else {
      fail(fmt::format("unexpected '{}' message", wire::type_name(m)));
    }
  }
}

MockAgentServer::MockAgentServer(const wire::Address& listen_on, MockAgentOptions options)
    : listener_(listen_on), options_(std::move(options)) {
  thread_ = std::thread([this] {
    try {
      auto conn = listener_.accept(options_.idle_timeout);
      summary_ = serve_mock_agent(conn, options_);
    } catch (...) {
      error_ = std::current_exception();
    }
  });
}

MockAgentServer::~MockAgentServer() {
  if (thread_.joinable()) thread_.join();
}

wire::Summary MockAgentServer::wait() {
  if (thread_.joinable()) thread_.join();
  if (error_) std::rethrow_exception(error_);
  return summary_;
}

}  // namespace nbsel::bridge
