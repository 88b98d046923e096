#include "nbsel/wire.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

namespace nbsel::wire {

using nlohmann::json;

std::string_view type_name(const Message& m) {
  static constexpr std::string_view names[] = {"hello", "act",  "action", "learn",
                                               "episode_end", "bye", "error"};
  return names[m.index()];
}

namespace {

// nlohmann's own dump picks the shortest round-trip form; the protocol asks
// for a fixed 17 significant digits, so numbers are written here.
void dump(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out.push_back(',');
        first = false;
        out += json(k).dump();
        out.push_back(':');
        dump(v, out);
      }
      out.push_back('}');
      break;
    }
    case json::value_t::array: {
      out.push_back('[');
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out.push_back(',');
        dump(j[i], out);
      }
      out.push_back(']');
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw WireError("refusing to encode a non-finite number");
      out += fmt::format("{:.17g}", v);
      break;
    }
    default: out += j.dump(); break;
  }
}

void put_state(json& j, const StateEncoding& s) {
  if (const auto* g = std::get_if<GraphEncoding>(&s)) {
    j["encoding"] = "graph";
    j["vertex_count"] = g->vertex_count;
    j["vertex_attr_width"] = g->vertex_attr_width;
    j["vertex_attrs"] = g->vertex_attrs;
    j["edge_attr_width"] = g->edge_attr_width;
    json edges = json::array();
    for (const auto& e : g->edges) {
      json row = json::array({e.src, e.dst});
      for (double a : e.attrs) row.push_back(a);
      edges.push_back(std::move(row));
    }
    j["edges"] = std::move(edges);
  } else {
    const auto& m = std::get<MatrixEncoding>(s);
    j["encoding"] = "matrix";
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    j["state_matrix"] = m.state;
    j["ratio_matrix"] = m.ratios;
  }
}

template <class T>
T need(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw WireError(fmt::format("missing field '{}'", key));
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw WireError(fmt::format("field '{}' has the wrong type", key));
  }
}

std::vector<double> reals(const json& j, const char* key, std::size_t expected) {
  auto v = need<std::vector<double>>(j, key);
  if (v.size() != expected) {
    throw WireError(fmt::format("field '{}' has {} values, expected {}", key, v.size(), expected));
  }
  return v;
}

StateEncoding get_state(const json& j) {
  const auto kind = need<std::string>(j, "encoding");
  if (kind == "graph") {
    GraphEncoding g;
    g.vertex_count = need<std::size_t>(j, "vertex_count");
    g.vertex_attr_width = need<std::size_t>(j, "vertex_attr_width");
    g.vertex_attrs = reals(j, "vertex_attrs", g.vertex_count * g.vertex_attr_width);
    g.edge_attr_width = need<std::size_t>(j, "edge_attr_width");
    for (const auto& row : need<json>(j, "edges")) {
      if (!row.is_array() || row.size() != 2 + g.edge_attr_width) {
        throw WireError("edge row has the wrong width");
      }
      GraphEdge e;
      e.src = row[0].get<std::size_t>();
      e.dst = row[1].get<std::size_t>();
      for (std::size_t k = 0; k < g.edge_attr_width; ++k) e.attrs.push_back(row[2 + k].get<double>());
      g.edges.push_back(std::move(e));
    }
    return g;
  }
  if (kind == "matrix") {
    MatrixEncoding m;
    m.rows = need<std::size_t>(j, "rows");
    m.cols = need<std::size_t>(j, "cols");
    m.state = reals(j, "state_matrix", m.rows * m.cols);
    m.ratios = reals(j, "ratio_matrix", m.rows * 2);
    return m;
  }
  throw WireError("unknown encoding '" + kind + "'");
}

json to_json(const Message& m) {
  json j;
  j["type"] = std::string(type_name(m));
  std::visit(
      [&](const auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, Hello>) {
          j["version"] = msg.version;
          j["problem"] = msg.problem;
          j["action_count"] = msg.action_count;
          j["encoding"] = msg.schema.is_graph ? "graph" : "matrix";
          if (msg.schema.is_graph) {
            j["vertex_count"] = msg.schema.vertex_count;
            j["vertex_attr_width"] = msg.schema.vertex_attr_width;
            j["edge_attr_width"] = msg.schema.edge_attr_width;
          } else {
            j["rows"] = msg.schema.rows;
            j["cols"] = msg.schema.cols;
          }
          j["agent"] = msg.agent;
          j["reward"] = msg.reward;
          json hp = json::object();
          for (const auto& [k, v] : msg.hyperparameters) hp[k] = v;
          j["hyperparameters"] = std::move(hp);
          j["gamma"] = msg.gamma;
          j["seed"] = msg.seed;
        } else if constexpr (std::is_same_v<T, Act>) {
          j["step"] = msg.step;
          j["tabu_mask"] = msg.tabu_mask;
          put_state(j, msg.state);
        } else if constexpr (std::is_same_v<T, Action>) {
          j["id"] = msg.id;
        } else if constexpr (std::is_same_v<T, Learn>) {
          j["action"] = msg.action;
          j["reward"] = msg.reward;
          j["done"] = msg.done ? 1 : 0;
          if (msg.state) put_state(j, *msg.state);
        } else if constexpr (std::is_same_v<T, Bye>) {
          if (!msg.text.empty()) j["text"] = msg.text;
          if (msg.summary) {
            j["episodes"] = msg.summary->episodes;
            j["done_count"] = msg.summary->done_count;
            j["acts"] = msg.summary->acts;
            j["learns"] = msg.summary->learns;
          }
        } else if constexpr (std::is_same_v<T, Error>) {
          j["text"] = msg.text;
        }
      },
      m);
  return j;
}

}  // namespace

std::string encode(const Message& m) {
  std::string out;
  dump(to_json(m), out);
  return out;
}

Message decode(std::string_view payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::parse_error& e) {
    throw WireError(std::string("payload is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw WireError("payload is not an object");
  const auto type = need<std::string>(j, "type");
  if (type == "hello") {
    Hello h;
    h.version = need<std::string>(j, "version");
    h.problem = need<std::string>(j, "problem");
    h.action_count = need<std::uint64_t>(j, "action_count");
    const auto enc = need<std::string>(j, "encoding");
    if (enc != "graph" && enc != "matrix") throw WireError("unknown encoding '" + enc + "'");
    h.schema.is_graph = enc == "graph";
    if (h.schema.is_graph) {
      h.schema.vertex_count = need<std::size_t>(j, "vertex_count");
      h.schema.vertex_attr_width = need<std::size_t>(j, "vertex_attr_width");
      h.schema.edge_attr_width = need<std::size_t>(j, "edge_attr_width");
    } else {
      h.schema.rows = need<std::size_t>(j, "rows");
      h.schema.cols = need<std::size_t>(j, "cols");
    }
    h.agent = need<std::string>(j, "agent");
    h.reward = need<std::string>(j, "reward");
    const json params = need<json>(j, "hyperparameters");
    for (const auto& [k, v] : params.items()) {
      if (!v.is_number()) throw WireError("hyperparameter '" + k + "' is not a number");
      h.hyperparameters[k] = v.get<double>();
    }
    h.gamma = need<double>(j, "gamma");
    h.seed = need<std::uint64_t>(j, "seed");
    return h;
  }
  if (type == "act") {
    Act a;
    a.step = need<std::uint64_t>(j, "step");
    a.tabu_mask = need<std::vector<std::uint8_t>>(j, "tabu_mask");
    for (auto b : a.tabu_mask) {
      if (b > 1) throw WireError("tabu_mask entries must be 0 or 1");
    }
    a.state = get_state(j);
    return a;
  }
  if (type == "action") return Action{need<std::int64_t>(j, "id")};
  if (type == "learn") {
    Learn l;
    if (j.contains("action")) l.action = need<std::int64_t>(j, "action");
    if (j.contains("reward")) l.reward = need<double>(j, "reward");
    if (j.contains("done")) l.done = need<int>(j, "done") != 0;
    if (j.contains("encoding")) l.state = get_state(j);
    return l;
  }
  if (type == "episode_end") return EpisodeEnd{};
  if (type == "bye") {
    Bye b;
    if (j.contains("text")) b.text = need<std::string>(j, "text");
    if (j.contains("episodes")) {
      b.summary = Summary{need<std::uint64_t>(j, "episodes"), need<std::uint64_t>(j, "done_count"),
                          need<std::uint64_t>(j, "acts"), need<std::uint64_t>(j, "learns")};
    }
    return b;
  }
  if (type == "error") return Error{j.contains("text") ? need<std::string>(j, "text") : ""};
  throw WireError("unknown message type '" + type + "'");
}

std::string frame(std::string_view payload) {
  if (payload.size() > kMaxFrameBytes) throw WireError("payload exceeds the frame size limit");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(4 + payload.size());
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
  out.append(payload);
  return out;
}

std::uint32_t read_length_prefix(const unsigned char* h) {
  return (static_cast<std::uint32_t>(h[0]) << 24) | (static_cast<std::uint32_t>(h[1]) << 16) |
         (static_cast<std::uint32_t>(h[2]) << 8) | static_cast<std::uint32_t>(h[3]);
}

}  // namespace nbsel::wire
