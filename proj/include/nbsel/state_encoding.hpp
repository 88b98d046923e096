#pragma once

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

namespace nbsel {

struct GraphEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::vector<double> attrs;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Attributed graph: one row of `vertex_attr_width` values per vertex.
struct GraphEncoding {
  std::size_t vertex_count = 0;
  std::size_t vertex_attr_width = 0;
  std::vector<double> vertex_attrs;  // row-major, vertex_count x vertex_attr_width
  std::size_t edge_attr_width = 0;
  std::vector<GraphEdge> edges;

  [[nodiscard]] double vertex_attr(std::size_t v, std::size_t k) const {
    return vertex_attrs[v * vertex_attr_width + k];
  }

  friend bool operator==(const GraphEncoding&, const GraphEncoding&) = default;
};

/// Matrix pair used for sequencing problems.
struct MatrixEncoding {
  std::size_t rows = 0;       // options
  std::size_t cols = 0;       // sequence positions
  std::vector<double> state;  // rows x cols, row-major
  std::vector<double> ratios; // rows x 2, row-major

  friend bool operator==(const MatrixEncoding&, const MatrixEncoding&) = default;
};

using StateEncoding = std::variant<GraphEncoding, MatrixEncoding>;

/// Dimensions announced in the handshake so the agent can size its network.
struct EncodingSchema {
  bool is_graph = true;
  std::size_t vertex_count = 0;
  std::size_t vertex_attr_width = 0;
  std::size_t edge_attr_width = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  friend bool operator==(const EncodingSchema&, const EncodingSchema&) = default;
};

/// The instance lacks data the encoding needs (e.g. coordinates).
class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool all_finite(const StateEncoding& encoding);

}  // namespace nbsel
