#include "nbsel/csp.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <span>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "text_util.hpp"

namespace nbsel::csp {

CspInstance build_instance(std::string name, std::vector<RatioConstraint> options,
                           std::vector<CarClass> classes) {
  CspInstance inst;
  inst.name = std::move(name);
  for (std::size_t o = 0; o < options.size(); ++o) {
    if (options[o].p < 1 || options[o].p > options[o].q) {
      throw ValidationError(fmt::format("option {}: ratio {}/{} violates 1 <= p <= q", o,
                                        options[o].p, options[o].q));
    }
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].options.size() != options.size()) {
      throw ValidationError(fmt::format("class {} has {} option flags, expected {}", c,
                                        classes[c].options.size(), options.size()));
    }
    inst.car_of_index.insert(inst.car_of_index.end(), classes[c].count, c);
  }
  inst.n = inst.car_of_index.size();
  inst.options = std::move(options);
  inst.classes = std::move(classes);
  return inst;
}

namespace {

std::size_t excess(std::size_t count, std::size_t p) { return count > p ? count - p : 0; }

// Per-option prefix counts of cars requiring the option.
class OptionPrefix {
 public:
  OptionPrefix(const CspInstance& instance, const std::vector<std::size_t>& seq)
      : n_(seq.size()), prefix_(instance.options.size() * (seq.size() + 1), 0) {
    for (std::size_t o = 0; o < instance.options.size(); ++o) {
      std::size_t* row = &prefix_[o * (n_ + 1)];
      for (std::size_t i = 0; i < n_; ++i) {
        row[i + 1] = row[i] + (instance.requires_option(seq[i], o) ? 1 : 0);
      }
    }
  }
  // Cars with option o in positions [lo, hi]; empty if hi < lo.
  [[nodiscard]] long range(std::size_t o, long lo, long hi) const {
    if (hi < lo) return 0;
    const std::size_t* row = &prefix_[o * (n_ + 1)];
    return static_cast<long>(row[hi + 1] - row[lo]);
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> prefix_;
};

}  // namespace

ObjectiveValue objective(const CspInstance& instance, const CspSolution& solution) {
  const std::size_t n = solution.sequence.size();
  const OptionPrefix prefix(instance, solution.sequence);
  std::size_t violations = 0;
  for (std::size_t o = 0; o < instance.options.size(); ++o) {
    const auto [p, q] = instance.options[o];
    if (q > n) continue;
    for (std::size_t t = 0; t + q <= n; ++t) {
      const long c = prefix.range(o, static_cast<long>(t), static_cast<long>(t + q - 1));
      violations += excess(static_cast<std::size_t>(c), p);
    }
  }
  return {0.0, static_cast<double>(violations)};
}

namespace {

// new[dst + k] = old[src + k], or old[src + len - 1 - k] when reversed.
struct Piece {
  long dst;
  long len;
  long src;
  bool reversed;
};

class DeltaEvaluator {
 public:
  DeltaEvaluator(const CspInstance& instance, const std::vector<std::size_t>& seq)
      : instance_(instance), n_(static_cast<long>(seq.size())), prefix_(instance, seq) {}

  // Change in total violation if the pieces were applied simultaneously.
  [[nodiscard]] long delta(std::span<const Piece> pieces) const {
    long total = 0;
    for (std::size_t o = 0; o < instance_.options.size(); ++o) {
      const long p = static_cast<long>(instance_.options[o].p);
      const long q = static_cast<long>(instance_.options[o].q);
      if (q > n_) continue;
      // Union of affected window starts, as sorted disjoint intervals.
      std::array<std::pair<long, long>, 2> spans{};
      std::size_t span_count = 0;
      for (const Piece& pc : pieces) {
        const long lo = std::max(0L, pc.dst - q + 1);
        const long hi = std::min(n_ - q, pc.dst + pc.len - 1);
        if (lo <= hi) spans[span_count++] = {lo, hi};
      }
      if (span_count == 2) {
        if (spans[1].first < spans[0].first) std::swap(spans[0], spans[1]);
        if (spans[1].first <= spans[0].second + 1) {
          spans[0].second = std::max(spans[0].second, spans[1].second);
          span_count = 1;
        }
      }
      for (std::size_t s = 0; s < span_count; ++s) {
        for (long t = spans[s].first; t <= spans[s].second; ++t) {
          const long w_hi = t + q - 1;
          const long old_count = prefix_.range(o, t, w_hi);
          long new_count = old_count;
          for (const Piece& pc : pieces) {
            const long x = std::max(t, pc.dst);
            const long y = std::min(w_hi, pc.dst + pc.len - 1);
            if (x > y) continue;
            new_count -= prefix_.range(o, x, y);
            if (!pc.reversed) {
              new_count += prefix_.range(o, pc.src + (x - pc.dst), pc.src + (y - pc.dst));
            } else {
              const long base = pc.src + pc.len - 1;
              new_count += prefix_.range(o, base - (y - pc.dst), base - (x - pc.dst));
            }
          }
          total += static_cast<long>(excess(static_cast<std::size_t>(new_count), p)) -
                   static_cast<long>(excess(static_cast<std::size_t>(old_count), p));
        }
      }
    }
    return total;
  }

 private:
  const CspInstance& instance_;
  long n_;
  OptionPrefix prefix_;
};

template <class Apply>
MoveOutcome commit(const CspInstance& instance, CspSolution& solution, OperatorId op,
                   const ObjectiveValue& before, const MoveTimer& timer, bool found,
                   Apply&& apply) {
  MoveOutcome out{op, false, before, before, 0.0};
  if (found) {
    CspSolution next = solution;
    apply(next.sequence);
    const ObjectiveValue after = objective(instance, next);
    if (after.total() < before.total()) {
      solution = std::move(next);
      out.found_improving = true;
      out.after = after;
    }
  }
  out.elapsed_seconds = timer.seconds();
  return out;
}

}  // namespace

MoveOutcome op_swap(const CspInstance& instance, CspSolution& solution) {
  const MoveTimer timer;
  const ObjectiveValue before = objective(instance, solution);
  const auto& seq = solution.sequence;
  const long n = static_cast<long>(seq.size());
  const DeltaEvaluator eval(instance, seq);
  long best = 0;
  long best_i = 0, best_j = 0;
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      if (seq[i] == seq[j]) continue;
      const std::array<Piece, 2> pieces{Piece{i, 1, j, false}, Piece{j, 1, i, false}};
      const long d = eval.delta(pieces);
      if (d < best) {
        best = d, best_i = i, best_j = j;
      }
    }
  }
  return commit(instance, solution, kSwap, before, timer, best < 0, [&](auto& s) {
    std::swap(s[best_i], s[best_j]);
  });
}

MoveOutcome op_move_car(const CspInstance& instance, CspSolution& solution) {
  const MoveTimer timer;
  const ObjectiveValue before = objective(instance, solution);
  const auto& seq = solution.sequence;
  const std::size_t n = seq.size();
  const std::size_t num_opts = instance.options.size();

  // Window counts for every option and start; moving a car one step is an
  // adjacent swap that touches at most two windows per option.
  std::vector<std::vector<long>> base_counts(num_opts);
  {
    const OptionPrefix prefix(instance, seq);
    for (std::size_t o = 0; o < num_opts; ++o) {
      const std::size_t q = instance.options[o].q;
      if (q > n) continue;
      base_counts[o].resize(n - q + 1);
      for (std::size_t t = 0; t + q <= n; ++t) {
        base_counts[o][t] = prefix.range(o, static_cast<long>(t), static_cast<long>(t + q - 1));
      }
    }
  }
  std::vector<std::vector<long>> counts;
  std::vector<std::size_t> work;

  // Swaps work[k] and work[k+1]; returns the violation change.
  auto adjacent_swap = [&](std::size_t k) {
    long d = 0;
    const std::size_t a = work[k];
    const std::size_t b = work[k + 1];
    for (std::size_t o = 0; o < num_opts; ++o) {
      const long ba = instance.requires_option(a, o) ? 1 : 0;
      const long bb = instance.requires_option(b, o) ? 1 : 0;
      if (ba == bb || counts[o].empty()) continue;
      const long p = static_cast<long>(instance.options[o].p);
      const long q = static_cast<long>(instance.options[o].q);
      const long last = static_cast<long>(counts[o].size()) - 1;
      auto bump = [&](long t, long by) {
        if (t < 0 || t > last) return;
        const long old_c = counts[o][t];
        counts[o][t] += by;
        d += std::max(0L, counts[o][t] - p) - std::max(0L, old_c - p);
      };
      bump(static_cast<long>(k) - q + 1, bb - ba);
      bump(static_cast<long>(k) + 1, ba - bb);
    }
    std::swap(work[k], work[k + 1]);
    return d;
  };

  long best = 0;
  std::size_t best_i = 0, best_j = 0;
  std::vector<long> left(n);
  for (std::size_t i = 0; i < n; ++i) {
    work = seq;
    counts = base_counts;
    long d = 0;
    for (std::size_t j = i; j-- > 0;) {
      d += adjacent_swap(j);
      left[j] = d;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (left[j] < best) {
        best = left[j], best_i = i, best_j = j;
      }
    }
    work = seq;
    counts = base_counts;
    d = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      d += adjacent_swap(j - 1);
      if (d < best) {
        best = d, best_i = i, best_j = j;
      }
    }
  }
  return commit(instance, solution, kMoveCar, before, timer, best < 0, [&](auto& s) {
    const std::size_t car = s[best_i];
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(best_i));
    s.insert(s.begin() + static_cast<std::ptrdiff_t>(best_j), car);
  });
}

MoveOutcome op_flip_subseq(const CspInstance& instance, CspSolution& solution) {
  const MoveTimer timer;
  const ObjectiveValue before = objective(instance, solution);
  const auto& seq = solution.sequence;
  const long n = static_cast<long>(seq.size());
  const DeltaEvaluator eval(instance, seq);
  long best = 0;
  long best_s = 0, best_len = 0;
  const long max_len = static_cast<long>(kMaxSubseqLength);
  for (long s = 0; s < n; ++s) {
    for (long len = 2; len <= max_len && s + len <= n; ++len) {
      const std::array<Piece, 1> pieces{Piece{s, len, s, true}};
      const long d = eval.delta(pieces);
      if (d < best) {
        best = d, best_s = s, best_len = len;
      }
    }
  }
  return commit(instance, solution, kFlipSubseq, before, timer, best < 0, [&](auto& seq2) {
    std::reverse(seq2.begin() + best_s, seq2.begin() + best_s + best_len);
  });
}

MoveOutcome op_swap_subseq(const CspInstance& instance, CspSolution& solution) {
  const MoveTimer timer;
  const ObjectiveValue before = objective(instance, solution);
  const auto& seq = solution.sequence;
  const long n = static_cast<long>(seq.size());
  const DeltaEvaluator eval(instance, seq);
  long best = 0;
  long best_a = 0, best_b = 0, best_len = 0;
  const long max_len = static_cast<long>(kMaxSubseqLength);
  for (long a = 0; a < n; ++a) {
    for (long b = a + 1; b < n; ++b) {
      for (long len = 1; len <= max_len && a + len <= b && b + len <= n; ++len) {
        const std::array<Piece, 2> pieces{Piece{a, len, b, false}, Piece{b, len, a, false}};
        const long d = eval.delta(pieces);
        if (d < best) {
          best = d, best_a = a, best_b = b, best_len = len;
        }
      }
    }
  }
  return commit(instance, solution, kSwapSubseq, before, timer, best < 0, [&](auto& s) {
    std::swap_ranges(s.begin() + best_a, s.begin() + best_a + best_len, s.begin() + best_b);
  });
}

CspInstance parse_csplib(std::string_view text, std::string name) {
  const auto lines = detail::split_lines(text);
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto tokens = detail::split_ws(lines[ln]);
    if (!tokens.empty()) rows.emplace_back(ln + 1, std::move(tokens));
  }
  auto to_size = [](const std::string& tok, std::size_t lineno) {
    const auto v = detail::parse_number<long long>(tok);
    if (!v || *v < 0) throw ParseError("expected a non-negative integer, got '" + tok + "'", lineno);
    return static_cast<std::size_t>(*v);
  };

  if (rows.empty()) throw ParseError("empty instance");
  const auto& [head_line, head] = rows[0];
  if (head.size() != 3) throw ParseError("header needs: cars options classes", head_line);
  const std::size_t n = to_size(head[0], head_line);
  const std::size_t num_opts = to_size(head[1], head_line);
  const std::size_t num_classes = to_size(head[2], head_line);
  if (rows.size() < 3 + num_classes) {
    throw ParseError(fmt::format("expected {} class lines, found {}", num_classes,
                                 rows.size() < 3 ? 0 : rows.size() - 3));
  }

  std::vector<RatioConstraint> options(num_opts);
  for (std::size_t which = 0; which < 2; ++which) {
    const auto& [lineno, toks] = rows[1 + which];
    if (toks.size() != num_opts) {
      throw ParseError(fmt::format("expected {} {} values, found {}", num_opts,
                                   which == 0 ? "p" : "q", toks.size()),
                       lineno);
    }
    for (std::size_t o = 0; o < num_opts; ++o) {
      (which == 0 ? options[o].p : options[o].q) = to_size(toks[o], lineno);
    }
  }

  std::vector<CarClass> classes(num_classes);
  std::vector<bool> seen(num_classes, false);
  for (std::size_t k = 0; k < num_classes; ++k) {
    const auto& [lineno, toks] = rows[3 + k];
    if (toks.size() != 2 + num_opts) {
      throw ParseError(fmt::format("class line needs {} fields, found {}", 2 + num_opts,
                                   toks.size()),
                       lineno);
    }
    const std::size_t id = to_size(toks[0], lineno);
    if (id >= num_classes || seen[id]) throw ParseError("bad or duplicate class id", lineno);
    seen[id] = true;
    classes[id].count = to_size(toks[1], lineno);
    classes[id].options.resize(num_opts);
    for (std::size_t o = 0; o < num_opts; ++o) {
      const std::size_t bit = to_size(toks[2 + o], lineno);
      if (bit > 1) throw ParseError("option flags must be 0 or 1", lineno);
      classes[id].options[o] = bit == 1;
    }
  }

  CspInstance inst = build_instance(std::move(name), std::move(options), std::move(classes));
  if (inst.n != n) {
    throw ValidationError(fmt::format("class counts sum to {}, header declares {} cars", inst.n, n));
  }
  return inst;
}

CspInstance load_csplib(const std::string& path) {
  return parse_csplib(detail::read_file(path), detail::stem(path));
}

MatrixEncoding encode_state(const CspInstance& instance, const CspSolution& solution) {
  MatrixEncoding m;
  m.rows = instance.options.size();
  m.cols = solution.sequence.size();
  m.state.assign(m.rows * m.cols, 0.0);
  m.ratios.assign(m.rows * 2, 0.0);
  std::size_t max_q = 0;
  for (const auto& r : instance.options) max_q = std::max(max_q, r.q);
  for (std::size_t o = 0; o < m.rows; ++o) {
    for (std::size_t i = 0; i < m.cols; ++i) {
      m.state[o * m.cols + i] = instance.requires_option(solution.sequence[i], o) ? 1.0 : 0.0;
    }
    m.ratios[o * 2] = static_cast<double>(instance.options[o].p) / static_cast<double>(max_q);
    m.ratios[o * 2 + 1] = static_cast<double>(instance.options[o].q) / static_cast<double>(max_q);
  }
  return m;
}

CspSolution random_solution(const CspInstance& instance, Rng& rng) {
  CspSolution s{instance.car_of_index};
  std::shuffle(s.sequence.begin(), s.sequence.end(), rng);
  return s;
}

CspModel::CspModel(std::shared_ptr<const CspInstance> instance)
    : instance_(std::move(instance)), current_{instance_->car_of_index}, best_(current_) {}

std::string_view CspModel::operator_name(OperatorId op) const {
  switch (op) {
    case kSwap: return "swap";
    case kMoveCar: return "move";
    case kFlipSubseq: return "flip";
    case kSwapSubseq: return "swap-subseq";
    default: throw std::out_of_range("CSP operator id out of range");
  }
}

void CspModel::restart(Rng& rng) { current_ = random_solution(*instance_, rng); }

ObjectiveValue CspModel::objective() const { return csp::objective(*instance_, current_); }

MoveOutcome CspModel::apply_operator(OperatorId op) {
  switch (op) {
    case kSwap: return op_swap(*instance_, current_);
    case kMoveCar: return op_move_car(*instance_, current_);
    case kFlipSubseq: return op_flip_subseq(*instance_, current_);
    case kSwapSubseq: return op_swap_subseq(*instance_, current_);
    default: throw std::out_of_range("CSP operator id out of range");
  }
}

void CspModel::keep_current_as_best() { best_ = current_; }

ObjectiveValue CspModel::best_objective() const { return csp::objective(*instance_, best_); }

std::string CspModel::describe_best() const {
  return fmt::format("sequence={}", fmt::join(best_.sequence, " "));
}

StateEncoding CspModel::encode_state() const { return csp::encode_state(*instance_, current_); }

EncodingSchema CspModel::encoding_schema() const {
  EncodingSchema s;
  s.is_graph = false;
  s.rows = instance_->options.size();
  s.cols = instance_->n;
  return s;
}

}  // namespace nbsel::csp
