#include "boundary_lab/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace boundary_lab {

namespace {

constexpr Letter kNoLetter = 0xff;

Letter inverse_letter(int rank, Letter s) { return static_cast<Letter>((s + rank) % (2 * rank)); }

bool close_enough(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

StepFunction::StepFunction(int rank, double value) : rank_(rank) {
  if (rank < 1) throw std::invalid_argument("rank must be positive");
  nodes_.push_back(Node{-1, value});
}

int StepFunction::child_slot(int depth, Letter last, Letter s) const {
  if (depth == 0) return s;
  Letter skip = inverse_letter(rank_, last);
  return s < skip ? s : s - 1;
}

Letter StepFunction::slot_letter(int depth, Letter last, int slot) const {
  if (depth == 0) return static_cast<Letter>(slot);
  Letter skip = inverse_letter(rank_, last);
  return static_cast<Letter>(slot < skip ? slot : slot + 1);
}

StepFunction StepFunction::constant(const GroupModel& model, double value) {
  return StepFunction(model.rank(), value);
}

StepFunction StepFunction::indicator(const GroupModel& model, const Cylinder& c, double value) {
  std::span<const Letter> target = c.prefix.letters();
  return refine(model, [&](std::span<const Letter> w) -> std::optional<double> {
    std::size_t n = common_prefix_letters(w, target);
    if (n == target.size()) return value;  // [w] inside [c]
    if (n < w.size()) return 0.0;          // diverged
    return std::nullopt;
  });
}

StepFunction StepFunction::from_parts(const GroupModel& model,
                                      const std::vector<std::pair<Cylinder, double>>& parts) {
  std::size_t max_len = 0;
  for (const auto& [c, v] : parts) max_len = std::max(max_len, c.prefix.size());
  StepFunction f = refine(
      model,
      [&](std::span<const Letter> w) -> std::optional<double> {
        for (const auto& [c, v] : parts) {
          std::span<const Letter> p = c.prefix.letters();
          if (p.size() <= w.size() && common_prefix_letters(w, p) == p.size()) return v;
        }
        if (w.size() >= max_len) {
          throw std::invalid_argument("cylinders do not cover the boundary");
        }
        return std::nullopt;
      },
      max_len + 1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      if (!parts[i].first.disjoint_from(parts[j].first)) {
        throw std::invalid_argument("cylinders in a step function must be disjoint");
      }
    }
  }
  return f;
}

StepFunction StepFunction::refine(const GroupModel& model, const Probe& probe,
                                  std::size_t max_depth) {
  StepFunction f(model.rank());
  f.nodes_.clear();
  f.nodes_.push_back(Node{});
  std::vector<Letter> prefix;
  std::function<void(int)> build = [&](int index) {
    if (auto v = probe(prefix)) {
      f.nodes_[index].value = *v;
      return;
    }
    if (prefix.size() >= max_depth) {
      throw std::runtime_error("step function refinement exceeded the depth limit");
    }
    int depth = static_cast<int>(prefix.size());
    Letter last = prefix.empty() ? kNoLetter : prefix.back();
    int count = f.fanout(depth);
    int first = static_cast<int>(f.nodes_.size());
    f.nodes_[index].first_child = first;
    f.nodes_.resize(f.nodes_.size() + count);
    for (int slot = 0; slot < count; ++slot) {
      prefix.push_back(f.slot_letter(depth, last, slot));
      build(first + slot);
      prefix.pop_back();
    }
  };
  build(0);
  return f;
}

const StepFunction::Node* StepFunction::descend(std::span<const Letter> head,
                                                std::span<const Letter> tail,
                                                bool& exhausted) const {
  const Node* node = &nodes_[0];
  int depth = 0;
  Letter last = kNoLetter;
  std::size_t total = head.size() + tail.size();
  for (std::size_t i = 0; i < total; ++i) {
    if (node->first_child < 0) {
      exhausted = false;
      return node;
    }
    Letter s = i < head.size() ? head[i] : tail[i - head.size()];
    node = &nodes_[node->first_child + child_slot(depth, last, s)];
    last = s;
    ++depth;
  }
  exhausted = true;
  return node;
}

std::optional<double> StepFunction::on(std::span<const Letter> prefix) const {
  return on(prefix, {});
}

std::optional<double> StepFunction::on(std::span<const Letter> head,
                                       std::span<const Letter> tail) const {
  bool exhausted = false;
  const Node* node = descend(head, tail, exhausted);
  if (node->first_child >= 0) return std::nullopt;
  return node->value;
}

double StepFunction::at(const BoundaryPoint& xi) const {
  const Node* node = &nodes_[0];
  int depth = 0;
  Letter last = kNoLetter;
  while (node->first_child >= 0) {
    Letter s = xi.letter(static_cast<std::size_t>(depth));
    node = &nodes_[node->first_child + child_slot(depth, last, s)];
    last = s;
    ++depth;
  }
  return node->value;
}

std::vector<std::pair<std::vector<Letter>, double>> StepFunction::parts() const {
  std::vector<std::pair<std::vector<Letter>, double>> out;
  std::vector<Letter> prefix;
  std::function<void(int)> walk = [&](int index) {
    const Node& node = nodes_[index];
    if (node.first_child < 0) {
      out.emplace_back(prefix, node.value);
      return;
    }
    int depth = static_cast<int>(prefix.size());
    Letter last = prefix.empty() ? kNoLetter : prefix.back();
    for (int slot = 0; slot < fanout(depth); ++slot) {
      prefix.push_back(slot_letter(depth, last, slot));
      walk(node.first_child + slot);
      prefix.pop_back();
    }
  };
  walk(0);
  return out;
}

std::size_t StepFunction::part_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.first_child < 0; }));
}

std::size_t StepFunction::depth() const {
  std::size_t best = 0;
  for (const auto& [prefix, value] : parts()) best = std::max(best, prefix.size());
  return best;
}

StepFunction StepFunction::canonical(double tolerance) const {
  // Post-order pass: a subtree collapses when all its leaves agree.
  std::vector<std::optional<double>> uniform(nodes_.size());
  std::function<void(int, int)> scan = [&](int index, int depth) {
    const Node& node = nodes_[index];
    if (node.first_child < 0) {
      uniform[index] = node.value;
      return;
    }
    std::optional<double> common;
    bool same = true;
    for (int slot = 0; slot < fanout(depth); ++slot) {
      int child = node.first_child + slot;
      scan(child, depth + 1);
      if (!uniform[child]) {
        same = false;
      } else if (!common) {
        common = uniform[child];
      } else if (!close_enough(*common, *uniform[child], tolerance)) {
        same = false;
      }
    }
    if (same) uniform[index] = common;
  };
  scan(0, 0);
  StepFunction out(rank_);
  out.nodes_.clear();
  out.nodes_.push_back(Node{});
  std::function<void(int, int, int)> copy = [&](int from, int to, int depth) {
    if (uniform[from]) {
      out.nodes_[to].value = *uniform[from];
      return;
    }
    int count = fanout(depth);
    int first = static_cast<int>(out.nodes_.size());
    out.nodes_[to].first_child = first;
    out.nodes_.resize(out.nodes_.size() + count);
    for (int slot = 0; slot < count; ++slot) {
      copy(nodes_[from].first_child + slot, first + slot, depth + 1);
    }
  };
  copy(0, 0, 0);
  return out;
}

double StepFunction::sup_abs() const {
  double best = 0.0;
  for (const Node& n : nodes_) {
    if (n.first_child < 0) best = std::max(best, std::abs(n.value));
  }
  return best;
}

double StepFunction::lipschitz(const GroupModel& model, double epsilon) const {
  double best = 0.0;
  std::vector<Letter> prefix;
  // Returns (min, max) over the subtree.
  std::function<std::pair<double, double>(int, double)> walk =
      [&](int index, double wlen) -> std::pair<double, double> {
    const Node& node = nodes_[index];
    if (node.first_child < 0) return {node.value, node.value};
    int depth = static_cast<int>(prefix.size());
    Letter last = prefix.empty() ? kNoLetter : prefix.back();
    std::vector<std::pair<double, double>> ranges;
    for (int slot = 0; slot < fanout(depth); ++slot) {
      Letter s = slot_letter(depth, last, slot);
      prefix.push_back(s);
      ranges.push_back(walk(node.first_child + slot, wlen + model.weight(s)));
      prefix.pop_back();
    }
    double scale = std::exp(epsilon * wlen);
    std::pair<double, double> total{std::numeric_limits<double>::infinity(),
                                    -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      for (std::size_t j = 0; j < ranges.size(); ++j) {
        if (i != j) best = std::max(best, (ranges[i].second - ranges[j].first) * scale);
      }
      total.first = std::min(total.first, ranges[i].first);
      total.second = std::max(total.second, ranges[i].second);
    }
    return total;
  };
  walk(0, 0.0);
  return best;
}

StepFunction StepFunction::map(const std::function<double(double)>& fn) const {
  StepFunction out = *this;
  for (Node& n : out.nodes_) {
    if (n.first_child < 0) n.value = fn(n.value);
  }
  return out;
}

bool operator==(const StepFunction& a, const StepFunction& b) {
  return a.parts() == b.parts();
}

StepFunction combine(const GroupModel& model, const StepFunction& f, const StepFunction& g,
                     const std::function<double(double, double)>& op) {
  return StepFunction::refine(model, [&](std::span<const Letter> w) -> std::optional<double> {
    auto a = f.on(w);
    auto b = g.on(w);
    if (a && b) return op(*a, *b);
    return std::nullopt;
  });
}

namespace {

StepFunction combine_same_rank(const StepFunction& f, const StepFunction& g,
                               const std::function<double(double, double)>& op) {
  if (f.rank() != g.rank()) throw std::invalid_argument("step functions over different ranks");
  return combine(GroupModel::uniform(f.rank()), f, g, op);
}

}  // namespace

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  return combine_same_rank(f, g, [](double a, double b) { return a + b; });
}

StepFunction operator-(const StepFunction& f, const StepFunction& g) {
  return combine_same_rank(f, g, [](double a, double b) { return a - b; });
}

StepFunction operator*(const StepFunction& f, const StepFunction& g) {
  return combine_same_rank(f, g, [](double a, double b) { return a * b; });
}

StepFunction operator*(double c, const StepFunction& f) {
  return f.map([c](double x) { return c * x; });
}

void for_each_part(const ConformalDensity& density, const StepFunction& f,
                   const std::function<void(std::span<const Letter>, double, double)>& fn) {
  for (const auto& [prefix, value] : f.parts()) fn(prefix, density.mu_letters(prefix), value);
}

double integral(const ConformalDensity& density, const StepFunction& f) {
  double total = 0.0;
  for_each_part(density, f, [&](std::span<const Letter>, double mass, double value) {
    total += mass * value;
  });
  return total;
}

double inner(const ConformalDensity& density, const StepFunction& f, const StepFunction& g) {
  return integral(density, combine(density.model(), f, g, [](double a, double b) { return a * b; }));
}

double l2_norm(const ConformalDensity& density, const StepFunction& f) {
  return std::sqrt(inner(density, f, f));
}

}  // namespace boundary_lab
