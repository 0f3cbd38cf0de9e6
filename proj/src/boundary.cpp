#include "boundary_lab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace boundary_lab {

namespace {

std::vector<Letter> to_vector(std::span<const Letter> s) { return {s.begin(), s.end()}; }

std::size_t primitive_root_length(const std::vector<Letter>& p) {
  std::size_t n = p.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = p[i] == p[i - d];
    if (periodic) return d;
  }
  return n;
}

}  // namespace

BoundaryPoint::BoundaryPoint(const GroupModel& model, const ReducedWord& head,
                             const ReducedWord& period) {
  if (period.empty()) throw std::invalid_argument("boundary point needs a nonempty period");
  if (model.inverse(period.front()) == period.back()) {
    throw std::invalid_argument("period is not cyclically reduced");
  }
  if (!head.empty() && model.inverse(period.front()) == head.back()) {
    throw std::invalid_argument("head cancels against the period");
  }
  std::vector<Letter> u = to_vector(head.letters());
  std::vector<Letter> p = to_vector(period.letters());
  p.resize(primitive_root_length(p));
  // Absorb trailing head letters into the period: u'x (qx)^inf = u' (xq)^inf.
  while (!u.empty() && u.back() == p.back()) {
    u.pop_back();
    std::rotate(p.rbegin(), p.rbegin() + 1, p.rend());
  }
  head_ = model.from_letters(u);
  period_ = model.from_letters(p);
}

BoundaryPoint BoundaryPoint::closing(const GroupModel& model, const ReducedWord& prefix) {
  Letter s = 0;
  if (!prefix.empty()) {
    while (!model.can_follow(prefix.back(), s)) ++s;
  }
  return BoundaryPoint(model, prefix, model.from_letters(std::vector<Letter>{s}));
}

BoundaryPoint BoundaryPoint::parse(const GroupModel& model, std::string_view head,
                                   std::string_view period) {
  return BoundaryPoint(model, model.word(head), model.word(period));
}

Letter BoundaryPoint::letter(std::size_t i) const {
  if (i < head_.size()) return head_[i];
  return period_[(i - head_.size()) % period_.size()];
}

std::vector<Letter> BoundaryPoint::prefix_letters(std::size_t n) const {
  std::vector<Letter> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = letter(i);
  return out;
}

ReducedWord BoundaryPoint::prefix(const GroupModel& model, std::size_t n) const {
  return model.from_letters(prefix_letters(n));
}

std::string BoundaryPoint::format(const GroupModel& model) const {
  std::string head = head_.empty() ? std::string() : model.format(head_);
  return head + "(" + model.format(period_) + ")^";
}

bool Cylinder::contains(const BoundaryPoint& xi) const {
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (xi.letter(i) != prefix[i]) return false;
  }
  return true;
}

bool Cylinder::contains(const Cylinder& other) const {
  if (other.prefix.size() < prefix.size()) return false;
  return common_prefix_letters(prefix.letters(), other.prefix.letters()) == prefix.size();
}

bool Cylinder::disjoint_from(const Cylinder& other) const {
  return !contains(other) && !other.contains(*this);
}

VisualMetric::VisualMetric(double epsilon, double h, bool strict) : epsilon_(epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (strict ? !(epsilon < h) : !(epsilon <= h)) {
    throw std::invalid_argument("epsilon must be below the critical exponent");
  }
  dimension_ = h / epsilon;
}

double gromov_wb(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.size() && g[i] == xi.letter(i); ++i) total += model.weight(g[i]);
  return total;
}

std::optional<std::size_t> common_prefix_letters(const BoundaryPoint& xi,
                                                 const BoundaryPoint& eta) {
  if (xi == eta) return std::nullopt;
  // Distinct eventually periodic words differ before this bound.
  std::size_t bound = std::max(xi.head().size(), eta.head().size()) +
                      std::lcm(xi.period().size(), eta.period().size()) + 1;
  for (std::size_t i = 0; i < bound; ++i) {
    if (xi.letter(i) != eta.letter(i)) return i;
  }
  return bound;
}

double gromov_bb(const GroupModel& model, const BoundaryPoint& xi, const BoundaryPoint& eta) {
  auto n = common_prefix_letters(xi, eta);
  if (!n) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < *n; ++i) total += model.weight(xi.letter(i));
  return total;
}

double visual_distance(const GroupModel& model, const VisualMetric& vm, const BoundaryPoint& xi,
                       const BoundaryPoint& eta) {
  if (xi == eta) return 0.0;
  return std::exp(-vm.epsilon() * gromov_bb(model, xi, eta));
}

Cylinder shadow(const GroupModel& model, const ReducedWord& g, double sigma0) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("shadow parameter must be positive");
  if (g.empty()) throw std::invalid_argument("the identity casts no shadow");
  double threshold = g.wlen() - sigma0;
  double len = 0.0;
  for (std::size_t m = 1; m <= g.size(); ++m) {
    len += model.weight(g[m - 1]);
    if (model.length_greater(len, threshold)) return Cylinder{model.prefix(g, m)};
  }
  return Cylinder{g};
}

Cylinder ball(const GroupModel& model, const VisualMetric& vm, const BoundaryPoint& xi,
              double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (rho > 1.0) return Cylinder{};
  double threshold = -std::log(rho) / vm.epsilon();
  std::vector<Letter> letters;
  double len = 0.0;
  while (!model.length_greater(len, threshold)) {
    Letter s = xi.letter(letters.size());
    letters.push_back(s);
    len += model.weight(s);
  }
  return Cylinder{model.from_letters(letters)};
}

BoundaryPoint act(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi) {
  std::size_t cancel = 0;
  while (cancel < g.size() && g[g.size() - 1 - cancel] == model.inverse(xi.letter(cancel))) {
    ++cancel;
  }
  std::vector<Letter> head(g.letters().begin(), g.letters().end() - static_cast<long>(cancel));
  const ReducedWord& u = xi.head();
  const ReducedWord& p = xi.period();
  std::vector<Letter> period = to_vector(p.letters());
  if (cancel < u.size()) {
    head.insert(head.end(), u.letters().begin() + static_cast<long>(cancel), u.letters().end());
  } else {
    std::size_t offset = (cancel - u.size()) % p.size();
    std::rotate(period.begin(), period.begin() + static_cast<long>(offset), period.end());
  }
  return BoundaryPoint(model, model.from_letters(head), model.from_letters(period));
}

std::optional<Cylinder> act_on_cylinder(const GroupModel& model, const ReducedWord& g,
                                        const Cylinder& c) {
  if (c.whole()) return c;
  std::size_t cancel = 0;
  while (cancel < g.size() && cancel < c.prefix.size() &&
         g[g.size() - 1 - cancel] == model.inverse(c.prefix[cancel])) {
    ++cancel;
  }
  if (cancel == c.prefix.size()) return std::nullopt;
  return Cylinder{model.multiply(g, c.prefix)};
}

BoundaryPoint hat(const GroupModel& model, const ReducedWord& g) {
  return BoundaryPoint::closing(model, g);
}

BoundaryPoint check(const GroupModel& model, const ReducedWord& g) {
  return hat(model, model.invert(g));
}

}  // namespace boundary_lab
