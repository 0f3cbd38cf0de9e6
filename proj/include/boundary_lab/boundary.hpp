#pragma once

#include <optional>
#include <string>

#include "boundary_lab/words.hpp"

namespace boundary_lab {

// The end u p p p ... of the tree. Stored in normal form: the period is
// primitive and the head is as short as possible, so equality of points is
// equality of (head, period).
class BoundaryPoint {
 public:
  BoundaryPoint(const GroupModel& model, const ReducedWord& head, const ReducedWord& period);
  // Closes a finite prefix into a point by repeating the first letter that
  // may follow it. Used to turn sampled prefixes into exact points.
  static BoundaryPoint closing(const GroupModel& model, const ReducedWord& prefix);
  static BoundaryPoint parse(const GroupModel& model, std::string_view head,
                             std::string_view period);

  const ReducedWord& head() const { return head_; }
  const ReducedWord& period() const { return period_; }
  Letter letter(std::size_t i) const;
  std::vector<Letter> prefix_letters(std::size_t n) const;
  ReducedWord prefix(const GroupModel& model, std::size_t n) const;
  std::string format(const GroupModel& model) const;

  friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
    return a.head_ == b.head_ && a.period_ == b.period_;
  }

 private:
  ReducedWord head_;
  ReducedWord period_;
};

// [prefix]; the empty prefix stands for the whole boundary.
struct Cylinder {
  ReducedWord prefix;

  bool whole() const { return prefix.empty(); }
  bool contains(const BoundaryPoint& xi) const;
  bool contains(const Cylinder& other) const;
  bool disjoint_from(const Cylinder& other) const;
};

class VisualMetric {
 public:
  // Requires 0 < epsilon <= h; with strict set, epsilon < h (so D > 1).
  VisualMetric(double epsilon, double h, bool strict = true);
  double epsilon() const { return epsilon_; }
  double dimension() const { return dimension_; }

 private:
  double epsilon_;
  double dimension_;
};

// Weighted length of the longest common prefix of g and xi.
double gromov_wb(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi);
// Number of shared leading letters; nullopt when the points coincide.
std::optional<std::size_t> common_prefix_letters(const BoundaryPoint& xi, const BoundaryPoint& eta);
// Weighted common-prefix length, +infinity when xi == eta.
double gromov_bb(const GroupModel& model, const BoundaryPoint& xi, const BoundaryPoint& eta);
double visual_distance(const GroupModel& model, const VisualMetric& vm, const BoundaryPoint& xi,
                       const BoundaryPoint& eta);

// The cylinder [g_1 .. g_m] with m >= 1 minimal such that
// wlen(g_1 .. g_m) > |g| - sigma0.
Cylinder shadow(const GroupModel& model, const ReducedWord& g, double sigma0);
// Open visual ball; the whole boundary once rho > 1.
Cylinder ball(const GroupModel& model, const VisualMetric& vm, const BoundaryPoint& xi, double rho);

BoundaryPoint act(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi);
// Image g[w] of a cylinder when it is again a cylinder, i.e. when g does not
// swallow all of w.
std::optional<Cylinder> act_on_cylinder(const GroupModel& model, const ReducedWord& g,
                                        const Cylinder& c);

// g followed by s^inf, s the first letter in alphabet order that may follow g.
BoundaryPoint hat(const GroupModel& model, const ReducedWord& g);
// hat(g^-1).
BoundaryPoint check(const GroupModel& model, const ReducedWord& g);

}  // namespace boundary_lab
