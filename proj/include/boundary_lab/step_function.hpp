#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "boundary_lab/boundary.hpp"
#include "boundary_lab/density.hpp"

namespace boundary_lab {

// A function on the boundary that is constant on the leaves of a finite
// cylinder tree. Children of the root are the 2k letters; children of a node
// ending in x are the 2k-1 letters other than x^-1, both in letter order.
class StepFunction {
 public:
  // Returns the value when the function is constant on [prefix], or nullopt
  // to ask for the cylinder to be split into its children.
  using Probe = std::function<std::optional<double>(std::span<const Letter>)>;

  explicit StepFunction(int rank = 2, double value = 0.0);

  static StepFunction constant(const GroupModel& model, double value);
  static StepFunction indicator(const GroupModel& model, const Cylinder& c, double value = 1.0);
  // The cylinders must partition the boundary.
  static StepFunction from_parts(const GroupModel& model,
                                 const std::vector<std::pair<Cylinder, double>>& parts);
  static StepFunction refine(const GroupModel& model, const Probe& probe,
                             std::size_t max_depth = 64);

  int rank() const { return rank_; }
  double at(const BoundaryPoint& xi) const;
  std::optional<double> on(std::span<const Letter> prefix) const;
  // Same as on() for the concatenation of two pieces.
  std::optional<double> on(std::span<const Letter> head, std::span<const Letter> tail) const;

  // Leaves in lexicographic order of their prefixes.
  std::vector<std::pair<std::vector<Letter>, double>> parts() const;
  std::size_t part_count() const;
  std::size_t depth() const;

  // Merges sibling leaves whose values agree within a relative tolerance.
  StepFunction canonical(double tolerance = 1e-12) const;
  double sup_abs() const;
  // max over pairs of leaves of |f_u - f_v| exp(eps * wlen(lcp(u, v))).
  double lipschitz(const GroupModel& model, double epsilon) const;

  StepFunction map(const std::function<double(double)>& fn) const;

  friend bool operator==(const StepFunction& a, const StepFunction& b);

 private:
  struct Node {
    int first_child = -1;
    double value = 0.0;
  };

  int fanout(int depth) const { return depth == 0 ? 2 * rank_ : 2 * rank_ - 1; }
  int child_slot(int depth, Letter last, Letter s) const;
  Letter slot_letter(int depth, Letter last, int slot) const;
  const Node* descend(std::span<const Letter> head, std::span<const Letter> tail,
                      bool& exhausted) const;

  int rank_;
  std::vector<Node> nodes_;
};

StepFunction combine(const GroupModel& model, const StepFunction& f, const StepFunction& g,
                     const std::function<double(double, double)>& op);
StepFunction operator+(const StepFunction& f, const StepFunction& g);
StepFunction operator-(const StepFunction& f, const StepFunction& g);
StepFunction operator*(const StepFunction& f, const StepFunction& g);
StepFunction operator*(double c, const StepFunction& f);

double integral(const ConformalDensity& density, const StepFunction& f);
double inner(const ConformalDensity& density, const StepFunction& f, const StepFunction& g);
double l2_norm(const ConformalDensity& density, const StepFunction& f);
// Visits every leaf with its prefix and mu-mass.
void for_each_part(const ConformalDensity& density, const StepFunction& f,
                   const std::function<void(std::span<const Letter>, double mass, double value)>& fn);

}  // namespace boundary_lab
