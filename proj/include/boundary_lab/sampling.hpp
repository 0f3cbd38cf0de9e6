#pragma once

#include <random>
#include <vector>

#include "boundary_lab/boundary.hpp"
#include "boundary_lab/density.hpp"
#include "boundary_lab/lemmas.hpp"

namespace boundary_lab {

// Uniform letters subject to reduction; the letter length is uniform in
// [min_letters, max_letters].
inline ReducedWord random_word(const GroupModel& model, std::size_t min_letters,
                               std::size_t max_letters, Rng& rng) {
  std::uniform_int_distribution<std::size_t> length_dist(min_letters, max_letters);
  std::uniform_int_distribution<int> letter_dist(0, model.alphabet_size() - 1);
  std::size_t n = length_dist(rng);
  std::vector<Letter> letters;
  while (letters.size() < n) {
    auto s = static_cast<Letter>(letter_dist(rng));
    if (!letters.empty() && !model.can_follow(letters.back(), s)) continue;
    letters.push_back(s);
  }
  return model.from_letters(letters);
}

// A mu-distributed prefix long enough to fix every quantity up to weighted
// length `reach`, closed off to an eventually periodic point.
inline BoundaryPoint sample_point(const ConformalDensity& density, double reach, Rng& rng) {
  const GroupModel& model = density.model();
  return BoundaryPoint::closing(model, density.sample_prefix(letters_for_reach(model, reach), rng));
}

// Head and period drawn uniformly; covers points that mu-sampling and
// closing() never produce (long periods, periods other than one letter).
inline BoundaryPoint random_point(const GroupModel& model, std::size_t max_head,
                                  std::size_t max_period, Rng& rng) {
  while (true) {
    ReducedWord head = random_word(model, 0, max_head, rng);
    ReducedWord period = random_word(model, 1, max_period, rng);
    if (model.inverse(period.front()) == period.back()) continue;
    if (!head.empty() && model.inverse(period.front()) == head.back()) continue;
    return BoundaryPoint(model, head, period);
  }
}

}  // namespace boundary_lab
