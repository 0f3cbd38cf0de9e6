#include "boundary_lab/words.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "boundary_lab/errors.hpp"

namespace boundary_lab {

bool length_lex_less(std::span<const Letter> a, std::span<const Letter> b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool length_lex_less(const ReducedWord& a, const ReducedWord& b) {
  return length_lex_less(a.letters(), b.letters());
}

std::size_t common_prefix_letters(std::span<const Letter> a, std::span<const Letter> b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

GroupModel::GroupModel(int rank, std::vector<double> generator_weights, double tolerance)
    : rank_(rank), tolerance_(tolerance) {
  if (rank < 2) throw std::invalid_argument("rank must be at least 2");
  if (rank > 26) throw std::invalid_argument("rank must be at most 26");
  if (generator_weights.size() != static_cast<std::size_t>(rank)) {
    throw std::invalid_argument("expected one weight per generator");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  for (double w : generator_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("generator weights must be positive and finite");
    }
  }
  weights_ = generator_weights;
  weights_.insert(weights_.end(), generator_weights.begin(), generator_weights.end());
  min_weight_ = *std::min_element(weights_.begin(), weights_.end());
  max_weight_ = *std::max_element(weights_.begin(), weights_.end());
}

GroupModel GroupModel::uniform(int rank, double weight) {
  return GroupModel(rank, std::vector<double>(static_cast<std::size_t>(rank), weight));
}

char GroupModel::letter_char(Letter s) const {
  if (s < rank_) return static_cast<char>('a' + s);
  return static_cast<char>('A' + (s - rank_));
}

Letter GroupModel::parse_letter(char c) const {
  if (c >= 'a' && c < 'a' + rank_) return static_cast<Letter>(c - 'a');
  if (c >= 'A' && c < 'A' + rank_) return static_cast<Letter>(c - 'A' + rank_);
  throw std::invalid_argument(std::string("letter outside the alphabet: ") + c);
}

ReducedWord GroupModel::word(std::string_view text) const {
  if (text == "e") return identity();
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char c : text) letters.push_back(parse_letter(c));
  return from_letters(letters);
}

ReducedWord GroupModel::from_letters(std::span<const Letter> letters) const {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter s : letters) {
    if (s >= alphabet_size()) throw std::invalid_argument("letter index out of range");
    if (!out.empty() && out.back() == inverse(s)) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  double len = weighted_length(out);
  return ReducedWord(std::move(out), len);
}

double GroupModel::weighted_length(std::span<const Letter> letters) const {
  double total = 0.0;
  for (Letter s : letters) total += weights_[s];
  return total;
}

std::string GroupModel::format(std::span<const Letter> letters) const {
  if (letters.empty()) return "e";
  std::string out;
  out.reserve(letters.size());
  for (Letter s : letters) out.push_back(letter_char(s));
  return out;
}

std::string GroupModel::format(const ReducedWord& w) const { return format(w.letters()); }

ReducedWord GroupModel::multiply(const ReducedWord& u, const ReducedWord& v) const {
  std::size_t cancel = 0;
  while (cancel < u.size() && cancel < v.size() &&
         u[u.size() - 1 - cancel] == inverse(v[cancel])) {
    ++cancel;
  }
  std::vector<Letter> out(u.letters_.begin(), u.letters_.end() - static_cast<long>(cancel));
  out.insert(out.end(), v.letters_.begin() + static_cast<long>(cancel), v.letters_.end());
  double len = weighted_length(out);
  return ReducedWord(std::move(out), len);
}

ReducedWord GroupModel::invert(const ReducedWord& w) const {
  std::vector<Letter> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = inverse(w[w.size() - 1 - i]);
  return ReducedWord(std::move(out), w.wlen());
}

ReducedWord GroupModel::prefix(const ReducedWord& w, std::size_t n) const {
  n = std::min(n, w.size());
  std::vector<Letter> out(w.letters_.begin(), w.letters_.begin() + static_cast<long>(n));
  double len = weighted_length(out);
  return ReducedWord(std::move(out), len);
}

ReducedWord GroupModel::suffix_from(const ReducedWord& w, std::size_t start) const {
  start = std::min(start, w.size());
  std::vector<Letter> out(w.letters_.begin() + static_cast<long>(start), w.letters_.end());
  double len = weighted_length(out);
  return ReducedWord(std::move(out), len);
}

ReducedWord GroupModel::extend(const ReducedWord& w, Letter s) const {
  if (!w.empty() && !can_follow(w.back(), s)) {
    throw std::invalid_argument("extension letter cancels the last letter");
  }
  std::vector<Letter> out = w.letters_;
  out.push_back(s);
  return ReducedWord(std::move(out), w.wlen() + weights_[s]);
}

double GroupModel::distance(const ReducedWord& g, const ReducedWord& h) const {
  return multiply(invert(g), h).wlen();
}

double GroupModel::gromov_product(const ReducedWord& x, const ReducedWord& y,
                                  const ReducedWord& o) const {
  ReducedWord oi = invert(o);
  ReducedWord a = multiply(oi, x);
  ReducedWord b = multiply(oi, y);
  std::size_t n = common_prefix_letters(a.letters(), b.letters());
  return weighted_length(a.letters().first(n));
}

GroupModel GroupModel::scaled(double factor) const {
  std::vector<double> w(generator_weights().begin(), generator_weights().end());
  for (double& x : w) x *= factor;
  return GroupModel(rank_, std::move(w), tolerance_);
}

namespace {

// Depth-first walk over words with exactly `target` letters whose weighted
// length stays below `upper`, in lexicographic order.
void walk_exact_length(const GroupModel& model, std::size_t target, double upper,
                       std::vector<Letter>& buf, double len,
                       const std::function<void(std::span<const Letter>, double)>& leaf) {
  if (buf.size() == target) {
    leaf(buf, len);
    return;
  }
  double remaining = static_cast<double>(target - buf.size() - 1) * model.min_weight();
  for (int s = 0; s < model.alphabet_size(); ++s) {
    Letter letter = static_cast<Letter>(s);
    if (!buf.empty() && !model.can_follow(buf.back(), letter)) continue;
    double next = len + model.weight(letter);
    if (!model.length_less(next + remaining, upper)) continue;
    buf.push_back(letter);
    walk_exact_length(model, target, upper, buf, next, leaf);
    buf.pop_back();
  }
}

}  // namespace

void GroupModel::for_each_in_annulus(double R, double alpha,
                                     const std::function<void(const ReducedWord&)>& visit,
                                     std::size_t cap) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("annulus width alpha must be positive");
  double lower = R - alpha;
  double upper = R + alpha;
  std::size_t produced = 0;
  ReducedWord current;
  std::vector<Letter> buf;
  auto max_letters = static_cast<std::size_t>(std::floor(upper / min_weight_)) + 1;
  for (std::size_t n = 0; n <= max_letters; ++n) {
    if (!length_less(static_cast<double>(n) * min_weight_, upper)) break;
    walk_exact_length(*this, n, upper, buf, 0.0,
                      [&](std::span<const Letter> letters, double len) {
                        if (!length_greater(len, lower)) return;
                        if (++produced > cap) {
                          throw CapExceeded("annulus enumeration exceeded cap of " +
                                            std::to_string(cap) + " words");
                        }
                        current.letters_.assign(letters.begin(), letters.end());
                        current.wlen_ = len;
                        visit(current);
                      });
  }
}

std::vector<ReducedWord> GroupModel::annulus(double R, double alpha, std::size_t cap) const {
  std::vector<ReducedWord> out;
  for_each_in_annulus(R, alpha, [&](const ReducedWord& w) { out.push_back(w); }, cap);
  return out;
}

void GroupModel::for_each_of_letter_length(
    std::size_t n, const std::function<void(const ReducedWord&)>& visit) const {
  ReducedWord current;
  std::vector<Letter> buf;
  walk_exact_length(*this, n, std::numeric_limits<double>::infinity(), buf, 0.0,
                    [&](std::span<const Letter> letters, double len) {
                      current.letters_.assign(letters.begin(), letters.end());
                      current.wlen_ = len;
                      visit(current);
                    });
}

void GroupModel::for_each_in_ball(double radius,
                                  const std::function<void(const ReducedWord&)>& visit,
                                  std::size_t cap) const {
  // A ball is the annulus around radius/2 with half-width just above radius/2,
  // widened by twice the tolerance so that wlen == radius is included.
  double half = radius / 2.0;
  double width = half + 2.0 * tolerance_;
  if (radius < 0.0) return;
  for_each_in_annulus(half, width, visit, cap);
}

double estimate_delta(const GroupModel& model, std::size_t sample_size, std::uint64_t seed,
                      std::size_t max_letters) {
  if (sample_size == 0) throw std::invalid_argument("sample_size must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> length_dist(0, max_letters);
  std::uniform_int_distribution<int> letter_dist(0, model.alphabet_size() - 1);
  auto random_word = [&]() {
    std::size_t n = length_dist(rng);
    std::vector<Letter> letters;
    while (letters.size() < n) {
      auto s = static_cast<Letter>(letter_dist(rng));
      if (!letters.empty() && !model.can_follow(letters.back(), s)) continue;
      letters.push_back(s);
    }
    return model.from_letters(letters);
  };
  auto product = [&](const ReducedWord& x, const ReducedWord& y, const ReducedWord& o) {
    return 0.5 * (model.distance(o, x) + model.distance(o, y) - model.distance(x, y));
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < sample_size; ++i) {
    ReducedWord x = random_word();
    ReducedWord y = random_word();
    ReducedWord z = random_word();
    ReducedWord o = random_word();
    double defect = std::min(product(x, y, o), product(y, z, o)) - product(x, z, o);
    worst = std::max(worst, defect);
  }
  return worst;
}

}  // namespace boundary_lab
