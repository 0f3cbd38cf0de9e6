#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace boundary_lab {

// Letters 0..k-1 are the generators s_1..s_k, letters k..2k-1 their inverses.
using Letter = std::uint8_t;

class GroupModel;

class ReducedWord {
 public:
  ReducedWord() = default;

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  double wlen() const { return wlen_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.letters_ == b.letters_;
  }

 private:
  friend class GroupModel;
  ReducedWord(std::vector<Letter> letters, double wlen)
      : letters_(std::move(letters)), wlen_(wlen) {}

  std::vector<Letter> letters_;
  double wlen_ = 0.0;
};

// Shorter words first, ties broken lexicographically by letter index.
bool length_lex_less(const ReducedWord& a, const ReducedWord& b);
bool length_lex_less(std::span<const Letter> a, std::span<const Letter> b);

// Number of leading letters shared by two letter sequences.
std::size_t common_prefix_letters(std::span<const Letter> a, std::span<const Letter> b);

class GroupModel {
 public:
  // generator_weights has one entry per generator; inverses share it.
  GroupModel(int rank, std::vector<double> generator_weights, double tolerance = 1e-9);
  static GroupModel uniform(int rank, double weight = 1.0);

  int rank() const { return rank_; }
  int alphabet_size() const { return 2 * rank_; }
  Letter inverse(Letter s) const { return static_cast<Letter>((s + rank_) % (2 * rank_)); }
  double weight(Letter s) const { return weights_[s]; }
  std::span<const double> generator_weights() const {
    return std::span<const double>(weights_).first(static_cast<std::size_t>(rank_));
  }
  double min_weight() const { return min_weight_; }
  double max_weight() const { return max_weight_; }
  double tolerance() const { return tolerance_; }

  // Length comparisons with the configured absolute tolerance.
  bool length_greater(double a, double b) const { return a > b + tolerance_; }
  bool length_less(double a, double b) const { return a < b - tolerance_; }
  bool length_equal(double a, double b) const {
    return !length_greater(a, b) && !length_less(a, b);
  }

  char letter_char(Letter s) const;
  Letter parse_letter(char c) const;

  ReducedWord identity() const { return {}; }
  // Parses lowercase generators / uppercase inverses and freely reduces.
  // "e" and "" denote the identity.
  ReducedWord word(std::string_view text) const;
  ReducedWord from_letters(std::span<const Letter> letters) const;
  std::string format(const ReducedWord& w) const;
  std::string format(std::span<const Letter> letters) const;
  double weighted_length(std::span<const Letter> letters) const;

  ReducedWord multiply(const ReducedWord& u, const ReducedWord& v) const;
  ReducedWord invert(const ReducedWord& w) const;
  ReducedWord prefix(const ReducedWord& w, std::size_t n) const;
  ReducedWord suffix_from(const ReducedWord& w, std::size_t start) const;
  // Appends a letter that must not cancel the last one.
  ReducedWord extend(const ReducedWord& w, Letter s) const;
  bool can_follow(Letter prev, Letter next) const { return next != inverse(prev); }

  double distance(const ReducedWord& g, const ReducedWord& h) const;
  double gromov_product(const ReducedWord& x, const ReducedWord& y, const ReducedWord& o) const;

  GroupModel scaled(double factor) const;

  // Visits the reduced words with R - alpha < wlen < R + alpha in length-lex
  // order. The visitor receives a buffer that is reused between calls.
  // Throws CapExceeded once more than `cap` words have been produced.
  void for_each_in_annulus(double R, double alpha,
                           const std::function<void(const ReducedWord&)>& visit,
                           std::size_t cap) const;
  std::vector<ReducedWord> annulus(double R, double alpha, std::size_t cap) const;
  // All reduced words with exactly n letters, in lexicographic order.
  void for_each_of_letter_length(std::size_t n,
                                 const std::function<void(const ReducedWord&)>& visit) const;
  // All reduced words with wlen <= radius (tolerance-inclusive), length-lex.
  void for_each_in_ball(double radius, const std::function<void(const ReducedWord&)>& visit,
                        std::size_t cap) const;

 private:
  int rank_;
  std::vector<double> weights_;
  double min_weight_;
  double max_weight_;
  double tolerance_;
};

// Empirical four-point defect over random quadruples of reduced words with
// at most max_letters letters, computed from distances only.
double estimate_delta(const GroupModel& model, std::size_t sample_size, std::uint64_t seed,
                      std::size_t max_letters = 8);

}  // namespace boundary_lab
