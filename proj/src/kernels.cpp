#include "boundary_lab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "boundary_lab/errors.hpp"
#include "boundary_lab/koopman.hpp"
#include "boundary_lab/parallel.hpp"

namespace boundary_lab {

// ---------------------------------------------------------------------------
// KernelStep

KernelStep KernelStep::build(const GroupModel& model, const RowProbe& probe,
                             std::size_t max_depth) {
  std::vector<StepFunction> rows;
  StepFunction index = StepFunction::refine(
      model,
      [&](std::span<const Letter> w) -> std::optional<double> {
        auto row = probe(w);
        if (!row) return std::nullopt;
        rows.push_back(std::move(*row));
        return static_cast<double>(rows.size() - 1);
      },
      max_depth);
  return KernelStep(std::move(index), std::move(rows));
}

KernelStep KernelStep::constant(const GroupModel& model, double value) {
  return build(model, [&](std::span<const Letter>) -> std::optional<StepFunction> {
    return StepFunction::constant(model, value);
  });
}

KernelStep KernelStep::rectangle(const GroupModel& model, const Cylinder& u, const Cylinder& v,
                                 double value) {
  StepFunction inside = StepFunction::indicator(model, v, value);
  StepFunction zero = StepFunction::constant(model, 0.0);
  std::span<const Letter> target = u.prefix.letters();
  return build(model, [&](std::span<const Letter> w) -> std::optional<StepFunction> {
    std::size_t n = common_prefix_letters(w, target);
    if (n == target.size()) return inside;
    if (n < w.size()) return zero;
    return std::nullopt;
  });
}

KernelStep KernelStep::from_left(const GroupModel& model, const StepFunction& phi) {
  return build(model, [&](std::span<const Letter> w) -> std::optional<StepFunction> {
    auto v = phi.on(w);
    if (!v) return std::nullopt;
    return StepFunction::constant(model, *v);
  });
}

double KernelStep::at(const BoundaryPoint& xi, const BoundaryPoint& eta) const {
  auto row = static_cast<std::size_t>(index_.at(xi));
  return rows_[row].at(eta);
}

std::vector<std::pair<std::vector<Letter>, const StepFunction*>> KernelStep::rows() const {
  std::vector<std::pair<std::vector<Letter>, const StepFunction*>> out;
  for (auto& [prefix, value] : index_.parts()) {
    out.emplace_back(prefix, &rows_[static_cast<std::size_t>(value)]);
  }
  return out;
}

double KernelStep::sup_abs() const {
  double best = 0.0;
  for (const auto& r : rows_) best = std::max(best, r.sup_abs());
  return best;
}

bool KernelStep::nonnegative() const {
  for (const auto& r : rows_) {
    for (const auto& [prefix, value] : r.parts()) {
      if (value < 0.0) return false;
    }
  }
  return true;
}

double KernelStep::support_reach(const GroupModel& model) const {
  double reach = 0.0;
  for (const auto& [u, row] : rows()) {
    for (const auto& [v, value] : row->parts()) {
      if (value == 0.0) continue;
      std::size_t n = common_prefix_letters(u, v);
      if (n == u.size() || n == v.size()) return std::numeric_limits<double>::infinity();
      reach = std::max(reach, model.weighted_length(std::span<const Letter>(u).first(n)));
    }
  }
  return reach;
}

StepFunction kernel_apply(const ConformalDensity& density, const KernelStep& K,
                          const StepFunction& f) {
  // T_K f is constant on each outer leaf, equal to the row integrated against f.
  std::vector<std::pair<std::vector<Letter>, double>> values;
  for (const auto& [prefix, row] : K.rows()) values.emplace_back(prefix, inner(density, *row, f));
  std::size_t next = 0;
  return StepFunction::refine(density.model(),
                              [&](std::span<const Letter> w) -> std::optional<double> {
                                const auto& [prefix, value] = values[next];
                                if (w.size() < prefix.size()) return std::nullopt;
                                ++next;
                                return value;
                              });
}

double kernel_pairing(const ConformalDensity& density, const KernelStep& K,
                      const StepFunction& phi, const StepFunction& psi) {
  return inner(density, kernel_apply(density, K, phi), psi);
}

double kernel_mass(const ConformalDensity& density, const KernelStep& K) {
  double total = 0.0;
  for (const auto& [prefix, row] : K.rows()) {
    total += density.mu_letters(prefix) * integral(density, *row);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Nets

namespace {

double word_distance(const GroupModel& model, std::span<const Letter> g, std::span<const Letter> f) {
  std::size_t n = common_prefix_letters(g, f);
  return model.weighted_length(g.subspan(n)) + model.weighted_length(f.subspan(n));
}

}  // namespace

bool shadows_cover(const GroupModel& model, const std::vector<Cylinder>& shadows) {
  std::set<std::vector<Letter>> prefixes;
  std::size_t longest = 0;
  for (const auto& c : shadows) {
    prefixes.emplace(c.prefix.letters().begin(), c.prefix.letters().end());
    longest = std::max(longest, c.prefix.size());
  }
  std::vector<Letter> w;
  auto covered = [&](auto&& self) -> bool {
    for (std::size_t n = 0; n <= w.size(); ++n) {
      if (prefixes.count(std::vector<Letter>(w.begin(), w.begin() + static_cast<long>(n)))) return true;
    }
    if (w.size() >= longest) return false;
    for (int s = 0; s < model.alphabet_size(); ++s) {
      auto letter = static_cast<Letter>(s);
      if (!w.empty() && !model.can_follow(w.back(), letter)) continue;
      w.push_back(letter);
      bool ok = self(self);
      w.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return covered(covered);
}

NetFamily build_net(const GroupModel& model, double R, double alpha, double C, double sigma0,
                    std::size_t cap) {
  std::vector<ReducedWord> candidates = model.annulus(R, alpha, cap);
  if (candidates.empty()) throw std::invalid_argument("annulus is empty; no net exists");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const ReducedWord& a, const ReducedWord& b) {
                     double da = std::abs(a.wlen() - R);
                     double db = std::abs(b.wlen() - R);
                     if (!model.length_equal(da, db)) return da < db;
                     return length_lex_less(a, b);
                   });
  NetFamily net;
  net.R = R;
  net.alpha = alpha;
  net.C = C;
  net.sigma0 = sigma0;
  for (const auto& g : candidates) {
    bool separated = std::all_of(net.members.begin(), net.members.end(), [&](const ReducedWord& f) {
      return model.length_greater(word_distance(model, g.letters(), f.letters()), C);
    });
    if (separated) net.members.push_back(g);
  }
  for (const auto& g : net.members) net.shadows.push_back(shadow(model, g, sigma0));
  if (!shadows_cover(model, net.shadows)) {
    throw std::invalid_argument("net shadows do not cover the boundary; parameters too small");
  }
  return net;
}

// ---------------------------------------------------------------------------
// S_R

namespace {

constexpr Letter kNone = 0xff;

// Index of the depth-d cylinder containing the concatenation head + tail.
std::size_t basis_index(const GroupModel& model, std::span<const Letter> head,
                        std::span<const Letter> tail, int depth) {
  std::size_t idx = 0;
  Letter last = kNone;
  for (int i = 0; i < depth; ++i) {
    auto pos = static_cast<std::size_t>(i);
    Letter s = pos < head.size() ? head[pos] : tail[pos - head.size()];
    if (i == 0) {
      idx = s;
    } else {
      Letter skip = model.inverse(last);
      idx = idx * static_cast<std::size_t>(model.alphabet_size() - 1) + (s < skip ? s : s - 1);
    }
    last = s;
  }
  return idx;
}

// Accumulates coefficient * <pi(k) 1_u, 1_v> into block[v * n + u].
void accumulate_block(const ConformalDensity& density, std::span<const Letter> k, double coefficient,
                      int depth, std::size_t n, std::vector<double>& block) {
  const GroupModel& model = density.model();
  std::vector<Letter> kinv(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) kinv[i] = model.inverse(k[k.size() - 1 - i]);
  double klen = model.weighted_length(k);
  auto d = static_cast<std::size_t>(depth);
  std::vector<Letter> w;
  auto visit = [&](auto&& self, double wlen, double common, bool matching) -> void {
    if (!(matching && w.size() <= k.size()) && w.size() >= d) {
      std::size_t j = matching ? k.size() : common_prefix_letters(w, k);
      if ((k.size() - j) + (w.size() - j) >= d) {
        std::span<const Letter> head = std::span<const Letter>(kinv).first(k.size() - j);
        std::span<const Letter> tail = std::span<const Letter>(w).subspan(j);
        std::size_t u = basis_index(model, head, tail, depth);
        std::size_t v = basis_index(model, w, {}, depth);
        double mass = density.mu_last(w.back(), wlen) *
                      std::exp(density.h() * (common - 0.5 * klen));
        block[v * n + u] += coefficient * mass;
        return;
      }
    }
    for (int s = 0; s < model.alphabet_size(); ++s) {
      auto letter = static_cast<Letter>(s);
      if (!w.empty() && !model.can_follow(w.back(), letter)) continue;
      bool still = matching && w.size() < k.size() && k[w.size()] == letter;
      w.push_back(letter);
      self(self, wlen + model.weight(letter), still ? common + model.weight(letter) : common, still);
      w.pop_back();
    }
  };
  visit(visit, 0.0, 0.0, true);
}

// sup over xi of sum_k a_k exp(h * wlen(lcp(k, xi))), words sorted lexicographically.
double sup_profile(const GroupModel& model, double h,
                   const std::vector<std::span<const Letter>>& words, const std::vector<double>& a) {
  std::vector<double> prefix(words.size() + 1, 0.0);
  for (std::size_t i = 0; i < words.size(); ++i) prefix[i + 1] = prefix[i] + a[i];
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t depth, double wlen) -> double {
    double total = prefix[hi] - prefix[lo];
    double scale = std::exp(h * wlen);
    std::size_t i = lo;
    while (i < hi && words[i].size() == depth) ++i;
    double best = -std::numeric_limits<double>::infinity();
    int present = 0;
    while (i < hi) {
      Letter s = words[i][depth];
      std::size_t j = i;
      while (j < hi && words[j][depth] == s) ++j;
      double inside = prefix[j] - prefix[i];
      best = std::max(best, (total - inside) * scale + self(self, i, j, depth + 1, wlen + model.weight(s)));
      ++present;
      i = j;
    }
    int fanout = depth == 0 ? model.alphabet_size() : model.alphabet_size() - 1;
    if (present < fanout) best = std::max(best, total * scale);
    return best;
  };
  if (words.empty()) return 0.0;
  return rec(rec, 0, words.size(), 0, 0.0);
}

struct PackedKey {
  std::uint64_t key;
  std::uint32_t pair;
  bool operator<(const PackedKey& o) const { return key < o.key || (key == o.key && pair < o.pair); }
};

std::uint64_t pack_word(std::span<const Letter> w) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    key <<= 4;
    if (i < w.size()) key |= static_cast<std::uint64_t>(w[i] + 1);
  }
  return key;
}

// Free reduction of g b h^-1 into out.
void reduce_triple(const GroupModel& model, std::span<const Letter> g, std::span<const Letter> b,
                   std::span<const Letter> h, std::vector<Letter>& out) {
  out.clear();
  auto push = [&](Letter s) {
    if (!out.empty() && out.back() == model.inverse(s)) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  };
  for (Letter s : g) push(s);
  for (Letter s : b) push(s);
  for (std::size_t i = h.size(); i-- > 0;) push(model.inverse(h[i]));
}

std::vector<ReducedWord> closed_ball(const GroupModel& model, double radius, std::size_t cap) {
  std::vector<ReducedWord> out;
  model.for_each_in_ball(radius, [&](const ReducedWord& b) { out.push_back(b); }, cap);
  return out;
}

}  // namespace

SrOperator SrOperator::build(const ConformalDensity& density, const KernelStep& K,
                             const SrParameters& params) {
  const GroupModel& model = density.model();
  SrOperator op(density, params);
  NetFamily net = build_net(model, params.R, params.alpha, params.C, params.sigma0, params.cap);
  std::vector<ReducedWord> members = net.members;
  std::sort(members.begin(), members.end(),
            [](const ReducedWord& a, const ReducedWord& b) { return length_lex_less(a, b); });
  std::size_t m = members.size();
  op.net_size_ = m;
  op.pair_count_ = m * m;

  // A_g: the part of shadow(g) not already claimed by an earlier member, so
  // that V_{g,h} = A_g x A_h under the lexicographic order on pairs.
  std::vector<std::optional<StepFunction>> claimed(m);
  std::vector<std::vector<Letter>> earlier;
  for (std::size_t i = 0; i < m; ++i) {
    Cylinder s = shadow(model, members[i], params.sigma0);
    std::vector<Letter> sp(s.prefix.letters().begin(), s.prefix.letters().end());
    bool swallowed = std::any_of(earlier.begin(), earlier.end(), [&](const std::vector<Letter>& e) {
      return e.size() <= sp.size() && common_prefix_letters(e, sp) == e.size();
    });
    if (!swallowed) {
      std::vector<std::vector<Letter>> inside;
      for (const auto& e : earlier) {
        if (common_prefix_letters(e, sp) == sp.size()) inside.push_back(e);
      }
      claimed[i] = StepFunction::refine(model, [&](std::span<const Letter> w) -> std::optional<double> {
        std::size_t n = common_prefix_letters(w, sp);
        if (n < w.size() && n < sp.size()) return 0.0;
        if (n < sp.size()) return std::nullopt;
        bool split = false;
        for (const auto& e : inside) {
          std::size_t c = common_prefix_letters(w, e);
          if (c == e.size()) return 0.0;
          if (c == w.size()) split = true;
        }
        if (split) return std::nullopt;
        return 1.0;
      });
    }
    earlier.push_back(sp);
  }
  std::vector<std::optional<StepFunction>> applied(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (claimed[i]) applied[i] = kernel_apply(density, K, *claimed[i]);
  }

  std::vector<ReducedWord> bball = closed_ball(model, params.tau_prime, params.cap);
  bool packable = model.alphabet_size() <= 15 &&
                  2 * static_cast<double>(m ? members.back().size() : 0) +
                          std::floor(params.tau_prime / model.min_weight() + 1e-9) <= 16;
  if (!packable) {
    throw std::invalid_argument("S_R structural check supports words of at most 16 letters over 15 letters");
  }

  // One chunk per block of g rows; results are merged in chunk order.
  constexpr std::size_t kRows = 8;
  std::size_t chunks = chunk_count(m, kRows);
  struct Partial {
    std::vector<PackedKey> keys;
    std::vector<Letter> letters;
    std::vector<std::uint32_t> lengths;
    std::vector<double> weights;
    std::size_t empty_u = 0;
    std::size_t min_u = std::numeric_limits<std::size_t>::max();
    std::size_t max_u = 0;
    std::size_t weighted_pairs = 0;
  };
  std::vector<Partial> partials(chunks);
  for_each_chunk(m, kRows, params.threads, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    Partial& part = partials[c];
    std::vector<Letter> k;
    std::vector<std::vector<Letter>> ks;
    for (std::size_t gi = lo; gi < hi; ++gi) {
      const ReducedWord& g = members[gi];
      for (std::size_t hj = 0; hj < m; ++hj) {
        const ReducedWord& h = members[hj];
        auto pair_id = static_cast<std::uint32_t>(gi * m + hj);
        ks.clear();
        double floor_len = g.wlen() + h.wlen() - 3.0 * params.tau_prime;
        for (const auto& b : bball) {
          reduce_triple(model, g.letters(), b.letters(), h.letters(), k);
          if (!model.length_greater(model.weighted_length(k), floor_len)) continue;
          ks.push_back(k);
          part.keys.push_back({pack_word(k), pair_id});
        }
        part.min_u = std::min(part.min_u, ks.size());
        part.max_u = std::max(part.max_u, ks.size());
        if (ks.empty()) {
          ++part.empty_u;
          continue;
        }
        if (!claimed[gi] || !applied[hj]) continue;
        double mass = inner(density, *applied[hj], *claimed[gi]);
        if (mass == 0.0) continue;
        ++part.weighted_pairs;
        double w = mass / static_cast<double>(ks.size());
        for (const auto& word : ks) {
          ReducedWord rw = model.from_letters(word);
          part.letters.insert(part.letters.end(), word.begin(), word.end());
          part.lengths.push_back(static_cast<std::uint32_t>(word.size()));
          part.weights.push_back(w / p1_norm(density, rw));
        }
      }
    }
  });

  std::vector<PackedKey> keys;
  op.min_u_ = std::numeric_limits<std::size_t>::max();
  op.term_offsets_.push_back(0);
  for (auto& part : partials) {
    keys.insert(keys.end(), part.keys.begin(), part.keys.end());
    part.keys = {};
    op.empty_u_ += part.empty_u;
    op.min_u_ = std::min(op.min_u_, part.min_u);
    op.max_u_ = std::max(op.max_u_, part.max_u);
    op.weighted_pairs_ += part.weighted_pairs;
    op.term_letters_.insert(op.term_letters_.end(), part.letters.begin(), part.letters.end());
    for (auto len : part.lengths) op.term_offsets_.push_back(op.term_offsets_.back() + len);
    op.weights_.insert(op.weights_.end(), part.weights.begin(), part.weights.end());
  }
  if (m == 0) op.min_u_ = 0;

  // Exhaustive disjointness: equal keys from different pairs.
  std::sort(keys.begin(), keys.end());
  std::vector<bool> overlapping(op.pair_count_, false);
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j].key == keys[i].key) ++j;
    if (j - i > 1) {
      ++op.shared_elements_;
      for (std::size_t t = i; t < j; ++t) overlapping[keys[t].pair] = true;
      if (op.overlap_witness_.empty()) {
        auto describe = [&](std::uint32_t pair) {
          return "(" + model.format(members[pair / m]) + "," + model.format(members[pair % m]) + ")";
        };
        std::vector<Letter> word;
        for (int s = 15; s >= 0; --s) {
          auto nib = static_cast<int>((keys[i].key >> (4 * s)) & 0xf);
          if (nib) word.push_back(static_cast<Letter>(nib - 1));
        }
        op.overlap_witness_ = "k=" + model.format(word) + " in U" + describe(keys[i].pair) +
                              " and U" + describe(keys[i + 1].pair);
      }
    }
    i = j;
  }
  op.overlapping_pairs_ = static_cast<std::size_t>(std::count(overlapping.begin(), overlapping.end(), true));
  keys = {};

  if (op.empty_u_ > 0) {
    throw InvariantViolation("U_{g,h} is empty for " + std::to_string(op.empty_u_) +
                             " pairs; tau' is too small");
  }

  // Sup norms of S_R 1 and S_R^* 1.
  std::size_t terms = op.weights_.size();
  std::vector<std::vector<Letter>> inverted(terms);
  std::vector<std::span<const Letter>> words(terms);
  std::vector<double> a(terms);
  for (std::size_t t = 0; t < terms; ++t) {
    words[t] = std::span<const Letter>(op.term_letters_)
                   .subspan(op.term_offsets_[t], op.term_offsets_[t + 1] - op.term_offsets_[t]);
    a[t] = op.weights_[t] * std::exp(-0.5 * density.h() * model.weighted_length(words[t]));
    inverted[t].resize(words[t].size());
    for (std::size_t i = 0; i < words[t].size(); ++i) {
      inverted[t][i] = model.inverse(words[t][words[t].size() - 1 - i]);
    }
  }
  auto sorted_sup = [&](const std::vector<std::span<const Letter>>& ws) {
    std::vector<std::size_t> order(terms);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return std::lexicographical_compare(ws[x].begin(), ws[x].end(), ws[y].begin(), ws[y].end());
    });
    std::vector<std::span<const Letter>> sw(terms);
    std::vector<double> sa(terms);
    for (std::size_t t = 0; t < terms; ++t) {
      sw[t] = ws[order[t]];
      sa[t] = a[order[t]];
    }
    return sup_profile(model, density.h(), sw, sa);
  };
  op.sup_s1_ = sorted_sup(words);
  std::vector<std::span<const Letter>> inv_words(terms);
  for (std::size_t t = 0; t < terms; ++t) inv_words[t] = inverted[t];
  op.sup_sstar1_ = sorted_sup(inv_words);

  // Tabulate <S_R 1_u, 1_v> on the depth-d basis.
  int depth = params.basis_depth;
  model.for_each_of_letter_length(static_cast<std::size_t>(depth), [&](const ReducedWord& w) {
    op.basis_.emplace_back(w.letters().begin(), w.letters().end());
    op.basis_mass_.push_back(density.mu(Cylinder{w}));
  });
  std::size_t n = op.basis_.size();
  constexpr std::size_t kTerms = 4096;
  std::vector<std::vector<double>> blocks(chunk_count(terms, kTerms));
  for_each_chunk(terms, kTerms, params.threads, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    blocks[c].assign(n * n, 0.0);
    for (std::size_t t = lo; t < hi; ++t) {
      accumulate_block(density, words[t], op.weights_[t], depth, n, blocks[c]);
    }
  });
  op.block_.assign(n * n, 0.0);
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < n * n; ++i) op.block_[i] += b[i];
  }
  op.pairing_one_ = std::accumulate(op.block_.begin(), op.block_.end(), 0.0);
  return op;
}

double SrOperator::pairing(const StepFunction& phi, const StepFunction& psi) const {
  std::size_t n = basis_.size();
  std::vector<double> pv(n);
  std::vector<double> sv(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = phi.on(basis_[i]);
    auto b = psi.on(basis_[i]);
    if (!a || !b) throw std::invalid_argument("test function is finer than the S_R basis");
    pv[i] = *a;
    sv[i] = *b;
  }
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) total += sv[v] * block_[v * n + u] * pv[u];
  }
  return total;
}

double SrOperator::pairing_exact(const StepFunction& phi, const StepFunction& psi) const {
  const GroupModel& model = density_->model();
  double total = 0.0;
  for (std::size_t t = 0; t < weights_.size(); ++t) {
    std::span<const Letter> k = std::span<const Letter>(term_letters_)
                                    .subspan(term_offsets_[t], term_offsets_[t + 1] - term_offsets_[t]);
    total += weights_[t] * koopman_pairing(*density_, model.from_letters(k), phi, psi);
  }
  return total;
}

double SrOperator::monte_carlo_norm(std::size_t trials, std::uint64_t seed) const {
  std::size_t n = basis_.size();
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < trials; ++t) {
    double norm = 0.0;
    for (auto& xi : x) {
      xi = gauss(rng);
      norm += xi * xi;
    }
    norm = std::sqrt(norm);
    double out = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double y = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        y += block_[v * n + u] / std::sqrt(basis_mass_[u] * basis_mass_[v]) * x[u] / norm;
      }
      out += y * y;
    }
    best = std::max(best, std::sqrt(out));
  }
  return best;
}

SrSweep sr_sweep(const ConformalDensity& density, const KernelStep& K, const SrParameters& base,
                 const std::vector<double>& radii, std::size_t mc_trials, std::uint64_t seed) {
  const GroupModel& model = density.model();
  SrSweep sweep{
      ExperimentReport("kernel-convergence",
                       {"R", "net_size", "weighted_pairs", "terms", "pairing_one", "error_one",
                        "error_a_b", "error_a_a"}),
      ExperimentReport("sr-norm",
                       {"R", "sup_s1", "sup_sstar1", "interpolation_bound", "mc_lower", "min_u",
                        "max_u", "empty_u", "shared_elements", "overlapping_pairs"}),
  };
  StepFunction one = StepFunction::constant(model, 1.0);
  StepFunction ind_a = StepFunction::indicator(model, Cylinder{model.word("a")});
  StepFunction ind_b = StepFunction::indicator(model, Cylinder{model.word("b")});
  double target_one = kernel_pairing(density, K, one, one);
  double target_ab = kernel_pairing(density, K, ind_a, ind_b);
  double target_aa = kernel_pairing(density, K, ind_a, ind_a);
  for (auto* r : {&sweep.convergence, &sweep.norms}) {
    r->parameters["alpha"] = base.alpha;
    r->parameters["C"] = base.C;
    r->parameters["tau_prime"] = base.tau_prime;
    r->parameters["sigma0"] = base.sigma0;
    r->parameters["basis_depth"] = base.basis_depth;
    r->parameters["radii"] = radii;
  }
  sweep.norms.parameters["mc_trials"] = static_cast<std::int64_t>(mc_trials);
  sweep.convergence.summary["target_one"] = target_one;
  sweep.convergence.summary["target_a_b"] = target_ab;
  sweep.convergence.summary["target_a_a"] = target_aa;
  double max_sup = 0.0;
  bool all_disjoint = true;
  std::string witness;
  for (double R : radii) {
    SrParameters p = base;
    p.R = R;
    SrOperator op = SrOperator::build(density, K, p);
    sweep.convergence.add_row(
        {R, static_cast<std::int64_t>(op.net_size()), static_cast<std::int64_t>(op.weighted_pairs()),
         static_cast<std::int64_t>(op.term_count()), op.pairing_one(),
         std::abs(op.pairing_one() - target_one), std::abs(op.pairing(ind_a, ind_b) - target_ab),
         std::abs(op.pairing(ind_a, ind_a) - target_aa)});
    double bound = std::sqrt(op.sup_s1() * op.sup_sstar1());
    sweep.norms.add_row({R, op.sup_s1(), op.sup_sstar1(), bound, op.monte_carlo_norm(mc_trials, seed),
                         static_cast<std::int64_t>(op.min_u_size()),
                         static_cast<std::int64_t>(op.max_u_size()),
                         static_cast<std::int64_t>(op.empty_u_count()),
                         static_cast<std::int64_t>(op.shared_elements()),
                         static_cast<std::int64_t>(op.overlapping_pairs())});
    max_sup = std::max({max_sup, op.sup_s1(), op.sup_sstar1()});
    if (!op.u_sets_disjoint()) {
      all_disjoint = false;
      if (witness.empty()) witness = op.overlap_witness();
    }
  }
  sweep.norms.summary["max_sup"] = max_sup;
  sweep.norms.summary["u_sets_disjoint"] = all_disjoint;
  sweep.norms.summary["overlap_witness"] = witness;
  return sweep;
}

// ---------------------------------------------------------------------------
// Projection kernels

KernelStep projection_kernel(const ConformalDensity& density, const StepFunction& E, double rho) {
  const GroupModel& model = density.model();
  if (!(rho > 0.0)) throw std::invalid_argument("radius must be positive");
  if (rho > 1.0) {
    return KernelStep::build(model, [&](std::span<const Letter> w) -> std::optional<StepFunction> {
      auto e = E.on(w);
      if (!e) return std::nullopt;
      return StepFunction::constant(model, *e);
    });
  }
  double threshold = -std::log(rho) / density.epsilon();
  return KernelStep::build(model, [&](std::span<const Letter> w) -> std::optional<StepFunction> {
    // The ball around any point of [w] is the cylinder on its shortest prefix
    // longer than the threshold.
    double len = 0.0;
    std::size_t m = 0;
    while (m < w.size() && !model.length_greater(len, threshold)) len += model.weight(w[m++]);
    if (!model.length_greater(len, threshold)) return std::nullopt;
    auto e = E.on(w);
    if (!e) return std::nullopt;
    ReducedWord centre = model.from_letters(w.first(m));
    double mass = density.mu(Cylinder{centre});
    return StepFunction::indicator(model, Cylinder{centre}, *e / mass);
  });
}

double kernel_row_sup(const ConformalDensity& density, const KernelStep& K) {
  double best = 0.0;
  for (const auto& [prefix, row] : K.rows()) {
    best = std::max(best, integral(density, row->map([](double x) { return std::abs(x); })));
  }
  return best;
}

double kernel_column_sup(const ConformalDensity& density, const KernelStep& K) {
  StepFunction column = StepFunction::constant(density.model(), 0.0);
  for (const auto& [prefix, row] : K.rows()) {
    double mass = density.mu_letters(prefix);
    column = column + mass * row->map([](double x) { return std::abs(x); });
  }
  return column.sup_abs();
}

ExperimentReport projection_approx_report(const ConformalDensity& density, const StepFunction& E,
                                          const std::vector<StepFunction>& tests,
                                          const std::vector<double>& rho_grid) {
  ExperimentReport report("projection", {"rho", "max_error", "row_sup", "column_sup", "schur_bound"});
  report.parameters["rho_grid"] = rho_grid;
  report.parameters["test_count"] = static_cast<std::int64_t>(tests.size());
  double worst_schur = 0.0;
  for (double rho : rho_grid) {
    KernelStep K = projection_kernel(density, E, rho);
    double worst = 0.0;
    for (const auto& phi : tests) {
      StepFunction diff = kernel_apply(density, K, phi) - E * phi;
      worst = std::max(worst, l2_norm(density, diff));
    }
    double row = kernel_row_sup(density, K);
    double column = kernel_column_sup(density, K);
    double schur = std::sqrt(row * column);
    worst_schur = std::max(worst_schur, schur);
    report.add_row({rho, worst, row, column, schur});
  }
  report.summary["max_schur_bound"] = worst_schur;
  return report;
}

}  // namespace boundary_lab
