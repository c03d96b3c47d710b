#pragma once

// Noncommutative graded algebras presented by generators and swap rules,
// normal ordering by rewriting, and their 1- to 3-fold tensor powers.
//
// An element is a finite sum of coeff * lambda^p * M^q * (w_1 (x) ... (x) w_n)
// with every slot word w_s canonical (letters non-decreasing). Terms whose
// lambda power exceeds N, or whose slot degree exceeds D, are dropped and
// counted. Every rewrite rule keeps or raises both the lambda power and the
// slot degree, so the retained terms are exact.

#include "kgal/scalars.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kgal {

using Letter = std::uint8_t;
using Word = std::string;  // one char per letter

/// Truncation policy: maximal lambda power N and maximal per-slot degree D.
struct Policy {
  int N = 2;
  int D = 6;
  friend bool operator==(const Policy&, const Policy&) = default;
};

/// Replacement for an out-of-order adjacent pair: coeff * lambda^lambda * word.
struct Correction {
  Word word;
  int lambda = 0;
  ExactComplex coeff;
};

template <class A>
concept AlgebraTraits = requires(Letter x, Letter y) {
  { A::kLetters } -> std::convertible_to<int>;
  { A::degree(x) } -> std::convertible_to<int>;
  { A::corrections(x, y) } -> std::convertible_to<const std::vector<Correction>&>;
  { A::name(x) } -> std::convertible_to<std::string>;
  { A::kDegreeDropsSound } -> std::convertible_to<bool>;
};

// ---------------------------------------------------------------------------
// Coordinate algebra of the k-Galilei group.
// Canonical letter order: a^1..a^3 < v^1..v^3 < R^1_1..R^3_3 < tau.

struct GroupAlgebra {
  static constexpr int kLetters = 16;
  static constexpr bool kDegreeDropsSound = true;

  static constexpr Letter a(int i) { return static_cast<Letter>(i - 1); }
  static constexpr Letter v(int i) { return static_cast<Letter>(3 + i - 1); }
  static constexpr Letter R(int i, int j) { return static_cast<Letter>(6 + 3 * (i - 1) + (j - 1)); }
  static constexpr Letter tau() { return 15; }

  static constexpr bool is_trans(Letter x) { return x < 3; }
  static constexpr bool is_boost(Letter x) { return x >= 3 && x < 6; }
  static constexpr bool is_rot(Letter x) { return x >= 6 && x < 15; }
  static constexpr bool is_time(Letter x) { return x == 15; }
  static constexpr int index(Letter x) { return is_trans(x) ? x + 1 : x - 2; }  // a, v only
  static constexpr int rot_row(Letter x) { return (x - 6) / 3 + 1; }
  static constexpr int rot_col(Letter x) { return (x - 6) % 3 + 1; }

  /// tau carries degree 0: every rewrite preserves the number of other letters.
  static constexpr int degree(Letter x) { return is_time(x) ? 0 : 1; }

  static std::string name(Letter x) {
    if (is_trans(x)) return "a[" + std::to_string(x + 1) + "]";
    if (is_boost(x)) return "v[" + std::to_string(x - 2) + "]";
    if (is_rot(x)) return "R[" + std::to_string(rot_row(x)) + "," + std::to_string(rot_col(x)) + "]";
    return "tau";
  }

  /// Corrections c with x y = y x + sum c, for x > y.
  static const std::vector<Correction>& corrections(Letter x, Letter y) {
    static const auto table = build();
    return table[x * kLetters + y];
  }

 private:
  static Word w(std::initializer_list<Letter> ls) {
    std::vector<Letter> v(ls);
    std::sort(v.begin(), v.end());
    return Word(v.begin(), v.end());
  }

  static std::vector<std::vector<Correction>> build() {
    std::vector<std::vector<Correction>> t(kLetters * kLetters);
    const ExactComplex I = ExactComplex::i();
    for (int i = 1; i <= 3; ++i) {
      // tau a^i = a^i tau + (i/k) a^i ; tau v^i = v^i tau + (i/k) v^i
      t[tau() * kLetters + a(i)].push_back({w({a(i)}), 1, I});
      t[tau() * kLetters + v(i)].push_back({w({v(i)}), 1, I});
      for (int j = 1; j <= 3; ++j) {
        // v^i a^j = a^j v^i + (i/k)(1/2 delta_ij v^m v^m - v^i v^j)
        auto& va = t[v(i) * kLetters + a(j)];
        if (i == j)
          for (int m = 1; m <= 3; ++m) va.push_back({w({v(m), v(m)}), 1, I * ExactComplex(rational(1, 2))});
        va.push_back({w({v(i), v(j)}), 1, -I});
        // R^i_j a^k = a^k R^i_j + (i/k)(delta_ik v^m R^m_j - v^i R^k_j)
        for (int k = 1; k <= 3; ++k) {
          auto& ra = t[R(i, j) * kLetters + a(k)];
          if (i == k)
            for (int m = 1; m <= 3; ++m) ra.push_back({w({v(m), R(m, j)}), 1, I});
          ra.push_back({w({v(i), R(k, j)}), 1, -I});
        }
      }
    }
    return t;
  }
};

enum class RewriteStrategy { LeftInnermost, RightInnermost };

struct NFTerm {
  Word word;
  int lambda = 0;
  ExactComplex coeff;
};

struct RewriteStats {
  int max_steps = 0;  // longest rewrite chain followed by a single monomial
};

namespace detail {

template <AlgebraTraits Alg>
std::vector<NFTerm> rewrite(const Word& w, RewriteStrategy strategy, int depth, RewriteStats* stats,
                            std::unordered_map<Word, std::vector<NFTerm>>* memo) {
  if (memo) {
    auto it = memo->find(w);
    if (it != memo->end()) return it->second;
  }
  int pos = -1;
  if (strategy == RewriteStrategy::LeftInnermost) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (static_cast<Letter>(w[i]) > static_cast<Letter>(w[i + 1])) {
        pos = static_cast<int>(i);
        break;
      }
  } else {
    for (std::size_t i = w.size(); i-- > 1;)
      if (static_cast<Letter>(w[i - 1]) > static_cast<Letter>(w[i])) {
        pos = static_cast<int>(i - 1);
        break;
      }
  }
  if (stats) stats->max_steps = std::max(stats->max_steps, depth);
  std::vector<NFTerm> result;
  if (pos < 0) {
    result.push_back({w, 0, ExactComplex(1)});
  } else {
    std::map<std::pair<Word, int>, ExactComplex> acc;
    auto absorb = [&](const std::vector<NFTerm>& part, int lam, const ExactComplex& c) {
      for (const auto& t : part) {
        auto [it, ins] = acc.try_emplace({t.word, t.lambda + lam}, ExactComplex());
        it->second += c * t.coeff;
      }
    };
    Letter x = static_cast<Letter>(w[pos]);
    Letter y = static_cast<Letter>(w[pos + 1]);
    Word swapped = w;
    std::swap(swapped[pos], swapped[pos + 1]);
    absorb(rewrite<Alg>(swapped, strategy, depth + 1, stats, memo), 0, ExactComplex(1));
    for (const auto& corr : Alg::corrections(x, y)) {
      Word nw = w.substr(0, pos) + corr.word + w.substr(pos + 2);
      absorb(rewrite<Alg>(nw, strategy, depth + 1, stats, memo), corr.lambda, corr.coeff);
    }
    for (auto& [k, c] : acc)
      if (!c.is_zero()) result.push_back({k.first, k.second, std::move(c)});
  }
  if (memo) memo->emplace(w, result);
  return result;
}

}  // namespace detail

template <AlgebraTraits Alg>
bool is_canonical(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (static_cast<Letter>(w[i]) > static_cast<Letter>(w[i + 1])) return false;
  return true;
}

template <AlgebraTraits Alg>
int word_degree(const Word& w) {
  int d = 0;
  for (char c : w) d += Alg::degree(static_cast<Letter>(c));
  return d;
}

/// Normal form of an arbitrary word (memoised per thread for the default strategy).
template <AlgebraTraits Alg>
const std::vector<NFTerm>& normal_form_word(const Word& w) {
  thread_local std::unordered_map<Word, std::vector<NFTerm>> memo;
  auto it = memo.find(w);
  if (it != memo.end()) return it->second;
  detail::rewrite<Alg>(w, RewriteStrategy::LeftInnermost, 0, nullptr, &memo);
  return memo.at(w);
}

/// Unmemoised normal form with an explicit strategy, for confluence and termination tests.
template <AlgebraTraits Alg>
std::vector<NFTerm> normal_form_word(const Word& w, RewriteStrategy strategy, RewriteStats* stats) {
  return detail::rewrite<Alg>(w, strategy, 0, stats, nullptr);
}

/// Bookkeeping for truncated terms.
struct DropInfo {
  std::uint64_t count = 0;
  int min_lambda = INT_MAX;  // smallest lambda power among lambda-drops (> N)
  int min_degree = INT_MAX;  // smallest slot degree among degree-drops (> D)
  std::uint64_t degree_drops = 0;

  void merge(const DropInfo& o) {
    count += o.count;
    degree_drops += o.degree_drops;
    min_lambda = std::min(min_lambda, o.min_lambda);
    min_degree = std::min(min_degree, o.min_degree);
  }
};

template <AlgebraTraits Alg>
class Element {
 public:
  static constexpr int kMaxSlots = 3;
  using Words = std::array<Word, kMaxSlots>;

  struct Term {
    int lambda = 0;
    int mass = 0;
    Words words;
    ExactComplex coeff;
  };

  Element() = default;
  Element(int slots, Policy policy) : slots_(slots), policy_(policy) {
    if (slots < 1 || slots > kMaxSlots) throw std::invalid_argument("Element: slot count must be 1..3");
  }

  static Element one(int slots, Policy policy) {
    Element e(slots, policy);
    e.add_canonical(0, 0, Words{}, ExactComplex(1));
    return e;
  }

  static Element scalar(const GradedScalar& s, int slots, Policy policy) {
    Element e(slots, policy);
    for (const auto& [k, c] : s.terms()) e.add_canonical(k.first, k.second, Words{}, c);
    return e;
  }

  static Element letter(Letter x, Policy policy, int slots = 1, int slot = 1) {
    Element e(slots, policy);
    Words w{};
    w[slot - 1] = Word(1, static_cast<char>(x));
    e.add_canonical(0, 0, w, ExactComplex(1));
    return e;
  }

  /// Adds coeff * lambda^l * M^m * (w_1 (x) ... ) with arbitrary (non-canonical) slot words.
  void add_word(int lambda, int mass, const Words& words, const ExactComplex& coeff) {
    std::vector<Term> acc{{lambda, mass, Words{}, coeff}};
    for (int s = 0; s < slots_; ++s) {
      std::vector<Term> next;
      if (is_canonical<Alg>(words[s])) {
        for (auto& t : acc) {
          t.words[s] = words[s];
          next.push_back(std::move(t));
        }
      } else {
        const auto& nf = normal_form_word<Alg>(words[s]);
        for (const auto& t : acc)
          for (const auto& n : nf) {
            Term u = t;
            u.words[s] = n.word;
            u.lambda += n.lambda;
            u.coeff *= n.coeff;
            next.push_back(std::move(u));
          }
      }
      acc = std::move(next);
    }
    for (const auto& t : acc) add_canonical(t.lambda, t.mass, t.words, t.coeff);
  }

  /// Adds a term whose slot words are already canonical. Applies truncation.
  void add_canonical(int lambda, int mass, const Words& words, const ExactComplex& coeff) {
    if (coeff.is_zero()) return;
    if (lambda > policy_.N) {
      note_lambda_drop(lambda);
      return;
    }
    for (int s = 0; s < slots_; ++s) {
      int d = word_degree<Alg>(words[s]);
      if (d > policy_.D) {
        note_degree_drop(d);
        return;
      }
    }
    add_key(encode(lambda, mass, words), coeff);
  }

  int slots() const { return slots_; }
  const Policy& policy() const { return policy_; }
  const DropInfo& drops() const { return drops_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Terms in deterministic (key-sorted) order.
  std::vector<Term> sorted_terms() const {
    std::vector<std::pair<std::string, const ExactComplex*>> keys;
    keys.reserve(terms_.size());
    for (const auto& [k, c] : terms_) keys.emplace_back(k, &c);
    std::sort(keys.begin(), keys.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Term> out;
    out.reserve(keys.size());
    for (const auto& [k, c] : keys) out.push_back(decode(k, *c));
    return out;
  }

  template <class F>
  void for_each_term(F&& f) const {
    for (const auto& [k, c] : terms_) f(decode(k, c));
  }

  ExactComplex coeff(int lambda, int mass, const Words& words) const {
    auto it = terms_.find(encode(lambda, mass, words));
    return it == terms_.end() ? ExactComplex() : it->second;
  }

  Element& operator+=(const Element& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_key(k, c);
    drops_.merge(o.drops_);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_key(k, -c);
    drops_.merge(o.drops_);
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  Element operator-() const {
    Element out = *this;
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
  }

  Element scaled(const ExactComplex& s) const {
    Element out(slots_, policy_);
    out.drops_ = drops_;
    if (s.is_zero()) return out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, c * s);
    return out;
  }

  /// Multiplication by a graded scalar (lambda^p M^q shifts), truncating.
  Element scaled(const GradedScalar& s) const {
    Element out(slots_, policy_);
    out.drops_ = drops_;
    for (const auto& [key, sc] : s.terms())
      for (const auto& [k, c] : terms_) {
        Term t = decode(k, c);
        out.add_canonical(t.lambda + key.first, t.mass + key.second, t.words, c * sc);
      }
    return out;
  }

  friend Element operator*(const Element& a, const Element& b) { return multiply(a, b); }

  static Element multiply(const Element& a, const Element& b) {
    a.check_compatible(b);
    Element out(a.slots_, a.policy_);
    out.drops_ = a.drops_;
    out.drops_.merge(b.drops_);
    const int n = a.slots_;
    auto ta = a.decoded();
    auto tb = b.decoded();
    std::vector<const std::vector<NFTerm>*> nf(n);
    std::vector<NFTerm> single(n);
    for (const auto& x : ta)
      for (const auto& y : tb) {
        const int lam = x.term.lambda + y.term.lambda;
        if (lam > a.policy_.N) {
          out.note_lambda_drop(lam);
          continue;
        }
        bool dropped = false;
        for (int s = 0; s < n && !dropped; ++s) {
          int d = x.degree[s] + y.degree[s];
          if (d > a.policy_.D) {
            out.note_degree_drop(d);
            dropped = true;
          }
        }
        if (dropped) continue;
        ExactComplex c = x.term.coeff * y.term.coeff;
        const int mass = x.term.mass + y.term.mass;
        bool all_canonical = true;
        for (int s = 0; s < n; ++s) {
          const Word& u = x.term.words[s];
          const Word& w = y.term.words[s];
          if (u.empty() || w.empty() || static_cast<Letter>(u.back()) <= static_cast<Letter>(w.front())) {
            single[s] = {u + w, 0, ExactComplex(1)};
            nf[s] = nullptr;
          } else {
            nf[s] = &normal_form_word<Alg>(u + w);
            all_canonical = false;
          }
        }
        if (all_canonical) {
          Words ws{};
          for (int s = 0; s < n; ++s) ws[s] = std::move(single[s].word);
          out.add_canonical(lam, mass, ws, c);
          continue;
        }
        out.expand_product(n, 0, lam, mass, Words{}, c, nf, single);
      }
    return out;
  }

  /// Applies `f` to each slot of every term (f returns canonical words with coefficients).
  /// Used for star, substitutions and the counit.
  Element star() const {
    Element out(slots_, policy_);
    out.drops_ = drops_;
    for (const auto& [k, c] : terms_) {
      Term t = decode(k, c);
      Words rev{};
      for (int s = 0; s < slots_; ++s) rev[s] = Word(t.words[s].rbegin(), t.words[s].rend());
      out.add_word(t.lambda, t.mass, rev, c.conj());
    }
    return out;
  }

  /// Terms whose lambda power equals `lambda`.
  Element lambda_part(int lambda) const {
    Element out(slots_, policy_);
    for (const auto& [k, c] : terms_)
      if (static_cast<unsigned char>(k[0]) == lambda) out.terms_.emplace(k, c);
    return out;
  }

  /// Keeps terms satisfying pred(term).
  template <class Pred>
  Element filtered(Pred&& pred) const {
    Element out(slots_, policy_);
    out.drops_ = drops_;
    for (const auto& [k, c] : terms_)
      if (pred(decode(k, c))) out.terms_.emplace(k, c);
    return out;
  }

  /// Re-truncates to a tighter policy.
  Element with_policy(Policy p) const {
    Element out(slots_, p);
    out.drops_ = drops_;
    for (const auto& [k, c] : terms_) {
      Term t = decode(k, c);
      out.add_canonical(t.lambda, t.mass, t.words, c);
    }
    return out;
  }

  /// Embeds a 1..n slot element into a wider tensor power at the given slot offset.
  Element embedded(int slots, int offset) const {
    if (offset + slots_ > slots) throw std::invalid_argument("Element::embedded: does not fit");
    Element out(slots, policy_);
    out.drops_ = drops_;
    for (const auto& [k, c] : terms_) {
      Term t = decode(k, c);
      Words w{};
      for (int s = 0; s < slots_; ++s) w[offset + s] = t.words[s];
      out.add_canonical(t.lambda, t.mass, w, c);
    }
    return out;
  }

  friend bool operator==(const Element& a, const Element& b) {
    return a.slots_ == b.slots_ && a.terms_ == b.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : sorted_terms()) {
      if (!out.empty()) out += " + ";
      out += "(" + t.coeff.str() + ")";
      if (t.lambda > 0) out += " L" + (t.lambda > 1 ? "^" + std::to_string(t.lambda) : std::string());
      if (t.mass > 0) out += " M" + (t.mass > 1 ? "^" + std::to_string(t.mass) : std::string());
      for (int s = 0; s < slots_; ++s) {
        if (s > 0) out += " (x)";
        if (t.words[s].empty() && slots_ > 1) out += " 1";
        for (char ch : t.words[s]) out += " " + Alg::name(static_cast<Letter>(ch));
      }
    }
    return out;
  }

  void merge_drops(const DropInfo& d) { drops_.merge(d); }

 private:
  struct Decoded {
    Term term;
    std::array<int, kMaxSlots> degree{};
  };

  std::vector<Decoded> decoded() const {
    std::vector<Decoded> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) {
      Decoded d{decode(k, c), {}};
      for (int s = 0; s < slots_; ++s) d.degree[s] = word_degree<Alg>(d.term.words[s]);
      out.push_back(std::move(d));
    }
    return out;
  }

  void expand_product(int n, int s, int lam, int mass, Words ws, const ExactComplex& c,
                      const std::vector<const std::vector<NFTerm>*>& nf, const std::vector<NFTerm>& single) {
    if (s == n) {
      add_canonical(lam, mass, ws, c);
      return;
    }
    if (!nf[s]) {
      ws[s] = single[s].word;
      expand_product(n, s + 1, lam, mass, std::move(ws), c, nf, single);
      return;
    }
    for (const auto& t : *nf[s]) {
      if (lam + t.lambda > policy_.N) {
        note_lambda_drop(lam + t.lambda);
        continue;
      }
      Words w2 = ws;
      w2[s] = t.word;
      expand_product(n, s + 1, lam + t.lambda, mass, std::move(w2), c * t.coeff, nf, single);
    }
  }

  void check_compatible(const Element& o) const {
    if (slots_ != o.slots_) throw std::invalid_argument("Element: slot count mismatch");
    if (!(policy_ == o.policy_)) throw std::invalid_argument("Element: truncation policy mismatch");
  }

  void note_lambda_drop(int lambda) {
    ++drops_.count;
    drops_.min_lambda = std::min(drops_.min_lambda, lambda);
  }
  void note_degree_drop(int degree) {
    ++drops_.count;
    ++drops_.degree_drops;
    drops_.min_degree = std::min(drops_.min_degree, degree);
  }

  std::string encode(int lambda, int mass, const Words& words) const {
    std::string key;
    key.push_back(static_cast<char>(lambda));
    key.push_back(static_cast<char>(mass));
    for (int s = 0; s < slots_; ++s) {
      if (s > 0) key.push_back(static_cast<char>(0xFF));
      key += words[s];
    }
    return key;
  }

  Term decode(const std::string& key, const ExactComplex& c) const {
    Term t;
    t.lambda = static_cast<unsigned char>(key[0]);
    t.mass = static_cast<unsigned char>(key[1]);
    int s = 0;
    for (std::size_t i = 2; i < key.size(); ++i) {
      if (static_cast<unsigned char>(key[i]) == 0xFF)
        ++s;
      else
        t.words[s].push_back(key[i]);
    }
    t.coeff = c;
    return t;
  }

  void add_key(const std::string& key, const ExactComplex& c) {
    if (c.is_zero()) return;
    auto [it, ins] = terms_.try_emplace(key, c);
    if (!ins) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  int slots_ = 1;
  Policy policy_{};
  std::unordered_map<std::string, ExactComplex> terms_;
  DropInfo drops_;
};

using NCElement = Element<GroupAlgebra>;

/// mul(a, b) - mul(b, a).
template <AlgebraTraits Alg>
Element<Alg> commutator(const Element<Alg>& a, const Element<Alg>& b) {
  return a * b - b * a;
}

/// Normal form of an element given by arbitrary words (idempotent on canonical input).
template <AlgebraTraits Alg>
Element<Alg> normal_form(const Element<Alg>& e) {
  Element<Alg> out(e.slots(), e.policy());
  out.merge_drops(e.drops());
  e.for_each_term([&](const auto& t) { out.add_word(t.lambda, t.mass, t.words, t.coeff); });
  return out;
}

/// Truncated exponential sum_{n} x^n / n!. Every term of x must raise the slot
/// degree or the lambda power, so the series terminates under the policy.
template <AlgebraTraits Alg>
Element<Alg> exp_series(const Element<Alg>& x) {
  bool ok = true;
  x.for_each_term([&](const auto& t) {
    int deg = 0;
    for (int s = 0; s < x.slots(); ++s) deg += word_degree<Alg>(t.words[s]);
    if (deg == 0 && t.lambda == 0) ok = false;
  });
  if (!ok) throw std::invalid_argument("exp_series: argument has a term of degree 0 at lambda^0");
  Element<Alg> sum = Element<Alg>::one(x.slots(), x.policy());
  Element<Alg> power = sum;
  for (long n = 1;; ++n) {
    power = (power * x).scaled(ExactComplex(rational(1, n)));
    if (power.is_zero()) {
      sum.merge_drops(power.drops());
      break;
    }
    sum += power;
  }
  return sum;
}

}  // namespace kgal
