#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyperbell/dyadic.hpp"
#include "hyperbell/hypergraph.hpp"

namespace hyperbell {

namespace bits {

// kBitSelect[p]: the 64-bit words whose bit i is set iff bit p of i is set.
inline constexpr std::uint64_t kBitSelect[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

// Word whose bit x equals bit (x ^ m) of w, for m < 64.
inline std::uint64_t xor_permute_word(std::uint64_t w, unsigned m) {
  for (int p = 0; p < 6; ++p) {
    if (m >> p & 1u) {
      const int s = 1 << p;
      const std::uint64_t hi = kBitSelect[p];
      w = ((w << s) & hi) | ((w & hi) >> s);
    }
  }
  return w;
}

// Word whose bit i equals parity(i & m), for m < 64.
inline std::uint64_t parity_pattern_word(unsigned m) {
  std::uint64_t p = 0;
  for (int b = 0; b < 6; ++b)
    if (m >> b & 1u) p ^= kBitSelect[b];
  return p;
}

// In-place relabeling B[x] <- B[x ^ mask] of a packed bitset over n-bit
// indices. Index bits below 6 permute within words, the rest swap words.
inline void xor_shuffle(std::vector<std::uint64_t>& w, std::uint32_t mask) {
  const std::size_t hi = mask >> 6;
  const unsigned lo = mask & 63u;
  if (hi)
    for (std::size_t j = 0; j < w.size(); ++j)
      if ((j ^ hi) > j) std::swap(w[j], w[j ^ hi]);
  if (lo)
    for (auto& word : w) word = xor_permute_word(word, lo);
}

}  // namespace bits

// A measurement layout: one symbol from {I, X, Z} per qubit, held as X/Z
// bitmasks. Character k of the text form addresses qubit k.
struct PauliString {
  int n = 0;
  std::uint32_t x_mask = 0;
  std::uint32_t z_mask = 0;

  PauliString() = default;
  PauliString(int n_, std::uint32_t x, std::uint32_t z) : n(n_), x_mask(x), z_mask(z) {
    if (x_mask & z_mask) throw std::invalid_argument("PauliString: overlapping X and Z masks");
  }

  static PauliString parse(std::string_view symbols) {
    PauliString p;
    p.n = static_cast<int>(symbols.size());
    if (p.n < 1 || p.n > Hypergraph::kMaxQubits)
      throw std::invalid_argument("PauliString: length must be in [1, 24]");
    for (int i = 0; i < p.n; ++i) {
      const std::uint32_t bit = std::uint32_t(1) << i;
      switch (symbols[i]) {
        case 'I': break;
        case 'X': p.x_mask |= bit; break;
        case 'Z': p.z_mask |= bit; break;
        default: throw std::invalid_argument("PauliString: symbols must be I, X or Z");
      }
    }
    return p;
  }

  std::string str() const {
    std::string s(n, 'I');
    for (int i = 0; i < n; ++i) {
      const std::uint32_t bit = std::uint32_t(1) << i;
      if (x_mask & bit) s[i] = 'X';
      if (z_mask & bit) s[i] = 'Z';
    }
    return s;
  }
};

// An n-qubit hypergraph state held as one sign bit per computational basis
// label x (bit set means amplitude -2^{-n/2}, clear means +2^{-n/2}). Bit i
// of x is qubit i's computational value. Every state produced by hyperedge
// phase-gate circuits on |+>^n has this form, so one bit per basis state is
// lossless and the correlation kernels reduce to XORs and popcounts.
class SignState {
 public:
  explicit SignState(int n) : n_(check(n)), words_(word_count(n), 0) {}

  // Product of the hyperedge phase gates applied to |+>^n. The sign at x is
  // the parity of the number of edges contained in ones(x); computed as a
  // GF(2) subset-sum transform of the edge indicator, O(n 2^n / 64).
  static SignState build(const Hypergraph& h) {
    SignState st(h.qubit_count());
    for (std::uint32_t m : h.edge_masks()) st.words_[m >> 6] ^= std::uint64_t(1) << (m & 63u);
    for (int b = 0; b < st.n_; ++b) {
      if (b < 6) {
        const std::uint64_t sel = bits::kBitSelect[b];
        const int s = 1 << b;
        for (auto& w : st.words_) w ^= (w << s) & sel;
      } else {
        const std::size_t step = std::size_t(1) << (b - 6);
        for (std::size_t j = 0; j < st.words_.size(); ++j)
          if (j & step) st.words_[j] ^= st.words_[j ^ step];
      }
    }
    return st;
  }

  int qubit_count() const { return n_; }
  std::size_t dimension() const { return std::size_t(1) << n_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  int sign(std::uint32_t basis) const {
    return (words_[basis >> 6] >> (basis & 63u)) & 1u ? -1 : +1;
  }

  // C_e for the given vertex mask: flips the sign of every x containing e.
  void apply_phase_gate(std::uint32_t edge_mask) {
    if (edge_mask == 0 || edge_mask >= dimension())
      throw std::invalid_argument("apply_phase_gate: edge mask out of range");
    const std::uint32_t free = (std::uint32_t(dimension()) - 1) & ~edge_mask;
    std::uint32_t sub = free;
    while (true) {
      const std::uint32_t x = edge_mask | sub;
      words_[x >> 6] ^= std::uint64_t(1) << (x & 63u);
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }

  void flip_sign(std::uint32_t basis) { words_[basis >> 6] ^= std::uint64_t(1) << (basis & 63u); }

  friend bool operator==(const SignState&, const SignState&) = default;

  // Sign dump: "HGSV", version 1, qubit count, then ceil(2^n/8) bytes of
  // little-endian bit-packed signs (bit set means -1).
  std::vector<std::uint8_t> serialize() const {
    std::vector<std::uint8_t> out = {'H', 'G', 'S', 'V', 1, std::uint8_t(n_)};
    const std::size_t nbytes = (dimension() + 7) / 8;
    for (std::size_t k = 0; k < nbytes; ++k)
      out.push_back(std::uint8_t(words_[k >> 3] >> ((k & 7u) * 8)));
    return out;
  }

  static SignState deserialize(const std::vector<std::uint8_t>& data) {
    if (data.size() < 6 || data[0] != 'H' || data[1] != 'G' || data[2] != 'S' || data[3] != 'V')
      throw std::invalid_argument("SignState: bad magic bytes");
    if (data[4] != 1) throw std::invalid_argument("SignState: unsupported version");
    SignState st(data[5]);
    const std::size_t nbytes = (st.dimension() + 7) / 8;
    if (data.size() != 6 + nbytes) throw std::invalid_argument("SignState: truncated dump");
    for (std::size_t k = 0; k < nbytes; ++k)
      st.words_[k >> 3] |= std::uint64_t(data[6 + k]) << ((k & 7u) * 8);
    const unsigned tail = st.dimension() & 63u;
    if (tail) st.words_.back() &= (std::uint64_t(1) << tail) - 1;
    return st;
  }

 private:
  static int check(int n) {
    if (n < 1 || n > Hypergraph::kMaxQubits)
      throw std::invalid_argument("SignState: qubit count must be in [1, 24]");
    return n;
  }
  static std::size_t word_count(int n) { return n < 6 ? 1 : (std::size_t(1) << (n - 6)); }

  int n_;
  std::vector<std::uint64_t> words_;
};

// <state| P |state> = 2^{-n} sum_x s(x) s(x ^ mX) (-1)^{popcount(x & mZ)},
// evaluated word-wise: each term is a single XOR-parity bit, so the sum is
// 2^n minus twice a popcount.
inline Dyadic expectation(const SignState& state, const PauliString& p) {
  if (p.n != state.qubit_count()) throw std::invalid_argument("expectation: length mismatch");
  const auto& w = state.words();
  const std::size_t x_hi = p.x_mask >> 6;
  const unsigned x_lo = p.x_mask & 63u;
  const std::size_t z_hi = p.z_mask >> 6;
  const std::uint64_t z_pat = bits::parity_pattern_word(p.z_mask & 63u);
  const int n = state.qubit_count();
  const std::uint64_t tail_mask =
      n < 6 ? (std::uint64_t(1) << state.dimension()) - 1 : ~std::uint64_t(0);
  std::int64_t minus_terms = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    std::uint64_t t = w[j] ^ bits::xor_permute_word(w[j ^ x_hi], x_lo) ^ z_pat;
    if (std::popcount(j & z_hi) & 1) t = ~t;
    minus_terms += std::popcount(t & tail_mask);
  }
  const std::int64_t total = std::int64_t(1) << n;
  return Dyadic::ratio(total - 2 * minus_terms, n);
}

// True iff every stabilizer generator of h fixes the state: apply the
// reduced phase gates and generator sign, relabel by the X flip, compare.
inline bool verify_stabilizers(const SignState& state, const Hypergraph& h) {
  if (h.qubit_count() != state.qubit_count())
    throw std::invalid_argument("verify_stabilizers: size mismatch");
  for (const auto& g : h.stabilizer_generators()) {
    SignState t = state;
    for (std::uint32_t m : g.reduced_edges) t.apply_phase_gate(m);
    std::vector<std::uint64_t> tw = t.words();
    if (g.sign < 0) {
      const unsigned tail = state.dimension() & 63u;
      for (auto& word : tw) word = ~word;
      if (tail) tw.back() &= (std::uint64_t(1) << tail) - 1;
    }
    bits::xor_shuffle(tw, std::uint32_t(1) << g.qubit);
    if (tw != state.words()) return false;
  }
  return true;
}

enum class Setting : std::uint8_t { Z = 0, X = 1, TraceOut = 2 };

inline std::vector<Setting> parse_settings(std::string_view text) {
  std::vector<Setting> s;
  s.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'Z': s.push_back(Setting::Z); break;
      case 'X': s.push_back(Setting::X); break;
      case 'I': s.push_back(Setting::TraceOut); break;
      default: throw std::invalid_argument("settings must be X, Z or I");
    }
  }
  return s;
}

inline std::vector<int> parse_outcomes(std::string_view text) {
  std::vector<int> r;
  r.reserve(text.size());
  for (char c : text) {
    if (c == '+')
      r.push_back(+1);
    else if (c == '-')
      r.push_back(-1);
    else
      throw std::invalid_argument("outcomes must be + or -");
  }
  return r;
}

// P(outcomes | settings), with traced-out qubits marginalized by carrying I
// in every term: P = 2^{-k} sum_{T subset of measured} (prod_{i in T} r_i)
// <string with the setting symbol on T, I elsewhere>, k = measured count.
// `outcomes` lists one sign per measured qubit, in ascending qubit order.
inline Dyadic outcome_probability(const SignState& state, const std::vector<Setting>& settings,
                                  const std::vector<int>& outcomes) {
  const int n = state.qubit_count();
  if (static_cast<int>(settings.size()) != n)
    throw std::invalid_argument("outcome_probability: settings length mismatch");
  std::uint32_t measured = 0, x_pos = 0, minus = 0;
  int k = 0;
  std::size_t next_outcome = 0;
  for (int i = 0; i < n; ++i) {
    if (settings[i] == Setting::TraceOut) continue;
    const std::uint32_t bit = std::uint32_t(1) << i;
    measured |= bit;
    if (settings[i] == Setting::X) x_pos |= bit;
    if (next_outcome >= outcomes.size())
      throw std::invalid_argument("outcome_probability: missing outcomes");
    if (outcomes[next_outcome++] < 0) minus |= bit;
    ++k;
  }
  if (next_outcome != outcomes.size())
    throw std::invalid_argument("outcome_probability: too many outcomes");

  Dyadic acc = 0;
  std::uint32_t sub = measured;
  while (true) {
    const PauliString ps(n, sub & x_pos, sub & ~x_pos);
    const Dyadic e = expectation(state, ps);
    acc += (std::popcount(sub & minus) & 1) ? -e : e;
    if (sub == 0) break;
    sub = (sub - 1) & measured;
  }
  return acc * Dyadic::pow2(-k);
}

// Full conditional probability table P(r | s) for n parties, two settings
// (X = 1, Z = 0) and two outcomes (+ = 0, - = 1) per party, with party 0 in
// the most significant bit of both indices.
class Behavior {
 public:
  explicit Behavior(int parties)
      : parties_(parties), entries_(std::size_t(1) << (2 * parties)) {
    // 4^n exact entries; 8 parties is already a 65536-entry table
    if (parties < 1 || parties > 8) throw std::invalid_argument("Behavior: 1..8 parties");
  }

  int parties() const { return parties_; }
  std::size_t outcome_count() const { return std::size_t(1) << parties_; }
  std::size_t size() const { return entries_.size(); }

  Dyadic& entry(std::uint32_t settings, std::uint32_t outcomes) {
    return entries_[index(settings, outcomes)];
  }
  const Dyadic& entry(std::uint32_t settings, std::uint32_t outcomes) const {
    return entries_[index(settings, outcomes)];
  }

  std::vector<double> as_doubles() const {
    std::vector<double> v;
    v.reserve(entries_.size());
    for (const auto& d : entries_) v.push_back(d.to_double());
    return v;
  }

 private:
  std::size_t index(std::uint32_t s, std::uint32_t r) const {
    return (std::size_t(s) << parties_) | r;
  }

  int parties_;
  std::vector<Dyadic> entries_;
};

// Behavior of (1-eps)|state><state| + eps 1/2^n under all X/Z settings;
// exact whenever eps is dyadic (bisection midpoints always are).
inline Behavior behavior_table(const SignState& state, const Dyadic& epsilon) {
  if (epsilon < Dyadic(0) || epsilon > Dyadic(1))
    throw std::invalid_argument("behavior_table: epsilon must be in [0, 1]");
  const int n = state.qubit_count();
  Behavior b(n);
  const Dyadic uniform = Dyadic::pow2(-n);
  const Dyadic weight = Dyadic(1) - epsilon;
  for (std::uint32_t s = 0; s < b.outcome_count(); ++s) {
    std::vector<Setting> settings(n);
    for (int i = 0; i < n; ++i)
      settings[i] = (s >> (n - 1 - i)) & 1u ? Setting::X : Setting::Z;
    for (std::uint32_t r = 0; r < b.outcome_count(); ++r) {
      std::vector<int> outcomes(n);
      for (int i = 0; i < n; ++i) outcomes[i] = (r >> (n - 1 - i)) & 1u ? -1 : +1;
      b.entry(s, r) = weight * outcome_probability(state, settings, outcomes) + epsilon * uniform;
    }
  }
  return b;
}

}  // namespace hyperbell
