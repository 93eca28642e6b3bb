#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hyperbell/dyadic.hpp"
#include "hyperbell/sign_state.hpp"

namespace hyperbell {

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

enum class Family { hardy3, svetlichny3, hardyN, mermin_even, mermin_odd, separability };

inline Family parse_family(std::string_view name) {
  if (name == "hardy3") return Family::hardy3;
  if (name == "svetlichny3") return Family::svetlichny3;
  if (name == "hardyN") return Family::hardyN;
  if (name == "mermin_even" || name == "mermin-even") return Family::mermin_even;
  if (name == "mermin_odd" || name == "mermin-odd") return Family::mermin_odd;
  if (name == "separability") return Family::separability;
  throw std::invalid_argument("unknown Bell family: " + std::string(name));
}

inline const char* family_name(Family f) {
  switch (f) {
    case Family::hardy3: return "hardy3";
    case Family::svetlichny3: return "svetlichny3";
    case Family::hardyN: return "hardyN";
    case Family::mermin_even: return "mermin_even";
    case Family::mermin_odd: return "mermin_odd";
    case Family::separability: return "separability";
  }
  return "?";
}

// One signed term of a Bell expression. Probability terms carry a per-party
// setting layout over {X, Z} plus a per-party outcome sign; correlator terms
// carry per-party symbols over {A, B, I}, with A = Z and B = X fixed at
// evaluation time.
struct Term {
  enum class Kind { probability, correlator };
  Kind kind = Kind::correlator;
  Dyadic coefficient = 1;
  std::string layout;    // over "XZ" (probability) or "ABI" (correlator)
  std::string outcomes;  // over "+-", probability terms only
};

struct BellExpression {
  enum class BoundKind { none, exact, sqrt2 };
  enum class Direction { geq_zero, max_form };

  Family family = Family::hardy3;
  int parties = 0;
  std::vector<Term> terms;
  BoundKind bound_kind = BoundKind::none;
  Dyadic bound_value = 0;          // meaningful for BoundKind::exact
  std::string bound_provenance;    // "formula" or "brute-force"
  Direction direction = Direction::geq_zero;

  double bound_as_double() const {
    if (bound_kind == BoundKind::sqrt2) return std::sqrt(2.0);
    return bound_value.to_double();
  }
};

namespace detail {

// All n-bit masks with the given popcount, ascending.
inline std::vector<std::uint32_t> masks_with_popcount(int n, int k) {
  std::vector<std::uint32_t> out;
  const std::uint32_t top = std::uint32_t(1) << n;
  for (std::uint32_t m = 0; m < top; ++m)
    if (std::popcount(m) == k) out.push_back(m);
  return out;
}

inline std::string correlator_layout(int n, std::uint32_t b_mask) {
  std::string s(n, 'A');
  for (int i = 0; i < n; ++i)
    if (b_mask >> i & 1u) s[i] = 'B';
  return s;
}

// The stabilizer-forced zero events of the single-edge state, as probability
// terms with coefficient +1: per qubit i, (X_i = +, all other Z = -) plus
// every (X_i = -, Z pattern != all -).
inline void append_hardy_plus_terms(BellExpression& e) {
  const int n = e.parties;
  for (int i = 0; i < n; ++i) {
    std::string layout(n, 'Z');
    layout[i] = 'X';
    const std::uint32_t z_count = n - 1;
    for (std::uint32_t pat = 0; pat < (std::uint32_t(1) << z_count) + 1; ++pat) {
      // pat == 2^{n-1} encodes the (+, all -) event; smaller values are the
      // (-, not-all-minus) events with bit j set meaning '-' on the j-th Z.
      const bool x_plus = pat == (std::uint32_t(1) << z_count);
      if (!x_plus && pat == (std::uint32_t(1) << z_count) - 1) continue;  // all minus
      std::string outcomes(n, '+');
      outcomes[i] = x_plus ? '+' : '-';
      int j = 0;
      for (int q = 0; q < n; ++q) {
        if (q == i) continue;
        const bool minus = x_plus ? true : ((pat >> j) & 1u);
        outcomes[q] = minus ? '-' : '+';
        ++j;
      }
      Term t;
      t.kind = Term::Kind::probability;
      t.coefficient = 1;
      t.layout = layout;
      t.outcomes = outcomes;
      e.terms.push_back(std::move(t));
    }
  }
}

}  // namespace detail

// Constructs the named expression family with fully expanded terms.
//   hardy3 / hardyN: stabilizer zero events plus all-X events with at least
//     one + and two - subtracted (2^n - n - 2 of them), bound 0.
//   svetlichny3: the zero events plus P(---|XXX) - P(---|ZZZ), bound 0.
//   mermin_even: 2j B's, j = 0..floor(n/2), coefficient (-1)^{j+1}.
//   mermin_odd: odd B counts b, coefficient (-1)^{(b-1)/2}.
//   separability: odd B counts, unit coefficients, bound sqrt(2).
inline BellExpression build_expression(Family family, int n) {
  if (n < 2) throw std::invalid_argument("build_expression: need n >= 2");
  if ((family == Family::hardy3 || family == Family::svetlichny3) && n != 3)
    throw std::invalid_argument("build_expression: hardy3/svetlichny3 require n = 3");
  BellExpression e;
  e.family = family;
  e.parties = n;

  switch (family) {
    case Family::hardy3:
    case Family::hardyN: {
      detail::append_hardy_plus_terms(e);
      const std::string all_x(n, 'X');
      for (std::uint32_t r = 0; r < (std::uint32_t(1) << n); ++r) {
        const int minus_count = std::popcount(r);
        if (minus_count < 2 || minus_count == n) continue;  // need >=1 plus, >=2 minus
        Term t;
        t.kind = Term::Kind::probability;
        t.coefficient = -1;
        t.layout = all_x;
        t.outcomes.assign(n, '+');
        for (int i = 0; i < n; ++i)
          if (r >> i & 1u) t.outcomes[i] = '-';
        e.terms.push_back(std::move(t));
      }
      e.bound_kind = BellExpression::BoundKind::exact;
      e.bound_value = 0;
      e.bound_provenance = "formula";
      e.direction = BellExpression::Direction::geq_zero;
      break;
    }
    case Family::svetlichny3: {
      detail::append_hardy_plus_terms(e);
      Term xxx;
      xxx.kind = Term::Kind::probability;
      xxx.coefficient = 1;
      xxx.layout = "XXX";
      xxx.outcomes = "---";
      e.terms.push_back(xxx);
      Term zzz;
      zzz.kind = Term::Kind::probability;
      zzz.coefficient = -1;
      zzz.layout = "ZZZ";
      zzz.outcomes = "---";
      e.terms.push_back(zzz);
      e.bound_kind = BellExpression::BoundKind::exact;
      e.bound_value = 0;
      e.bound_provenance = "formula";
      e.direction = BellExpression::Direction::geq_zero;
      break;
    }
    case Family::mermin_even: {
      for (int j = 0; 2 * j <= n; ++j) {
        const Dyadic coeff = (j % 2 == 0) ? Dyadic(-1) : Dyadic(1);
        for (std::uint32_t m : detail::masks_with_popcount(n, 2 * j)) {
          Term t;
          t.coefficient = coeff;
          t.layout = detail::correlator_layout(n, m);
          e.terms.push_back(std::move(t));
        }
      }
      e.bound_kind = BellExpression::BoundKind::exact;
      e.bound_value = Dyadic::pow2(n / 2);
      e.bound_provenance = "formula";
      e.direction = BellExpression::Direction::max_form;
      break;
    }
    case Family::mermin_odd: {
      for (int b = 1; b <= n; b += 2) {
        const Dyadic coeff = (((b - 1) / 2) % 2 == 0) ? Dyadic(1) : Dyadic(-1);
        for (std::uint32_t m : detail::masks_with_popcount(n, b)) {
          Term t;
          t.coefficient = coeff;
          t.layout = detail::correlator_layout(n, m);
          e.terms.push_back(std::move(t));
        }
      }
      e.bound_kind = BellExpression::BoundKind::exact;
      e.bound_value = Dyadic::pow2(n / 2);
      e.bound_provenance = "formula";
      e.direction = BellExpression::Direction::max_form;
      break;
    }
    case Family::separability: {
      for (int b = 1; b <= n; b += 2)
        for (std::uint32_t m : detail::masks_with_popcount(n, b)) {
          Term t;
          t.coefficient = 1;
          t.layout = detail::correlator_layout(n, m);
          e.terms.push_back(std::move(t));
        }
      e.bound_kind = BellExpression::BoundKind::sqrt2;
      e.bound_provenance = "formula";
      e.direction = BellExpression::Direction::max_form;
      break;
    }
  }
  return e;
}

// Exact quantum value: sum of coefficient times probability or correlator,
// with the fixed assignment A = Z, B = X.
inline Dyadic quantum_value(const BellExpression& expr, const SignState& state) {
  if (expr.parties != state.qubit_count())
    throw std::invalid_argument("quantum_value: party count mismatch");
  Dyadic acc = 0;
  for (const Term& t : expr.terms) {
    Dyadic v;
    if (t.kind == Term::Kind::probability) {
      v = outcome_probability(state, parse_settings(t.layout), parse_outcomes(t.outcomes));
    } else {
      std::uint32_t mx = 0, mz = 0;
      for (int i = 0; i < expr.parties; ++i) {
        const std::uint32_t bit = std::uint32_t(1) << i;
        switch (t.layout[i]) {
          case 'A': mz |= bit; break;
          case 'B': mx |= bit; break;
          case 'I': break;
          default: throw std::invalid_argument("quantum_value: bad correlator symbol");
        }
      }
      v = expectation(state, PauliString(expr.parties, mx, mz));
    }
    acc += t.coefficient * v;
  }
  return acc;
}

// Formula bounds: 2^{floor(n/2)} for the Mermin families, 0 for the Hardy
// and Svetlichny forms (their inequalities read >= 0 by construction). The
// separability bound sqrt(2) is not a locality bound and lives on the
// expression itself.
inline Dyadic classical_bound_formula(Family family, int n) {
  switch (family) {
    case Family::mermin_even:
    case Family::mermin_odd:
      return Dyadic::pow2(n / 2);
    case Family::hardy3:
    case Family::hardyN:
    case Family::svetlichny3:
      return 0;
    case Family::separability:
      throw std::domain_error("separability has no locality bound formula (bound is sqrt 2)");
  }
  throw std::invalid_argument("classical_bound_formula: unknown family");
}

enum class Parity { even, odd };

// Optimal-sign value of the full-correlation family with the last k qubits
// traced out: sum over m of the chosen parity, 1 <= m <= n-k, of
// C(n-k, m) |<X^m Z^{n-k-m} I^k>|. This is what the traced-correlation
// tables report; a single layout per m suffices because the complete
// k-uniform states are permutation symmetric.
inline Dyadic best_sign_value(const SignState& state, int k_traced, Parity parity) {
  const int n = state.qubit_count();
  if (k_traced < 0 || k_traced >= n)
    throw std::invalid_argument("best_sign_value: traced count must be in [0, n)");
  const int measured = n - k_traced;
  Dyadic acc = 0;
  for (int m = 1; m <= measured; ++m) {
    if ((m % 2 == 0) != (parity == Parity::even)) continue;
    const std::uint32_t mx = (std::uint32_t(1) << m) - 1;
    const std::uint32_t mz = ((std::uint32_t(1) << measured) - 1) & ~mx;
    acc += Dyadic(binomial(measured, m)) * expectation(state, PauliString(n, mx, mz)).abs();
  }
  return acc;
}

// Phase super-resolution visibility of a Mermin-family value.
inline Dyadic visibility(const Dyadic& bell_value, int n) {
  return bell_value * Dyadic::pow2(-(n - 1));
}

enum class RatioVariant { scaling, particle_loss };

struct RatioFormulaResult {
  Dyadic quantum_value;     // exact closed-form quantum value
  double asymptotic_ratio;  // quantum/classical scaling factor
};

// Closed-form quantum values of the even-m traced strategy on the complete
// 4-uniform states, together with the asymptotic quantum/classical ratio.
//   scaling (n = 3 mod 8): measure on the first n-1 qubits;
//     value = (1/2) sum_{k even} C(M,k) 2^{-k/2} - 2^{-(M+2)/2}, M = n-1.
//     This equals (1/4)[(1+1/sqrt2)^M + (1-1/sqrt2)^M] - (1/sqrt2)^{M+2};
//     for even M the binomial even-part identity carries a plus sign.
//   particle_loss (n = 4 mod 8): one qubit lost;
//     value = (1/4) sum_{k odd} C(M,k) 2^{-(k-1)/2} - 2^{-(M+3)/2}, M = n-1,
//     i.e. (1/(4 sqrt2))[(1+1/sqrt2)^M - (1-1/sqrt2)^M] - (1/sqrt2)^{M+3}.
// Both are exactly dyadic; the float conversion happens at the boundary.
inline RatioFormulaResult ratio_formulas(int n, RatioVariant variant) {
  RatioFormulaResult r{};
  const double s = 1.0 / std::sqrt(2.0);
  if (variant == RatioVariant::scaling) {
    if (n % 8 != 3)
      throw std::invalid_argument("ratio_formulas: the scaling variant requires n = 3 mod 8");
    const int M = n - 1;
    Dyadic acc = 0;
    for (int k = 0; k <= M; k += 2) acc += Dyadic(binomial(M, k)) * Dyadic::pow2(-k / 2);
    r.quantum_value = acc * Dyadic::pow2(-1) - Dyadic::pow2(-(M + 2) / 2);
    r.asymptotic_ratio = std::pow(1.0 + s, n - 1) / std::pow(std::sqrt(2.0), n + 3);
    return r;
  }
  if (n % 8 != 4)
    throw std::invalid_argument("ratio_formulas: the particle-loss variant requires n = 4 mod 8");
  const int M = n - 1;
  Dyadic acc = 0;
  for (int k = 1; k <= M; k += 2) acc += Dyadic(binomial(M, k)) * Dyadic::pow2(-(k - 1) / 2);
  r.quantum_value = acc * Dyadic::pow2(-2) - Dyadic::pow2(-(M + 3) / 2);
  r.asymptotic_ratio = 1.0 / (std::sqrt(2.0) + 1.0);
  return r;
}

// --- JSON (de)serialization used by the CLI and test fixtures ---

inline nlohmann::json to_json(const Dyadic& d) {
  return nlohmann::json::array({d.num(), std::int64_t(1) << d.den_pow()});
}

inline Dyadic dyadic_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("dyadic JSON: expected [num, den]");
  const std::int64_t num = j[0].get<std::int64_t>();
  const std::int64_t den = j[1].get<std::int64_t>();
  if (den <= 0 || (den & (den - 1)) != 0)
    throw std::invalid_argument("dyadic JSON: denominator must be a power of two");
  return Dyadic::ratio(num, std::countr_zero(std::uint64_t(den)));
}

inline nlohmann::json to_json(const BellExpression& e) {
  nlohmann::json j;
  j["family"] = family_name(e.family);
  j["n"] = e.parties;
  j["direction"] = e.direction == BellExpression::Direction::geq_zero ? "geq_zero" : "max_form";
  switch (e.bound_kind) {
    case BellExpression::BoundKind::none: j["classical_bound"] = nullptr; break;
    case BellExpression::BoundKind::sqrt2:
      j["classical_bound"] = {{"kind", "sqrt2"}};
      break;
    case BellExpression::BoundKind::exact:
      j["classical_bound"] = {{"kind", "exact"},
                              {"value", to_json(e.bound_value)},
                              {"provenance", e.bound_provenance}};
      break;
  }
  j["terms"] = nlohmann::json::array();
  for (const Term& t : e.terms) {
    nlohmann::json jt;
    jt["kind"] = t.kind == Term::Kind::probability ? "probability" : "correlator";
    jt["coeff"] = to_json(t.coefficient);
    jt["layout"] = t.layout;
    if (t.kind == Term::Kind::probability) jt["outcomes"] = t.outcomes;
    j["terms"].push_back(std::move(jt));
  }
  return j;
}

inline BellExpression bell_expression_from_json(const nlohmann::json& j) {
  BellExpression e;
  e.family = parse_family(j.at("family").get<std::string>());
  e.parties = j.at("n").get<int>();
  e.direction = j.at("direction").get<std::string>() == "max_form"
                    ? BellExpression::Direction::max_form
                    : BellExpression::Direction::geq_zero;
  const auto& jb = j.at("classical_bound");
  if (jb.is_null()) {
    e.bound_kind = BellExpression::BoundKind::none;
  } else if (jb.at("kind").get<std::string>() == "sqrt2") {
    e.bound_kind = BellExpression::BoundKind::sqrt2;
  } else {
    e.bound_kind = BellExpression::BoundKind::exact;
    e.bound_value = dyadic_from_json(jb.at("value"));
    e.bound_provenance = jb.value("provenance", "");
  }
  for (const auto& jt : j.at("terms")) {
    Term t;
    t.kind = jt.at("kind").get<std::string>() == "probability" ? Term::Kind::probability
                                                               : Term::Kind::correlator;
    t.coefficient = dyadic_from_json(jt.at("coeff"));
    t.layout = jt.at("layout").get<std::string>();
    if (t.kind == Term::Kind::probability) t.outcomes = jt.at("outcomes").get<std::string>();
    if (static_cast<int>(t.layout.size()) != e.parties)
      throw std::invalid_argument("bell JSON: layout length mismatch");
    e.terms.push_back(std::move(t));
  }
  if (e.terms.empty()) throw std::invalid_argument("bell JSON: terms must be non-empty");
  return e;
}

}  // namespace hyperbell
