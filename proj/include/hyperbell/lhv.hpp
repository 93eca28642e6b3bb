#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperbell/bell.hpp"
#include "hyperbell/hypergraph.hpp"

namespace hyperbell {

// One joint measurement event: a setting per party over {X, Z} and an
// outcome sign per party over {+, -}.
struct MeasurementEvent {
  std::string settings;
  std::string outcomes;
};

namespace detail {

// A deterministic local model is one outcome per party per setting: 2n bits,
// bit 2i for party i's X outcome and bit 2i+1 for its Z outcome (set = -1).
// 4^n assignments cover all local models since shared randomness only mixes
// them. An event pins one bit per party, so the assignments producing it
// form a sub-cube; helpers below turn events into (which-bits, values) pairs.
struct EventCube {
  std::uint64_t position_mask = 0;  // the n pinned bits
  std::uint64_t value_mask = 0;     // their required values
};

inline EventCube event_cube(int n, const MeasurementEvent& ev) {
  if (static_cast<int>(ev.settings.size()) != n || static_cast<int>(ev.outcomes.size()) != n)
    throw std::invalid_argument("event: settings/outcomes must have one symbol per party");
  EventCube c;
  for (int i = 0; i < n; ++i) {
    int slot;
    if (ev.settings[i] == 'X')
      slot = 2 * i;
    else if (ev.settings[i] == 'Z')
      slot = 2 * i + 1;
    else
      throw std::invalid_argument("event: settings must be X or Z");
    c.position_mask |= std::uint64_t(1) << slot;
    if (ev.outcomes[i] == '-')
      c.value_mask |= std::uint64_t(1) << slot;
    else if (ev.outcomes[i] != '+')
      throw std::invalid_argument("event: outcomes must be + or -");
  }
  return c;
}

inline void check_enumeration_cap(int n, int cap) {
  if (n < 1 || n > cap)
    throw std::invalid_argument("local-model enumeration supports 1 <= n <= " +
                                std::to_string(cap));
}

// Marks every assignment that produces at least one of the events.
inline std::vector<bool> mark_producing_assignments(int n,
                                                    const std::vector<MeasurementEvent>& events) {
  std::vector<bool> marked(std::size_t(1) << (2 * n), false);
  for (const auto& ev : events) {
    const EventCube c = event_cube(n, ev);
    std::uint64_t free = ~c.position_mask & ((std::uint64_t(1) << (2 * n)) - 1);
    std::uint64_t sub = free;
    while (true) {
      marked[c.value_mask | sub] = true;
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }
  return marked;
}

}  // namespace detail

// True iff every deterministic assignment consistent with all zero events
// (producing none of them) also fails to produce the target event. This is
// the exhaustion behind the Hardy arguments.
inline bool hardy_check(int n, const std::vector<MeasurementEvent>& zero_events,
                        const MeasurementEvent& target) {
  detail::check_enumeration_cap(n, 12);
  const auto marked = detail::mark_producing_assignments(n, zero_events);
  const detail::EventCube t = detail::event_cube(n, target);
  const std::uint64_t free = ~t.position_mask & ((std::uint64_t(1) << (2 * n)) - 1);
  std::uint64_t sub = free;
  while (true) {
    if (!marked[t.value_mask | sub]) return false;  // consistent model produces the target
    if (sub == 0) break;
    sub = (sub - 1) & free;
  }
  return true;
}

// Batched form sharing one marking pass across many targets.
inline std::vector<bool> hardy_check_all(int n, const std::vector<MeasurementEvent>& zero_events,
                                         const std::vector<MeasurementEvent>& targets) {
  detail::check_enumeration_cap(n, 12);
  const auto marked = detail::mark_producing_assignments(n, zero_events);
  std::vector<bool> verdicts;
  verdicts.reserve(targets.size());
  for (const auto& target : targets) {
    const detail::EventCube t = detail::event_cube(n, target);
    const std::uint64_t free = ~t.position_mask & ((std::uint64_t(1) << (2 * n)) - 1);
    bool forced_zero = true;
    std::uint64_t sub = free;
    while (true) {
      if (!marked[t.value_mask | sub]) {
        forced_zero = false;
        break;
      }
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
    verdicts.push_back(forced_zero);
  }
  return verdicts;
}

namespace detail {

// Per-term data precomputed against the 2n-bit assignment encoding.
struct CompiledTerm {
  bool probability = false;
  std::int64_t coeff_num = 0;       // over the common denominator
  std::uint64_t position_mask = 0;  // probability: pinned bits
  std::uint64_t value_mask = 0;
  std::uint64_t parity_mask = 0;  // correlator: product = parity of these bits
};

inline std::pair<std::vector<CompiledTerm>, int> compile_terms(const BellExpression& expr) {
  int common_den = 0;
  for (const Term& t : expr.terms)
    if (t.coefficient.den_pow() > common_den) common_den = t.coefficient.den_pow();
  std::vector<CompiledTerm> out;
  out.reserve(expr.terms.size());
  for (const Term& t : expr.terms) {
    CompiledTerm c;
    c.coeff_num = t.coefficient.num() << (common_den - t.coefficient.den_pow());
    if (t.kind == Term::Kind::probability) {
      c.probability = true;
      const EventCube cube = event_cube(expr.parties, {t.layout, t.outcomes});
      c.position_mask = cube.position_mask;
      c.value_mask = cube.value_mask;
    } else {
      for (int i = 0; i < expr.parties; ++i) {
        if (t.layout[i] == 'A')
          c.parity_mask |= std::uint64_t(1) << (2 * i + 1);  // A = Z outcome
        else if (t.layout[i] == 'B')
          c.parity_mask |= std::uint64_t(1) << (2 * i);  // B = X outcome
        else if (t.layout[i] != 'I')
          throw std::invalid_argument("brute force: bad correlator symbol");
      }
    }
    out.push_back(c);
  }
  return {out, common_den};
}

inline Dyadic brute_extremum(const BellExpression& expr, bool want_max) {
  check_enumeration_cap(expr.parties, 10);
  const auto [terms, common_den] = compile_terms(expr);
  const std::uint64_t total = std::uint64_t(1) << (2 * expr.parties);
  std::int64_t best = 0;
  bool first = true;
  for (std::uint64_t a = 0; a < total; ++a) {
    std::int64_t v = 0;
    for (const auto& t : terms) {
      if (t.probability) {
        if ((a & t.position_mask) == t.value_mask) v += t.coeff_num;
      } else {
        v += (std::popcount(a & t.parity_mask) & 1) ? -t.coeff_num : t.coeff_num;
      }
    }
    if (first || (want_max ? v > best : v < best)) {
      best = v;
      first = false;
    }
  }
  return Dyadic::ratio(best, common_den);
}

}  // namespace detail

// Exact classical extremes of a Bell expression over all 4^n deterministic
// local assignments (probability terms evaluate to 0/1, correlators to +-1).
inline Dyadic brute_classical_max(const BellExpression& expr) {
  return detail::brute_extremum(expr, true);
}
inline Dyadic brute_classical_min(const BellExpression& expr) {
  return detail::brute_extremum(expr, false);
}

// The stabilizer-forced zero events of the single-hyperedge state: per qubit
// i, the event (X_i = +, all other Z = -) and every event (X_i = -, Z
// pattern != all -). Each has quantum probability exactly zero since the
// generator g_i = X_i C_{rest} has eigenvalue +1.
inline std::vector<MeasurementEvent> stabilizer_zero_events(const Hypergraph& h) {
  const int n = h.qubit_count();
  const std::uint32_t full = (std::uint32_t(1) << n) - 1;
  if (n < 2 || h.edge_masks() != std::vector<std::uint32_t>{full})
    throw std::invalid_argument(
        "stabilizer_zero_events: supported only for the single full-cardinality hyperedge, n >= 2");
  std::vector<MeasurementEvent> events;
  for (int i = 0; i < n; ++i) {
    std::string settings(n, 'Z');
    settings[i] = 'X';
    {
      std::string outcomes(n, '-');
      outcomes[i] = '+';
      events.push_back({settings, outcomes});
    }
    for (std::uint32_t pat = 0; pat + 1 < (std::uint32_t(1) << (n - 1)); ++pat) {
      // pat bit j set = '-' on the j-th non-i qubit; all-ones excluded above
      std::string outcomes(n, '+');
      outcomes[i] = '-';
      int j = 0;
      for (int q = 0; q < n; ++q) {
        if (q == i) continue;
        if (pat >> j & 1u) outcomes[q] = '-';
        ++j;
      }
      events.push_back({settings, outcomes});
    }
  }
  return events;
}

}  // namespace hyperbell
