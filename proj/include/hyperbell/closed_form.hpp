#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "hyperbell/dyadic.hpp"

namespace hyperbell {

// Closed forms for <X..X Z..Z> (optionally with one traced qubit) on the
// complete 3- and 4-uniform hypergraph states. Each function returns the
// exact value where a formula covers the (n, m) combination and nullopt where
// none does; callers fall back to the sign-vector simulator in that case.
// The branch dispatch is by residue tables (n mod 8, m mod 4); the
// underlying multiplicity combinatorics is certified against the simulator
// by the exhaustive oracle-equivalence tests rather than re-derived here.

// Exact integer pair (Re, Im) of (1+i)^n via (1+i)(a+bi) = (a-b) + (a+b)i.
struct ComplexPowerRow {
  int n = 0;
  std::int64_t re = 1;
  std::int64_t im = 0;
};

inline ComplexPowerRow cpow_1pi(int n) {
  if (n < 0) throw std::invalid_argument("cpow_1pi: negative exponent");
  if (n > 124) throw std::overflow_error("cpow_1pi: exponent too large for 64-bit parts");
  ComplexPowerRow r;
  r.n = n;
  for (int k = 0; k < n; ++k) {
    const std::int64_t re = r.re - r.im;
    const std::int64_t im = r.re + r.im;
    r.re = re;
    r.im = im;
  }
  return r;
}

// Complete 3-uniform state on n qubits, m X measurements, n-m Z measurements.
// Covered: m = 0 (identically zero), even m with 1 < m < n (+-1/2 by m mod 4),
// and m = n for even n (0 or 1 by n mod 4). Odd m has no published closed form.
inline std::optional<Dyadic> corr3(int n, int m) {
  if (n < 3) throw std::invalid_argument("corr3: complete 3-uniform needs n >= 3");
  if (m < 0 || m > n) throw std::invalid_argument("corr3: need 0 <= m <= n");
  if (m == 0) return Dyadic(0);
  if (m == n) {
    if (n % 4 == 0) return Dyadic(0);
    if (n % 4 == 2) return Dyadic(1);
    return std::nullopt;
  }
  if (m % 2 == 0 && m > 1) return m % 4 == 2 ? Dyadic::pow2(-1) : -Dyadic::pow2(-1);
  return std::nullopt;
}

// Complete 4-uniform state on n qubits. Coverage follows the four-part case
// split: odd m for n mod 8 in {6, 7, 0} and for n mod 4 == 1, even m
// (including m = n) for n mod 8 in {2, 4}. Everything else is nullopt.
inline std::optional<Dyadic> corr4(int n, int m) {
  if (n < 4) throw std::invalid_argument("corr4: complete 4-uniform needs n >= 4");
  if (m < 0 || m > n) throw std::invalid_argument("corr4: need 0 <= m <= n");
  if (m == 0) return Dyadic(0);  // <Z..Z> vanishes on every hypergraph state
  const int n8 = n % 8;

  if (n8 == 6 || n8 == 7 || n8 == 0) {
    if (m == n) return n8 == 7 ? std::optional<Dyadic>(Dyadic(-1)) : std::nullopt;
    if (m % 2 == 1) {
      // (2^{floor(n/2)-m} + 1) / 2^{floor(n/2)-floor(m/2)}, sign by (m-1) mod 4
      const Dyadic mag =
          (Dyadic::pow2(n / 2 - m) + Dyadic(1)) * Dyadic::pow2(-(n / 2 - m / 2));
      return (m - 1) % 4 == 0 ? mag : -mag;
    }
    return std::nullopt;
  }

  if (n % 4 == 1) {
    if (m % 2 == 0) return std::nullopt;
    if (m == n) return Dyadic::pow2(-(n / 2));
    const Dyadic mag = Dyadic::pow2(-((m + 1) / 2));
    return (m - 1) % 4 == 0 ? mag : -mag;
  }

  if (n8 == 2 || n8 == 4) {
    if (m % 2 == 1) return std::nullopt;
    if (m == n) return (Dyadic::pow2(n / 2 - 1) + Dyadic(1)) * Dyadic::pow2(-(n / 2));
    const Dyadic mag = Dyadic::pow2(m / 2 - 1 - n / 2);
    return (n - m) % 4 == 0 ? mag : -mag;
  }

  return std::nullopt;
}

// One qubit traced out: <X^m Z^{n-m-1} I> on the complete `uniformity`-state
// of n qubits. 4-uniform coverage is n mod 8 in {3, 4} with even m
// (magnitude 2^{m/2-1-floor(n/2)}, sign + iff m = 2 mod 4); 3-uniform
// coverage is odd m with magnitude 2^{-floor((n-1)/2)} signed by residue
// class, and identically zero for n = 0 mod 4.
inline std::optional<Dyadic> corr_traced(int uniformity, int n, int m) {
  if (uniformity != 3 && uniformity != 4)
    throw std::invalid_argument("corr_traced: uniformity must be 3 or 4");
  if (n < uniformity) throw std::invalid_argument("corr_traced: n below uniformity");
  if (m < 0 || m > n - 1) throw std::invalid_argument("corr_traced: need 0 <= m <= n-1");
  if (m == 0) return Dyadic(0);

  if (uniformity == 4) {
    const int n8 = n % 8;
    if ((n8 == 3 || n8 == 4) && m % 2 == 0 && m <= n - 2) {
      const Dyadic mag = Dyadic::pow2(m / 2 - 1 - n / 2);
      return m % 4 == 2 ? mag : -mag;
    }
    return std::nullopt;
  }

  if (m % 2 == 0 || m > n - 2) return std::nullopt;
  if (n % 4 == 0) return Dyadic(0);
  const Dyadic mag = Dyadic::pow2(-((n - 1) / 2));
  const bool plus_on_m1 = n % 8 == 1 || n % 8 == 2 || n % 8 == 3;  // sign flip between classes
  if ((m - 1) % 4 == 0) return plus_on_m1 ? mag : -mag;
  return plus_on_m1 ? -mag : mag;
}

// Lookup for the CLI and cross-check paths: counts of X / Z / traced qubits
// against the complete k-uniform family.
struct CorrelationQuery {
  int uniformity = 3;
  int n = 0;
  int m = 0;       // X count
  int traced = 0;  // identity count, 0 or 1 for closed forms
};

inline std::optional<Dyadic> closed_form_value(const CorrelationQuery& q) {
  if (q.traced == 0) {
    if (q.uniformity == 3) return corr3(q.n, q.m);
    if (q.uniformity == 4) return corr4(q.n, q.m);
    return std::nullopt;
  }
  if (q.traced == 1) return corr_traced(q.uniformity, q.n, q.m);
  return std::nullopt;
}

}  // namespace hyperbell
