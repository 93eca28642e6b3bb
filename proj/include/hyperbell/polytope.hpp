#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hyperbell/dyadic.hpp"
#include "hyperbell/hypergraph.hpp"
#include "hyperbell/sign_state.hpp"
#include "hyperbell/simplex.hpp"

namespace hyperbell {

// Vertex of a behavior polytope: exact conditional probabilities indexed by
// settings x 2^parties + outcomes, party 0 most significant in both, X = 1
// and Z = 0 for settings, + = 0 and - = 1 for outcomes. Two-party vertices
// have 16 entries, three-party ones 64.
struct Vertex {
  std::vector<Dyadic> p;
};

// The 24 extremal nonsignalling behaviors of the 2-party, 2-setting,
// 2-outcome scenario: 16 local deterministic boxes a(x), b(y) plus the 8 PR
// boxes P(ab|xy) = 1/2 iff a xor b = x.y xor alpha.x xor beta.y xor gamma.
inline std::vector<Vertex> ns_vertices_2party() {
  std::vector<Vertex> out;
  const Dyadic half = Dyadic::pow2(-1);
  // deterministic: fa, fb encode outcome bits (f >> x) & 1 for setting x
  for (unsigned fa = 0; fa < 4; ++fa)
    for (unsigned fb = 0; fb < 4; ++fb) {
      Vertex v{std::vector<Dyadic>(16, Dyadic(0))};
      for (unsigned x = 0; x < 2; ++x)
        for (unsigned y = 0; y < 2; ++y) {
          const unsigned a = fa >> x & 1u, b = fb >> y & 1u;
          v.p[((x << 1 | y) << 2) | (a << 1 | b)] = 1;
        }
      out.push_back(std::move(v));
    }
  for (unsigned alpha = 0; alpha < 2; ++alpha)
    for (unsigned beta = 0; beta < 2; ++beta)
      for (unsigned gamma = 0; gamma < 2; ++gamma) {
        Vertex v{std::vector<Dyadic>(16, Dyadic(0))};
        for (unsigned x = 0; x < 2; ++x)
          for (unsigned y = 0; y < 2; ++y)
            for (unsigned a = 0; a < 2; ++a)
              for (unsigned b = 0; b < 2; ++b)
                if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma))
                  v.p[((x << 1 | y) << 2) | (a << 1 | b)] = half;
        out.push_back(std::move(v));
      }
  return out;
}

namespace detail {

// Embed (lone-party deterministic box) x (two-party vertex) into the
// three-party table. `lone` is the lone party's index; the pair keeps its
// ascending order.
inline Vertex compose_split_vertex(int lone, unsigned f_lone, const Vertex& pair) {
  int p1 = -1, p2 = -1;
  for (int q = 0; q < 3; ++q) {
    if (q == lone) continue;
    (p1 < 0 ? p1 : p2) = q;
  }
  Vertex v{std::vector<Dyadic>(64, Dyadic(0))};
  for (unsigned s = 0; s < 8; ++s) {
    const unsigned sl = s >> (2 - lone) & 1u;
    const unsigned s1 = s >> (2 - p1) & 1u, s2 = s >> (2 - p2) & 1u;
    const unsigned rl = f_lone >> sl & 1u;
    for (unsigned r1 = 0; r1 < 2; ++r1)
      for (unsigned r2 = 0; r2 < 2; ++r2) {
        unsigned r = (rl << (2 - lone)) | (r1 << (2 - p1)) | (r2 << (2 - p2));
        v.p[(s << 3) | r] = pair.p[((s1 << 1 | s2) << 2) | (r1 << 1 | r2)];
      }
  }
  return v;
}

}  // namespace detail

// Vertices of the hybrid local-nonsignalling model: for each bipartition
// (lone party 0, 1 or 2), the product of its 4 deterministic boxes with the
// 24 two-party nonsignalling vertices. 96 per split, 288 total; duplicates
// across splits are kept.
inline std::vector<Vertex> hybrid_vertices_3party() {
  const auto pair_vertices = ns_vertices_2party();
  std::vector<Vertex> out;
  out.reserve(288);
  for (int lone = 0; lone < 3; ++lone)
    for (unsigned f = 0; f < 4; ++f)
      for (const auto& pv : pair_vertices)
        out.push_back(detail::compose_split_vertex(lone, f, pv));
  return out;
}

// The 64 fully deterministic three-party boxes.
inline std::vector<Vertex> local_vertices_3party() {
  std::vector<Vertex> out;
  out.reserve(64);
  for (unsigned f0 = 0; f0 < 4; ++f0)
    for (unsigned f1 = 0; f1 < 4; ++f1)
      for (unsigned f2 = 0; f2 < 4; ++f2) {
        Vertex v{std::vector<Dyadic>(64, Dyadic(0))};
        for (unsigned s = 0; s < 8; ++s) {
          const unsigned r0 = f0 >> (s >> 2 & 1u) & 1u;
          const unsigned r1 = f1 >> (s >> 1 & 1u) & 1u;
          const unsigned r2 = f2 >> (s & 1u) & 1u;
          v.p[(s << 3) | (r0 << 2 | r1 << 1 | r2)] = 1;
        }
        out.push_back(std::move(v));
      }
  return out;
}

// Exact nonsignalling check used by the property tests: each subset of
// parties must have marginals independent of the other parties' settings.
inline bool is_nonsignalling(const Vertex& v, int parties) {
  const unsigned n_out = 1u << parties;
  for (int target = 0; target < parties; ++target) {
    // marginal of the remaining parties must not depend on target's setting
    for (unsigned s = 0; s < n_out; ++s) {
      if (s >> (parties - 1 - target) & 1u) continue;  // compare Z vs X on target
      const unsigned s_alt = s | (1u << (parties - 1 - target));
      for (unsigned r = 0; r < n_out; ++r) {
        if (r >> (parties - 1 - target) & 1u) continue;
        const unsigned r_alt = r | (1u << (parties - 1 - target));
        const Dyadic m0 = v.p[(s << parties) | r] + v.p[(s << parties) | r_alt];
        const Dyadic m1 = v.p[(s_alt << parties) | r] + v.p[(s_alt << parties) | r_alt];
        if (m0 != m1) return false;
      }
    }
  }
  return true;
}

struct LPOutcome {
  bool member = false;
  double violation = 0.0;        // optimum of the membership LP, 0 when inside, 1 outside
  std::vector<double> lambda;    // separating inequality coefficients (when outside)
  double bound_c = 0.0;          // its local-nonsignalling bound
};

// Membership of p in the convex hull of the vertices, decided by linear
// programming. Feasibility of { mu >= 0, sum mu = 1, V mu = p } is solved
// directly; its Farkas certificate is exactly the optimal (lambda, C) of the
// separating-inequality LP, normalized so lambda.p - C = 1 (the capped
// optimum). `tolerance` is the membership threshold on the LP residual.
inline LPOutcome lp_membership(const std::vector<double>& p, const std::vector<Vertex>& vertices,
                               double tolerance = 1e-7) {
  if (vertices.empty()) throw std::invalid_argument("lp_membership: no vertices");
  const std::size_t dim = p.size();
  for (const auto& v : vertices)
    if (v.p.size() != dim) throw std::invalid_argument("lp_membership: dimension mismatch");

  const std::size_t rows = dim + 1;
  std::vector<std::vector<double>> A(rows, std::vector<double>(vertices.size(), 0.0));
  std::vector<double> b(rows, 0.0);
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) A[i][j] = vertices[j].p[i].to_double();
    A[dim][j] = 1.0;
  }
  for (std::size_t i = 0; i < dim; ++i) b[i] = p[i];
  b[dim] = 1.0;

  const SimplexSolver solver(1e-9);
  const SimplexResult r =
      solver.solve_equality_form(A, b, std::vector<double>(vertices.size(), 0.0));

  LPOutcome out;
  if (r.status == SimplexStatus::infeasible && r.objective > tolerance) {
    out.member = false;
    out.violation = 1.0;
    out.lambda.assign(dim, 0.0);
    // y = (lambda, -C) up to the positive scale r.objective = lambda.p - C.
    for (std::size_t i = 0; i < dim; ++i) out.lambda[i] = r.y[i] / r.objective;
    out.bound_c = -r.y[dim] / r.objective;
  } else {
    out.member = true;
    out.violation = 0.0;
  }
  return out;
}

inline LPOutcome lp_membership(const Behavior& p, const std::vector<Vertex>& vertices,
                               double tolerance = 1e-7) {
  return lp_membership(p.as_doubles(), vertices, tolerance);
}

enum class Model { hybrid, full_local };

inline std::vector<Vertex> model_vertices(Model m) {
  return m == Model::hybrid ? hybrid_vertices_3party() : local_vertices_3party();
}

struct NoiseThreshold {
  double epsilon = 0.0;
  bool member_at_zero = false;
  LPOutcome last_outside;  // certificate just below the threshold
};

// Bisects the white-noise level: (1-eps)|H><H| + eps/8 enters the model's
// polytope at eps*. Mixing toward eps = 1 (an interior point) makes
// membership monotone, so bisection is sound. Midpoints are dyadic, keeping
// every behavior table exact until the LP boundary.
inline NoiseThreshold noise_threshold(const Hypergraph& h, Model model,
                                      double bisect_tol = 1e-4) {
  if (h.qubit_count() != 3)
    throw std::invalid_argument("noise_threshold: the membership LP is built for 3 parties");
  if (bisect_tol < 1e-6) throw std::invalid_argument("noise_threshold: tolerance below 1e-6");
  const SignState state = SignState::build(h);
  const auto vertices = model_vertices(model);

  const auto probe = [&](const Dyadic& eps) {
    return lp_membership(behavior_table(state, eps), vertices);
  };

  NoiseThreshold result;
  const LPOutcome at_zero = probe(Dyadic(0));
  if (at_zero.member) {
    result.member_at_zero = true;
    result.epsilon = 0.0;
    return result;
  }
  result.last_outside = at_zero;
  if (!probe(Dyadic(1)).member)
    throw std::logic_error("noise_threshold: uniform noise must be inside every model");

  Dyadic lo = 0, hi = 1;  // outside at lo, member at hi
  while ((hi - lo).to_double() > bisect_tol) {
    const Dyadic mid = (lo + hi) * Dyadic::pow2(-1);
    const LPOutcome r = probe(mid);
    if (r.member) {
      hi = mid;
    } else {
      lo = mid;
      result.last_outside = r;
    }
  }
  result.epsilon = ((lo + hi) * Dyadic::pow2(-1)).to_double();
  return result;
}

}  // namespace hyperbell
