#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hyperbell {

// One generator g_i of the (nonlocal) stabilizer of a hypergraph state:
// an X on `qubit`, followed by a phase gate C_{e\{i}} for every hyperedge e
// containing i. Reduced edges that cancel in pairs are dropped; an empty
// reduction (from the edge {i} itself) becomes the global sign -1.
struct StabilizerGenerator {
  int qubit = 0;
  std::vector<std::uint32_t> reduced_edges;  // nonempty vertex masks, ascending
  int sign = 1;
};

// A hypergraph on qubits 0..n-1 (vertex indices are 0-based). Hyperedges are
// stored as bitmasks in a canonical form: nonempty, within range, ascending,
// with duplicate pairs cancelled since C_e^2 = 1. Immutable after
// construction, so values can be shared freely across threads.
class Hypergraph {
 public:
  // 2^24 packed signs is ~2 MiB, comfortable headroom over the n <= 13 the
  // numeric tables need.
  static constexpr int kMaxQubits = 24;

  Hypergraph(int n, const std::vector<std::vector<int>>& edges)
      : Hypergraph(MaskTag{}, n, masks_from_vertex_lists(n, edges)) {}

  static Hypergraph from_edge_masks(int n, std::vector<std::uint32_t> masks) {
    return Hypergraph(MaskTag{}, n, std::move(masks));
  }

  // All C(n, k) hyperedges of cardinality k.
  static Hypergraph complete_k_uniform(int n, int k) {
    check_qubit_count(n);
    if (k < 1 || k > n) throw std::invalid_argument("complete_k_uniform: need 1 <= k <= n");
    std::vector<std::uint32_t> masks;
    const std::uint32_t top = std::uint32_t(1) << n;
    for (std::uint32_t m = 0; m < top; ++m)
      if (std::popcount(m) == k) masks.push_back(m);
    return Hypergraph(MaskTag{}, n, std::move(masks));
  }

  // The single hyperedge covering every vertex; the Hardy-argument family.
  static Hypergraph single_edge(int n) { return complete_k_uniform(n, n); }

  // Accepts {"n": <int>, "edges": [[<int>...], ...]}; order-insensitive on
  // input, canonical order on output.
  static Hypergraph parse_json(const std::string& text);
  std::string to_json() const;

  int qubit_count() const { return n_; }
  const std::vector<std::uint32_t>& edge_masks() const { return edges_; }

  std::vector<std::vector<int>> edge_vertex_lists() const {
    std::vector<std::vector<int>> out;
    out.reserve(edges_.size());
    for (std::uint32_t m : edges_) out.push_back(vertices_of(m));
    return out;
  }

  std::vector<StabilizerGenerator> stabilizer_generators() const {
    std::vector<StabilizerGenerator> gens;
    gens.reserve(n_);
    for (int i = 0; i < n_; ++i) {
      StabilizerGenerator g;
      g.qubit = i;
      const std::uint32_t bit = std::uint32_t(1) << i;
      std::vector<std::uint32_t> reduced;
      for (std::uint32_t m : edges_)
        if (m & bit) reduced.push_back(m & ~bit);
      cancel_pairs(reduced);
      for (std::uint32_t m : reduced) {
        if (m == 0)
          g.sign = -g.sign;  // C_empty = -1
        else
          g.reduced_edges.push_back(m);
      }
      gens.push_back(std::move(g));
    }
    return gens;
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  struct MaskTag {};

  Hypergraph(MaskTag, int n, std::vector<std::uint32_t> masks)
      : n_(n), edges_(std::move(masks)) {
    check_qubit_count(n_);
    const std::uint32_t top = std::uint32_t(1) << n_;
    for (std::uint32_t m : edges_) {
      if (m == 0) throw std::invalid_argument("Hypergraph: empty edge");
      if (m >= top) throw std::invalid_argument("Hypergraph: vertex index out of range");
    }
    cancel_pairs(edges_);
  }

  static void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits)
      throw std::invalid_argument("Hypergraph: qubit count must be in [1, 24]");
  }

  // Sort, then drop edges that appear an even number of times.
  static void cancel_pairs(std::vector<std::uint32_t>& masks) {
    std::sort(masks.begin(), masks.end());
    std::vector<std::uint32_t> kept;
    kept.reserve(masks.size());
    for (std::size_t i = 0; i < masks.size();) {
      std::size_t j = i;
      while (j < masks.size() && masks[j] == masks[i]) ++j;
      if ((j - i) & 1) kept.push_back(masks[i]);
      i = j;
    }
    masks = std::move(kept);
  }

  static std::vector<std::uint32_t> masks_from_vertex_lists(
      int n, const std::vector<std::vector<int>>& edges) {
    check_qubit_count(n);
    std::vector<std::uint32_t> masks;
    masks.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.empty()) throw std::invalid_argument("Hypergraph: empty edge");
      std::uint32_t m = 0;
      for (int v : e) {
        if (v < 0 || v >= n) throw std::invalid_argument("Hypergraph: vertex index out of range");
        const std::uint32_t bit = std::uint32_t(1) << v;
        if (m & bit) throw std::invalid_argument("Hypergraph: repeated vertex within an edge");
        m |= bit;
      }
      masks.push_back(m);
    }
    return masks;
  }

  static std::vector<int> vertices_of(std::uint32_t m) {
    std::vector<int> vs;
    for (int v = 0; m; ++v, m >>= 1)
      if (m & 1) vs.push_back(v);
    return vs;
  }

  int n_;
  std::vector<std::uint32_t> edges_;
};

inline Hypergraph Hypergraph::parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("hypergraph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw std::invalid_argument("hypergraph JSON: expected object with \"n\" and \"edges\"");
  if (!j["n"].is_number_integer())
    throw std::invalid_argument("hypergraph JSON: \"n\" must be an integer");
  const std::int64_t n = j["n"].get<std::int64_t>();
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("hypergraph JSON: \"n\" must be in [1, 24]");
  if (!j["edges"].is_array())
    throw std::invalid_argument("hypergraph JSON: \"edges\" must be an array");
  std::vector<std::vector<int>> edges;
  for (const auto& je : j["edges"]) {
    if (!je.is_array()) throw std::invalid_argument("hypergraph JSON: edge must be an array");
    std::vector<int> e;
    for (const auto& jv : je) {
      if (!jv.is_number_integer())
        throw std::invalid_argument("hypergraph JSON: vertex must be an integer");
      const std::int64_t v = jv.get<std::int64_t>();
      if (v < 0 || v >= n) throw std::invalid_argument("hypergraph JSON: vertex index out of range");
      e.push_back(static_cast<int>(v));
    }
    edges.push_back(std::move(e));
  }
  return Hypergraph(static_cast<int>(n), edges);
}

inline std::string Hypergraph::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : edge_vertex_lists()) j["edges"].push_back(e);
  return j.dump();
}

}  // namespace hyperbell
