// hyperbell: build hypergraph states, query their X/Z correlations exactly
// (closed form and simulator, cross-checked), evaluate Bell/Hardy families
// against classical bounds, reproduce the traced-correlation tables, and
// decide polytope membership of noisy behaviors by linear programming.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperbell/bell.hpp"
#include "hyperbell/closed_form.hpp"
#include "hyperbell/hypergraph.hpp"
#include "hyperbell/lhv.hpp"
#include "hyperbell/polytope.hpp"
#include "hyperbell/sign_state.hpp"

namespace hb = hyperbell;
using hb::Dyadic;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_value(const Dyadic& d, bool decimal) {
  return decimal ? fmt6(d.to_double()) : d.str();
}

struct StateSource {
  std::string hg_file;
  int uniform = 0;
  int n = 0;

  hb::Hypergraph hypergraph() const {
    if (!hg_file.empty()) return hb::Hypergraph::parse_json(read_file(hg_file));
    if (uniform == 0) throw std::runtime_error("need --hg or --uniform");
    if (n == 0) throw std::runtime_error("--uniform requires --n");
    return hb::Hypergraph::complete_k_uniform(n, uniform);
  }
};

int run_state(const std::string& hg_file, bool print, const std::string& out) {
  const auto h = hb::Hypergraph::parse_json(read_file(hg_file));
  const auto st = hb::SignState::build(h);
  std::size_t minus = 0;
  for (std::size_t x = 0; x < st.dimension(); ++x)
    if (st.sign(std::uint32_t(x)) < 0) ++minus;
  std::cout << "qubits: " << h.qubit_count() << "\n";
  std::cout << "edges: " << h.edge_masks().size() << "\n";
  std::cout << "negative signs: " << minus << " of " << st.dimension() << "\n";
  std::cout << "stabilizer check: " << (hb::verify_stabilizers(st, h) ? "ok" : "FAILED") << "\n";
  if (print) {
    if (h.qubit_count() > 6) {
      std::cout << "(sign listing limited to n <= 6; use --out for a dump)\n";
    } else {
      for (std::size_t x = 0; x < st.dimension(); ++x) {
        std::string label;
        for (int i = h.qubit_count() - 1; i >= 0; --i) label += (x >> i & 1u) ? '1' : '0';
        std::cout << (st.sign(std::uint32_t(x)) < 0 ? '-' : '+') << "|" << label << ">\n";
      }
    }
  }
  if (!out.empty()) {
    const auto bytes = st.serialize();
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + out);
    os.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    std::cout << "wrote " << bytes.size() << " bytes to " << out << "\n";
  }
  return 0;
}

int run_corr(const StateSource& src, const std::string& pauli, const std::string& mode,
             const std::string& format, bool decimal) {
  const auto h = src.hypergraph();
  const auto ps = hb::PauliString::parse(pauli);
  if (ps.n != h.qubit_count()) throw std::runtime_error("--pauli length must equal qubit count");
  const int m = std::popcount(ps.x_mask);
  const int traced = ps.n - std::popcount(ps.x_mask) - std::popcount(ps.z_mask);

  std::optional<Dyadic> closed;
  if (src.uniform != 0)
    closed = hb::closed_form_value({src.uniform, ps.n, m, traced});
  else if (mode == "closed-form" || mode == "check")
    throw std::runtime_error("closed forms cover the complete uniform families; use --uniform");

  std::optional<Dyadic> simulated;
  if (mode != "closed-form") simulated = hb::expectation(hb::SignState::build(h), ps);

  bool mismatch = false;
  if (format == "json") {
    nlohmann::json j;
    j["pauli"] = pauli;
    j["closed_form"] = closed ? hb::to_json(*closed) : nlohmann::json(nullptr);
    j["simulator"] = simulated ? hb::to_json(*simulated) : nlohmann::json(nullptr);
    if (mode == "check" && closed && simulated) {
      mismatch = *closed != *simulated;
      j["match"] = !mismatch;
    }
    std::cout << j.dump() << "\n";
  } else {
    if (mode == "closed-form" || mode == "check") {
      if (closed)
        std::cout << "closed-form: " << fmt_value(*closed, decimal) << "\n";
      else
        std::cout << "closed-form: not covered (simulator only)\n";
    }
    if (simulated) std::cout << "simulator:   " << fmt_value(*simulated, decimal) << "\n";
    if (mode == "check" && closed && simulated) {
      mismatch = *closed != *simulated;
      std::cout << (mismatch ? "MISMATCH\n" : "MATCH\n");
    }
  }
  if (mode == "closed-form" && !closed)
    throw std::runtime_error("no closed form for this layout; rerun with --simulate");
  return mismatch ? 1 : 0;
}

int run_bell(const StateSource& src, const std::string& family_name, int n,
             const std::string& classical, int trace, const std::string& format, bool decimal) {
  const hb::Family family = hb::parse_family(family_name);
  const auto h = src.hypergraph();
  if (h.qubit_count() != n) throw std::runtime_error("--n must match the hypergraph size");
  const auto st = hb::SignState::build(h);

  nlohmann::json j;
  j["family"] = family_name;
  j["n"] = n;

  if (trace > 0 || family == hb::Family::separability) {
    // traced rows evaluate the optimal-sign full-correlation family
    if (family != hb::Family::mermin_even && family != hb::Family::mermin_odd &&
        family != hb::Family::separability)
      throw std::runtime_error("--trace applies to the mermin/separability families");
    const hb::Parity parity =
        family == hb::Family::mermin_even ? hb::Parity::even : hb::Parity::odd;
    const Dyadic value = hb::best_sign_value(st, trace, parity);
    const bool separability_bound = family == hb::Family::separability;
    const double bound = separability_bound
                             ? std::sqrt(2.0)
                             : hb::classical_bound_formula(family, n - trace).to_double();
    if (format == "json") {
      j["traced"] = trace;
      j["quantum_value"] = hb::to_json(value);
      j["bound"] = bound;
      j["violated"] = value.to_double() > bound;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "quantum value (optimal signs, " << trace
                << " traced): " << fmt_value(value, decimal) << "\n";
      std::cout << (separability_bound ? "separability bound: " : "classical bound: ")
                << fmt6(bound) << "\n";
      std::cout << "ratio: " << fmt6(value.to_double() / bound) << "\n";
      std::cout << (value.to_double() > bound ? "VIOLATED\n" : "not violated\n");
    }
    return 0;
  }

  const auto expr = hb::build_expression(family, n);
  const Dyadic value = hb::quantum_value(expr, st);
  Dyadic bound = expr.bound_value;
  std::string bound_src = expr.bound_provenance;
  if (classical == "brute") {
    // the inequality bound: the classical minimum for the >= 0 forms, the
    // classical maximum for the max-form families
    bound = expr.direction == hb::BellExpression::Direction::geq_zero
                ? hb::brute_classical_min(expr)
                : hb::brute_classical_max(expr);
    bound_src = "brute-force";
  }
  const bool violated = expr.direction == hb::BellExpression::Direction::geq_zero
                            ? value < Dyadic(0)
                            : value.abs() > bound;
  if (format == "json") {
    j["terms"] = expr.terms.size();
    j["quantum_value"] = hb::to_json(value);
    j["classical_bound"] = hb::to_json(bound);
    j["bound_provenance"] = bound_src;
    j["violated"] = violated;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "terms: " << expr.terms.size() << "\n";
    std::cout << "quantum value: " << fmt_value(value, decimal) << "\n";
    std::cout << "classical bound (" << bound_src << "): " << fmt_value(bound, decimal) << "\n";
    std::cout << (violated ? "VIOLATED\n" : "not violated\n");
  }
  return 0;
}

int run_hardy(int n) {
  const auto h = hb::Hypergraph::single_edge(n);
  const auto st = hb::SignState::build(h);
  const auto zero_events = hb::stabilizer_zero_events(h);
  for (const auto& ev : zero_events) {
    const Dyadic p = hb::outcome_probability(st, hb::parse_settings(ev.settings),
                                             hb::parse_outcomes(ev.outcomes));
    if (!p.is_zero()) throw std::runtime_error("stabilizer event with nonzero probability");
  }
  std::vector<hb::MeasurementEvent> targets;
  const std::string all_x(n, 'X');
  for (std::uint32_t r = 0; r < (std::uint32_t(1) << n); ++r) {
    const int minus = std::popcount(r);
    if (minus < 2 || minus == n) continue;
    std::string outcomes(n, '+');
    for (int i = 0; i < n; ++i)
      if (r >> i & 1u) outcomes[i] = '-';
    targets.push_back({all_x, outcomes});
  }
  const auto verdicts = hb::hardy_check_all(n, zero_events, targets);
  std::size_t forced = 0;
  for (bool v : verdicts) forced += v;
  const Dyadic q = hb::outcome_probability(st, hb::parse_settings(targets.front().settings),
                                           hb::parse_outcomes(targets.front().outcomes));
  std::cout << "zero events from the stabilizer: " << zero_events.size()
            << " (all have probability 0 on the state)\n";
  std::cout << "targets forced to zero by any local model: " << forced << "/" << targets.size()
            << "\n";
  std::cout << "quantum probability of each target: " << q.str() << "\n";
  const bool valid = forced == targets.size() && q > Dyadic(0);
  std::cout << (valid ? "Hardy argument: VALID\n" : "Hardy argument: INVALID\n");
  return valid ? 0 : 1;
}

int run_lp_noise(const std::string& model_name, double tol, const std::string& format) {
  const hb::Model model = model_name == "hybrid" ? hb::Model::hybrid : hb::Model::full_local;
  const auto result = hb::noise_threshold(hb::Hypergraph::single_edge(3), model, tol);
  if (format == "json") {
    nlohmann::json j;
    j["model"] = model_name;
    j["epsilon"] = result.epsilon;
    j["member_at_zero"] = result.member_at_zero;
    j["lambda"] = result.last_outside.lambda;
    j["C"] = result.last_outside.bound_c;
    std::cout << j.dump() << "\n";
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "epsilon* = %.4f", result.epsilon);
    std::cout << buf << "\n";
  }
  return 0;
}

struct TableRow {
  int k = 0;
  Dyadic value;
  std::optional<Dyadic> classical_bound;
  bool separability_bound = false;
};

int run_table(int name, const std::string& format) {
  int n, uniform, max_k, classical_rows;
  if (name == 7) {
    n = 12;
    uniform = 4;
    max_k = 5;
    classical_rows = 3;  // k = 0..2 carry a classical bound
  } else if (name == 9) {
    n = 11;
    uniform = 3;
    max_k = 4;
    classical_rows = 0;  // every row is held against the separability bound
  } else {
    throw std::runtime_error("--name must be 7 or 9");
  }
  const auto st = hb::SignState::build(hb::Hypergraph::complete_k_uniform(n, uniform));
  std::vector<TableRow> rows;
  for (int k = 0; k <= max_k; ++k) {
    TableRow row;
    row.k = k;
    // the k = 0 row uses the even-m family, lost-qubit rows the odd-m one
    row.value = hb::best_sign_value(st, k, k == 0 ? hb::Parity::even : hb::Parity::odd);
    row.separability_bound = k >= classical_rows;
    if (!row.separability_bound) row.classical_bound = Dyadic::pow2((n - k) / 2);
    rows.push_back(row);
  }

  const double sqrt2 = std::sqrt(2.0);
  if (format == "json") {
    nlohmann::json j;
    j["table"] = name;
    j["n"] = n;
    j["uniform"] = uniform;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json jr;
      jr["k"] = r.k;
      jr["quantum_value"] = hb::to_json(r.value);
      jr["classical_bound"] =
          r.classical_bound ? hb::to_json(*r.classical_bound) : nlohmann::json(nullptr);
      jr["separability_bound"] = r.separability_bound;
      jr["ratio"] =
          r.value.to_double() / (r.classical_bound ? r.classical_bound->to_double() : sqrt2);
      j["rows"].push_back(std::move(jr));
    }
    std::cout << j.dump() << "\n";
  } else if (format == "csv") {
    std::cout << "k,quantum_value,classical_bound,separability_bound,ratio\n";
    for (const auto& r : rows) {
      const double bound = r.classical_bound ? r.classical_bound->to_double() : sqrt2;
      std::cout << r.k << "," << fmt6(r.value.to_double()) << ","
                << (r.classical_bound ? fmt6(r.classical_bound->to_double()) : "") << ","
                << (r.separability_bound ? "sqrt2" : "") << ","
                << fmt6(r.value.to_double() / bound) << "\n";
    }
  } else {
    std::printf("%2s  %14s  %15s  %18s  %10s\n", "k", "quantum value", "classical bound",
                "separability bound", "ratio");
    for (const auto& r : rows) {
      const double bound = r.classical_bound ? r.classical_bound->to_double() : sqrt2;
      std::printf("%2d  %14s  %15s  %18s  %10s\n", r.k, fmt6(r.value.to_double()).c_str(),
                  r.classical_bound ? fmt6(r.classical_bound->to_double()).c_str() : "-",
                  r.separability_bound ? "sqrt2" : "-", fmt6(r.value.to_double() / bound).c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact correlations, Bell tests and polytope membership for hypergraph states"};
  app.require_subcommand(1);

  // state
  auto* state_cmd = app.add_subcommand("state", "build a hypergraph state from JSON");
  std::string state_hg, state_out;
  bool state_print = false;
  state_cmd->add_option("--hg", state_hg, "hypergraph JSON file")->required();
  state_cmd->add_flag("--print", state_print, "list the basis signs (n <= 6)");
  state_cmd->add_option("--out", state_out, "write the packed sign dump");

  // corr
  auto* corr_cmd = app.add_subcommand("corr", "evaluate one X/Z/I correlation");
  StateSource corr_src;
  std::string corr_pauli;
  bool corr_cf = false, corr_sim = false, corr_check = false, corr_decimal = false;
  std::string corr_format = "text";
  corr_cmd->add_option("--hg", corr_src.hg_file, "hypergraph JSON file");
  corr_cmd->add_option("--uniform", corr_src.uniform, "complete k-uniform family");
  corr_cmd->add_option("--n", corr_src.n, "qubit count for --uniform");
  corr_cmd->add_option("--pauli", corr_pauli, "symbols over I, X, Z (char i = qubit i)")
      ->required();
  corr_cmd->add_flag("--closed-form", corr_cf, "closed form only");
  corr_cmd->add_flag("--simulate", corr_sim, "simulator only");
  corr_cmd->add_flag("--check", corr_check, "run both engines and compare");
  corr_cmd->add_option("--format", corr_format, "text|json");
  corr_cmd->add_flag("--decimal", corr_decimal, "decimal output (6 significant digits)");

  // bell
  auto* bell_cmd = app.add_subcommand("bell", "evaluate a Bell expression family");
  StateSource bell_src;
  std::string bell_family, bell_classical = "formula", bell_format = "text";
  int bell_n = 0, bell_trace = 0;
  bool bell_decimal = false;
  bell_cmd
      ->add_option("--family", bell_family,
                   "hardy3|svetlichny3|hardyN|mermin-even|mermin-odd|separability")
      ->required();
  bell_cmd->add_option("--n", bell_n, "party count")->required();
  bell_cmd->add_option("--hg", bell_src.hg_file, "hypergraph JSON file");
  bell_cmd->add_option("--uniform", bell_src.uniform, "complete k-uniform family");
  bell_cmd->add_option("--classical", bell_classical, "formula|brute");
  bell_cmd->add_option("--trace", bell_trace, "trace out the last k qubits");
  bell_cmd->add_option("--format", bell_format, "text|json");
  bell_cmd->add_flag("--decimal", bell_decimal, "decimal output");

  // hardy
  auto* hardy_cmd = app.add_subcommand("hardy", "run the local-model exhaustion");
  int hardy_n = 3;
  hardy_cmd->add_option("--n", hardy_n, "qubit count (single full edge)")->required();

  // lp noise
  auto* lp_cmd = app.add_subcommand("lp", "linear-programming membership");
  lp_cmd->require_subcommand(1);
  auto* noise_cmd = lp_cmd->add_subcommand("noise", "bisect the white-noise threshold");
  std::string lp_model = "hybrid", lp_format = "text";
  double lp_tol = 1e-4;
  noise_cmd->add_option("--model", lp_model, "hybrid|local")->required();
  noise_cmd->add_option("--tol", lp_tol, "bisection tolerance");
  noise_cmd->add_option("--format", lp_format, "text|json");

  // table
  auto* table_cmd = app.add_subcommand("table", "reproduce a traced-correlation table");
  int table_name = 0;
  std::string table_format = "text";
  table_cmd->add_option("--name", table_name, "7 or 9")->required();
  table_cmd->add_option("--format", table_format, "text|csv|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*state_cmd) return run_state(state_hg, state_print, state_out);
    if (*corr_cmd) {
      if (int(corr_cf) + int(corr_sim) + int(corr_check) > 1)
        throw std::runtime_error("pick one of --closed-form/--simulate/--check");
      std::string mode = "simulate";
      if (corr_cf) mode = "closed-form";
      if (corr_check || (!corr_cf && !corr_sim && corr_src.uniform != 0)) mode = "check";
      return run_corr(corr_src, corr_pauli, mode, corr_format, corr_decimal);
    }
    if (*bell_cmd) {
      bell_src.n = bell_n;
      if (bell_classical != "formula" && bell_classical != "brute")
        throw std::runtime_error("--classical must be formula or brute");
      return run_bell(bell_src, bell_family, bell_n, bell_classical, bell_trace, bell_format,
                      bell_decimal);
    }
    if (*hardy_cmd) return run_hardy(hardy_n);
    if (*noise_cmd) {
      if (lp_model != "hybrid" && lp_model != "local")
        throw std::runtime_error("--model must be hybrid or local");
      return run_lp_noise(lp_model, lp_tol, lp_format);
    }
    if (*table_cmd) return run_table(table_name, table_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
