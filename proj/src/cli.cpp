#include "qmorse/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qmorse/algebra.hpp"
#include "qmorse/errors.hpp"
#include "qmorse/expr.hpp"
#include "qmorse/flow.hpp"
#include "qmorse/gevrey.hpp"
#include "qmorse/json_io.hpp"
#include "qmorse/milnor.hpp"
#include "qmorse/normal_form.hpp"
#include "qmorse/spectrum.hpp"

namespace qmorse {

namespace {

constexpr int kOk = 0;
constexpr int kParse = 2;
constexpr int kDomain = 3;
constexpr int kResource = 4;

struct Caps {
  int t_cap = 8;
  std::string weight_cap = "20";

  Truncation truncation() const { return Truncation::make(t_cap, parse_rational(weight_cap)); }
};

void add_caps(CLI::App* cmd, Caps& caps) {
  cmd->add_option("--t-cap", caps.t_cap, "t-adic cap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--weight-cap", caps.weight_cap, "weight cap, integer or half-integer");
}

// "@file.json" loads a serialized series; anything else is an expression.
QSeries operand(const std::string& text, const Truncation& tr) {
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw DomainError("cannot open " + text.substr(1));
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ParseError(e.byte, "malformed JSON in " + text.substr(1));
    }
    return to_normal(qseries_from_json(j));
  }
  return parse_qseries(text, tr);
}

Json exact_and_float(const Coefficient& c) {
  std::complex<double> z = c.to_complex();
  return {{"exact", c.to_string()}, {"float", {z.real(), z.imag()}}};
}

std::string monomial_name(const PlanePoly::Exp& e) {
  if (e.first == 0 && e.second == 0) return "1";
  std::string out;
  auto part = [&out](const char* v, std::uint32_t n) {
    if (n == 0) return;
    if (!out.empty()) out += '*';
    out += v;
    if (n > 1) out += '^' + std::to_string(n);
  };
  part("x", e.first);
  part("y", e.second);
  return out;
}

struct FamilyOptions {
  std::string perturbation;
  std::string hamiltonian;
  int order = 4;
  int weight_cap2 = 0;  // 0: automatic
  bool rescale = false;

  QSeries family() const {
    if (perturbation.empty() == hamiltonian.empty()) {
      throw CLI::ValidationError("exactly one of --perturbation and --hamiltonian is required");
    }
    Truncation tr = Truncation{order, 200};
    if (!hamiltonian.empty()) return operand(hamiltonian, tr);
    return QSeries::harmonic(tr) + operand(perturbation, tr);
  }

  NormalFormOptions options() const {
    NormalFormOptions o;
    o.order = order;
    if (weight_cap2 > 0) o.weight_cap2 = weight_cap2;
    return o;
  }
};

void add_family(CLI::App* cmd, FamilyOptions& f, bool with_rescale) {
  cmd->add_option("--perturbation", f.perturbation, "added to p^2 + q^2");
  cmd->add_option("--hamiltonian", f.hamiltonian, "full family f(t)");
  cmd->add_option("--order", f.order, "t-order")->check(CLI::NonNegativeNumber);
  cmd->add_option("--weight-cap2", f.weight_cap2, "doubled weight cap (default: automatic)");
  if (with_rescale) cmd->add_flag("--rescale-t", f.rescale, "report in hbar t instead of t");
}

std::pair<int, int> parse_window(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--window expects K1:K2");
  try {
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--window expects K1:K2");
  }
}

// Whitespace-separated values, '#' comments. Exact when every entry is rational.
std::pair<std::vector<Coefficient>, std::vector<double>> read_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    std::string w;
    while (ls >> w) {
      if (w.back() == ',') w.pop_back();
      if (!w.empty()) words.push_back(w);
    }
  }
  std::vector<Coefficient> exact;
  std::vector<double> approx;
  bool all_exact = true;
  for (const auto& w : words) {
    try {
      exact.push_back(Coefficient(parse_rational(w)));
    } catch (const std::invalid_argument&) {
      all_exact = false;
    }
    try {
      std::size_t used = 0;
      approx.push_back(std::stod(w, &used));
      if (used != w.size()) throw std::invalid_argument(w);
    } catch (const std::exception&) {
      throw DomainError("not a number: " + w);
    }
  }
  if (!all_exact) exact.clear();
  return {exact, approx};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Morse normal forms, spectra and Borel diagnostics", "qmorse"};
  app.require_subcommand(1);

  Caps caps;
  std::vector<std::string> exprs;
  std::map<std::string, CLI::App*> algebra_cmds;
  for (const char* name : {"mul", "commutator", "dagger", "borel", "symbol"}) {
    CLI::App* cmd = app.add_subcommand(name, std::string(name) + " of operator expressions");
    const std::size_t arity = (std::string(name) == "mul" || std::string(name) == "commutator") ? 2 : 1;
    cmd->add_option("EXPR", exprs, "operator expression or @file.json")->required()->expected(static_cast<int>(arity));
    add_caps(cmd, caps);
    algebra_cmds[name] = cmd;
  }

  std::string flow_h, flow_f;
  int flow_order = 4;
  CLI::App* flow = app.add_subcommand("flow", "Heisenberg flow of an observable");
  flow->add_option("--hamiltonian", flow_h)->required();
  flow->add_option("--observable", flow_f)->required();
  flow->add_option("--order", flow_order)->check(CLI::NonNegativeNumber);
  flow->add_option("--weight-cap", caps.weight_cap, "weight cap, integer or half-integer");

  FamilyOptions fam;
  CLI::App* nf = app.add_subcommand("normal-form", "quantum Morse normal form");
  add_family(nf, fam, true);

  int level = -1;
  CLI::App* spec = app.add_subcommand("spectrum", "perturbative spectrum E_n(hbar, t)");
  add_family(spec, fam, true);
  spec->add_option("--level", level, "concrete level n")->check(CLI::NonNegativeNumber);

  CLI::App* rs = app.add_subcommand("rs", "Rayleigh-Schroedinger expansion of one level");
  add_family(rs, fam, false);
  rs->add_option("--level", level)->required()->check(CLI::NonNegativeNumber);

  double diag_t = 0, diag_hbar = 1;
  int diag_dim = 40, diag_levels = 4;
  bool diag_csv = false;
  CLI::App* diag = app.add_subcommand("diag", "truncated Fock-space diagonalization");
  add_family(diag, fam, false);
  diag->add_option("--t", diag_t)->required();
  diag->add_option("--hbar", diag_hbar)->check(CLI::PositiveNumber);
  diag->add_option("--dim", diag_dim)->check(CLI::PositiveNumber);
  diag->add_option("--levels", diag_levels)->check(CLI::PositiveNumber);
  diag->add_flag("--csv", diag_csv, "print the matrix as CSV instead");

  std::string from_spectrum, coeffs_file, window;
  std::string diagonal_weight;
  bool gevrey_csv = false;
  CLI::App* gev = app.add_subcommand("gevrey", "Borel-plane growth diagnostics");
  gev->add_option("--from-spectrum", from_spectrum, "perturbation whose spectrum is analysed");
  gev->add_option("--coeffs", coeffs_file, "file of coefficients alpha_0, alpha_1, ...");
  gev->add_option("--order", fam.order)->check(CLI::NonNegativeNumber);
  gev->add_option("--level", level)->check(CLI::NonNegativeNumber);
  gev->add_option("--diagonal-weight", diagonal_weight, "w in lambda = t hbar^w (default from the degree)");
  gev->add_option("--window", window, "K1:K2");
  gev->add_flag("--csv", gevrey_csv, "k,alpha,beta table instead of JSON");
  GevreyThresholds thresholds;
  gev->add_option("--band-ratio", thresholds.band_ratio, "max/min ratio for a consistent verdict");
  gev->add_option("--max-slope", thresholds.max_slope, "log-log slope above which growth is too fast");
  gev->add_option("--min-nonzero", thresholds.min_nonzero, "nonzero coefficients needed for a verdict");

  std::string trace_expr;
  unsigned trace_levels = 8;
  CLI::App* trace = app.add_subcommand("trace", "hbar-trace series");
  trace->add_option("EXPR", trace_expr)->required();
  trace->add_option("--levels", trace_levels);
  add_caps(trace, caps);

  std::string symbol;
  std::vector<std::string> params;
  int cutoff = 8;
  CLI::App* milnor = app.add_subcommand("milnor", "Milnor number of a plane germ");
  CLI::App* versal = app.add_subcommand("versal", "versality quotient and check");
  for (CLI::App* cmd : {milnor, versal}) {
    cmd->add_option("--symbol", symbol)->required();
    cmd->add_option("--cutoff", cutoff)->check(CLI::NonNegativeNumber);
  }
  versal->add_option("--params", params)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qmorse: " << e.what() << "\n";
    return kParse;
  }

  try {
    Json result;
    for (const auto& [name, cmd] : algebra_cmds) {
      if (!cmd->parsed()) continue;
      const Truncation tr = caps.truncation();
      QSeries f = operand(exprs.at(0), tr);
      result["command"] = name;
      if (name == "mul") {
        result["result"] = to_json(mul(f, operand(exprs.at(1), tr)), true);
      } else if (name == "commutator") {
        result["result"] = to_json(commutator(f, operand(exprs.at(1), tr)), true);
      } else if (name == "dagger") {
        result["result"] = to_json(dagger(f), true);
      } else if (name == "borel") {
        result["result"] = to_json(borel(f), true);
      } else {
        result["total"] = to_json(total_symbol(f), true);
        result["principal"] = to_json(principal_symbol(f), true);
      }
    }
    if (flow->parsed()) {
      const Truncation tr = Truncation::make(flow_order, parse_rational(caps.weight_cap));
      QSeries h = operand(flow_h, tr);
      QSeries f = operand(flow_f, tr);
      result = {{"command", "flow"}, {"order", flow_order},
                {"result", to_json(integrate_heisenberg(h, f, flow_order), true)}};
    }
    if (nf->parsed() || spec->parsed()) {
      NormalFormResult r = quantum_morse(fam.family(), fam.options());
      ScalarSeries e = fam.rescale ? rescale_t(r.spectrum) : r.spectrum;
      result["command"] = nf->parsed() ? "normal-form" : "spectrum";
      result["order"] = r.order;
      result["t_variable"] = fam.rescale ? "hbar*t" : "t";
      if (level >= 0 && spec->parsed()) {
        result["level"] = level;
        result["spectrum"] = to_json(evaluate_level(e, static_cast<unsigned>(level)), true);
      } else {
        result["spectrum"] = to_json(e, true);
      }
      if (nf->parsed()) {
        result["scale"] = exact_and_float(r.scale);
        result["shift"] = to_json(r.shift, true);
        result["g"] = to_json(r.g, true);
        result["u"] = to_json(r.u, true);
        result["u_inv"] = to_json(r.u_inv, true);
        result["generator"] = to_json(r.h, true);
        result["weight_cap"] = rational_to_string(r.truncation.weight_cap());
        result["verified"] = verify_normal_form(r);
      }
    }
    if (rs->parsed()) {
      result = {{"command", "rs"}, {"level", level}, {"order", fam.order},
                {"energy", to_json(rs_perturbation(fam.family(), static_cast<unsigned>(level), fam.order), true)}};
    }
    if (diag->parsed()) {
      QSeries f = fam.family();
      if (diag_csv) {
        write_csv(out, fock_matrix(f, diag_dim, diag_t, diag_hbar));
        return kOk;
      }
      Diagonalization d = diagonalize(f, diag_t, diag_hbar, diag_dim, diag_levels);
      Json values = Json::array();
      for (const auto& v : d.values) values.push_back({v.real(), v.imag()});
      result = {{"command", "diag"}, {"t", diag_t}, {"hbar", diag_hbar}, {"dim", diag_dim},
                {"values", values}, {"hermitian", d.hermitian}, {"converged", d.converged}};
      if (!d.warning.empty()) {
        result["warning"] = d.warning;
        err << "qmorse: warning: " << d.warning << "\n";
      }
    }
    if (gev->parsed()) {
      if (from_spectrum.empty() == coeffs_file.empty()) {
        throw CLI::ValidationError("exactly one of --from-spectrum and --coeffs is required");
      }
      std::vector<Coefficient> exact;
      std::vector<double> approx;
      std::string source;
      if (!from_spectrum.empty()) {
        fam.perturbation = from_spectrum;
        QSeries f = fam.family();
        Rational w;
        if (!diagonal_weight.empty()) {
          w = parse_rational(diagonal_weight);
        } else {
          Rational w2(f.t_coefficient(1).max_weight2() - 2, 2);
          w2.canonicalize();
          w = w2;
        }
        NormalFormResult r = quantum_morse(f, fam.options());
        const unsigned n = level < 0 ? 0 : static_cast<unsigned>(level);
        exact = extract_diagonal(r.spectrum, n, w);
        source = "spectrum level " + std::to_string(n) + ", w = " + rational_to_string(w);
      } else {
        std::tie(exact, approx) = read_coefficients(coeffs_file);
        source = coeffs_file;
      }
      const int available = static_cast<int>(exact.empty() ? approx.size() : exact.size());
      auto [k1, k2] = window.empty() ? std::pair<int, int>{1, available - 2} : parse_window(window);
      BorelReport report = exact.empty() ? gevrey_report(approx, k1, k2, thresholds)
                                       : gevrey_report(exact, k1, k2, thresholds);
      report.source = source;
      if (gevrey_csv) {
        out << "k,alpha,beta\n";
        out.precision(17);
        for (std::size_t k = 0; k < report.alpha.size(); ++k) {
          out << k << ',' << report.alpha[k] << ',' << report.beta[k] << '\n';
        }
        return kOk;
      }
      result = to_json(report);
      result["command"] = "gevrey";
      if (!exact.empty()) {
        Json ex = Json::array();
        for (const auto& c : exact) ex.push_back(c.to_string());
        result["alpha_exact"] = ex;
      }
    }
    if (trace->parsed()) {
      QSeries f = operand(trace_expr, caps.truncation());
      ScalarSeries tr = trace_hbar(f, trace_levels);
      result = {{"command", "trace"}, {"levels", trace_levels},
                {"trace", to_json(tr, true)}, {"borel", to_json(borel(tr), true)}};
    }
    if (milnor->parsed() || versal->parsed()) {
      PlaneFamily family = parse_plane_family(symbol, milnor->parsed() ? std::vector<std::string>{} : params);
      QuotientDimension q = milnor->parsed() ? milnor_number(family.base, cutoff)
                                             : versality_dimension(family.base, cutoff);
      Json basis = Json::array();
      for (const auto& e : q.basis) basis.push_back(monomial_name(e));
      result = {{"command", milnor->parsed() ? "milnor" : "versal"}, {"cutoff", cutoff},
                {"dim", q.dim}, {"basis", basis}, {"stabilized", q.stabilized}};
      if (versal->parsed()) result["versal"] = check_versal(family, cutoff).versal;
      if (!q.stabilized) err << "qmorse: warning: dimension not stabilized at cutoff " << cutoff << "\n";
    }
    out << dump(result) << "\n";
    return kOk;
  } catch (const ParseError& e) {
    err << "qmorse: " << e.what() << "\n";
    return kParse;
  } catch (const CLI::ValidationError& e) {
    err << "qmorse: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    err << "qmorse: invalid number: " << e.what() << "\n";
    return kParse;
  } catch (const DomainError& e) {
    err << "qmorse: " << e.what() << "\n";
    return kDomain;
  } catch (const ResourceError& e) {
    err << "qmorse: " << e.what() << "\n";
    return kResource;
  } catch (const std::bad_alloc&) {
    err << "qmorse: out of memory\n";
    return kResource;
  }
}

}  // namespace qmorse
