#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "biwave/core.hpp"
#include "biwave/duhamel.hpp"
#include "biwave/elasticity.hpp"
#include "biwave/field.hpp"
#include "biwave/grid.hpp"
#include "biwave/parallel.hpp"
#include "biwave/params.hpp"
#include "biwave/quadrature.hpp"
#include "biwave/solvers.hpp"
#include "biwave/spectral.hpp"
#include "biwave/verification.hpp"

namespace biwave {

enum class Task { solve, oracle_compare, residual, initial_check, elastokit_demo };

inline const char* task_name(Task t) {
  switch (t) {
    case Task::solve: return "solve";
    case Task::oracle_compare: return "oracle-compare";
    case Task::residual: return "residual";
    case Task::initial_check: return "initial-check";
    case Task::elastokit_demo: return "elastokit-demo";
  }
  return "unknown";
}

/// Parsed scenario file: problem parameters, Cauchy data, optional forcing,
/// evaluation grid and the task to run.
struct Scenario {
  BiwaveParams params{1.0, 0.5, 1};
  std::optional<ElasticParams> elastic;
  InitialData data = InitialData::zero(1);
  std::optional<ForcingField> forcing;
  double base_freq = 1.0;
  std::vector<AxisRange> axes;
  std::vector<double> times;
  Task task = Task::solve;
  std::optional<double> tolerance;
  std::optional<std::string> out_path;
  SolverConfig solver;
  int tau_order = 0;        // duhamel outer order; 0 = automatic
  double residual_h = 1e-2; // step of the residual / elasticity stencils
  double probe_eps = 1e-2;  // anchor of the initial-condition stencil

  EvalGrid grid() const { return EvalGrid(axes, times); }
};

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace detail {

struct ParseCursor {
  std::string text;
  std::size_t pos = 0;
  int line = 1;

  [[noreturn]] void error(const std::string& what) const {
    fail(errc::parse_error, "line " + std::to_string(line) + ": " + what);
  }
  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_' || text[pos] == '-'))
      ++pos;
    return text.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) error("expected a number");
    pos += static_cast<std::size_t>(end - begin);
    // rational coefficients: p/q
    if (peek() == '/') {
      ++pos;
      const char* dbegin = text.c_str() + pos;
      char* dend = nullptr;
      const double d = std::strtod(dbegin, &dend);
      if (dend == dbegin || d == 0.0) error("bad rational denominator");
      pos += static_cast<std::size_t>(dend - dbegin);
      return v / d;
    }
    return v;
  }

  long integer() {
    const double v = number();
    const long n = std::lround(v);
    if (static_cast<double>(n) != v) error("expected an integer");
    return n;
  }
};

// linear form with integer coefficients: "2 x1 - x2" -> wavevector
inline Point parse_linform(ParseCursor& c, int max_dim, int& seen_dim, double base_freq) {
  Point k(max_dim);
  bool any = false;
  double sign = 1.0;
  if (c.eat('-')) sign = -1.0;
  else c.eat('+');
  while (true) {
    double coef = sign;
    char p = c.peek();
    if (p == '-' || p == '+' || (p >= '0' && p <= '9')) {
      coef = sign * static_cast<double>(c.integer());
      c.eat('*');
    }
    const std::string id = c.ident();
    if (id.size() < 2 || id[0] != 'x') c.error("expected an axis name like x1");
    const int axis = std::atoi(id.c_str() + 1);
    if (axis < 1 || axis > max_dim) c.error("axis out of range: " + id);
    k[axis - 1] += coef * base_freq;
    seen_dim = std::max(seen_dim, axis);
    any = true;
    if (c.eat('+')) sign = 1.0;
    else if (c.eat('-')) sign = -1.0;
    else break;
  }
  if (!any) c.error("empty linear form");
  return k;
}

struct FieldTerm {
  enum class Kind { trig_cos, trig_sin, gaussian, constant } kind = Kind::constant;
  double coef = 1.0;
  Point k;           // trig
  Point center;      // gaussian
  double width = 1;  // gaussian
};

inline std::vector<FieldTerm> parse_field_terms(ParseCursor& c, int dim, double base_freq) {
  std::vector<FieldTerm> terms;
  if (c.peek() == 'z') {
    if (c.ident() != "zero") c.error("expected 'zero'");
    if (!c.at_end()) c.error("'zero' takes no arguments");
    return terms;
  }
  double sign = 1.0;
  if (c.eat('-')) sign = -1.0;
  else c.eat('+');
  while (true) {
    FieldTerm term;
    term.coef = sign;
    const char p = c.peek();
    if (p == '-' || p == '+' || p == '.' || (p >= '0' && p <= '9')) {
      term.coef = sign * c.number();
      c.eat('*');
    }
    if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
      const std::string id = c.ident();
      int seen = 0;
      if (id == "cos" || id == "sin") {
        term.kind = id == "cos" ? FieldTerm::Kind::trig_cos : FieldTerm::Kind::trig_sin;
        if (!c.eat('(')) c.error("expected '(' after " + id);
        term.k = parse_linform(c, dim, seen, base_freq);
        if (!c.eat(')')) c.error("expected ')'");
      } else if (id == "gaussian") {
        term.kind = FieldTerm::Kind::gaussian;
        if (!c.eat('(')) c.error("expected '(' after gaussian");
        if (!c.eat('(')) c.error("expected '(' for the gaussian center");
        Point center(dim);
        int axis = 0;
        do {
          if (axis >= dim) c.error("gaussian center has too many coordinates");
          center[axis++] = c.number();
        } while (c.eat(','));
        if (axis != dim) c.error("gaussian center must list all coordinates");
        if (!c.eat(')')) c.error("expected ')' after the gaussian center");
        if (!c.eat(',')) c.error("expected ',' before the gaussian width");
        term.center = center;
        term.width = c.number();
        if (!c.eat(')')) c.error("expected ')'");
      } else if (id == "const") {
        term.kind = FieldTerm::Kind::constant;
        term.coef *= c.number();
      } else {
        c.error("unknown field atom '" + id + "'");
      }
    } else {
      term.kind = FieldTerm::Kind::constant;  // bare number
    }
    terms.push_back(term);
    if (c.eat('+')) sign = 1.0;
    else if (c.eat('-')) sign = -1.0;
    else break;
  }
  return terms;
}

inline ScalarField terms_to_field(const std::vector<FieldTerm>& terms, int dim,
                                  ParseCursor& c) {
  if (terms.empty()) return ScalarField::zero(dim);
  bool has_gaussian = false, has_trig = false;
  for (const auto& t : terms) {
    if (t.kind == FieldTerm::Kind::gaussian) has_gaussian = true;
    else has_trig = true;
  }
  if (has_gaussian) {
    if (has_trig || terms.size() != 1)
      c.error("a gaussian cannot be combined with other terms");
    if (terms[0].coef != 1.0) c.error("gaussian amplitude must be 1");
    return ScalarField::gaussian(terms[0].center, terms[0].width);
  }
  std::vector<TrigMode> modes;
  for (const auto& t : terms) {
    ScalarField h =
        t.kind == FieldTerm::Kind::trig_sin
            ? ScalarField::harmonic(t.k, 0.0, t.coef)
            : (t.kind == FieldTerm::Kind::trig_cos ? ScalarField::harmonic(t.k, t.coef, 0.0)
                                                   : ScalarField::constant(dim, t.coef));
    for (const auto& m : h.modes()) modes.push_back(m);
  }
  return ScalarField::trig(dim, std::move(modes));
}

inline ScalarField parse_field_expr(const std::string& text, int dim, double base_freq,
                                    int line) {
  ParseCursor c{text, 0, line};
  const auto terms = parse_field_terms(c, dim, base_freq);
  if (!c.at_end()) c.error("trailing characters in field expression");
  return terms_to_field(terms, dim, c);
}

inline ForcingField parse_forcing_expr(const std::string& text, int dim, double base_freq,
                                       int line) {
  ParseCursor c{text, 0, line};
  const auto terms = parse_field_terms(c, dim, base_freq);
  TimeAmplitude g = TimeAmplitude::constant(1.0);
  if (c.eat('*')) {
    const std::string id = c.ident();
    if (id == "cos" || id == "sin") {
      if (!c.eat('(')) c.error("expected '(' after " + id);
      const double w = c.number();
      const std::string tv = c.ident();
      if (tv != "t") c.error("time factor must use 't'");
      if (!c.eat(')')) c.error("expected ')'");
      g = id == "cos" ? TimeAmplitude::cosine(w) : TimeAmplitude::sine(w);
    } else if (id == "const") {
      g = TimeAmplitude::constant(c.number());
    } else {
      c.error("unknown time factor '" + id + "'");
    }
  }
  if (!c.at_end()) c.error("trailing characters in forcing expression");
  if (terms.empty()) return ForcingField::zero(dim);
  const ScalarField base = terms_to_field(terms, dim, c);
  if (base.kind() != ScalarField::Kind::trig_poly && !base.is_zero())
    c.error("forcing must be a trig polynomial in x");
  std::vector<ForcingMode> modes;
  for (const auto& m : base.modes()) modes.push_back({m.k, m.amp, g});
  return ForcingField::trig(dim, std::move(modes));
}

struct RawEntry {
  std::string value;
  int line = 0;
};
using RawSection = std::map<std::string, RawEntry>;

inline std::map<std::string, RawSection> split_sections(const std::string& text) {
  std::map<std::string, RawSection> sections;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": unterminated section");
      section = line.substr(1, line.size() - 2);
      if (section != "params" && section != "data" && section != "forcing" &&
          section != "grid" && section != "task")
        fail(errc::parse_error,
             "line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      sections.try_emplace(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": entry outside any section");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string s) {
      const auto sb = s.find_first_not_of(" \t");
      const auto se = s.find_last_not_of(" \t");
      return sb == std::string::npos ? std::string() : s.substr(sb, se - sb + 1);
    };
    key = trim(key);
    value = trim(value);
    if (key.empty() || value.empty())
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": empty key or value");
    if (!sections[section].emplace(key, RawEntry{value, lineno}).second)
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return sections;
}

inline double parse_scalar(const RawEntry& e) {
  ParseCursor c{e.value, 0, e.line};
  const double v = c.number();
  if (!c.at_end()) c.error("trailing characters after number");
  return v;
}

inline void parse_grid_axis(const RawEntry& e, AxisRange& ax) {
  ParseCursor c{e.value, 0, e.line};
  ax.lo = c.number();
  if (c.eat(':')) {
    ax.hi = c.number();
    if (!c.eat(':')) c.error("axis needs lo : hi : count");
    ax.count = static_cast<int>(c.integer());
  } else {
    ax.hi = ax.lo;
    ax.count = 1;
  }
  if (!c.at_end()) c.error("trailing characters in axis range");
}

inline std::vector<double> parse_times(const RawEntry& e) {
  ParseCursor c{e.value, 0, e.line};
  std::vector<double> times;
  if (c.eat('{')) {
    do times.push_back(c.number());
    while (c.eat(','));
    if (!c.eat('}')) c.error("expected '}'");
  } else {
    const double lo = c.number();
    if (c.eat(':')) {
      const double hi = c.number();
      if (!c.eat(':')) c.error("time range needs lo : hi : count");
      const long count = c.integer();
      if (count < 1) c.error("time count must be >= 1");
      for (long i = 0; i < count; ++i)
        times.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                              static_cast<double>(count - 1));
    } else {
      times.push_back(lo);
    }
  }
  if (!c.at_end()) c.error("trailing characters in time list");
  return times;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  auto sections = detail::split_sections(text);
  if (sections.empty()) fail(errc::parse_error, "empty scenario");
  if (!sections.count("params")) fail(errc::validation_error, "params: missing section");
  if (!sections.count("grid")) fail(errc::validation_error, "grid: missing section");

  Scenario sc;

  {  // [params]
    auto& p = sections["params"];
    const bool elastic = p.count("lambda") || p.count("mu") || p.count("rho");
    int n = 0;
    if (!p.count("n")) fail(errc::validation_error, "params.n: missing");
    n = static_cast<int>(detail::parse_scalar(p.at("n")));
    if (elastic) {
      for (const char* k : {"lambda", "mu", "rho"})
        if (!p.count(k)) fail(errc::validation_error, std::string("params.") + k + ": missing");
      sc.elastic = make_elastic_params(detail::parse_scalar(p.at("lambda")),
                                       detail::parse_scalar(p.at("mu")),
                                       detail::parse_scalar(p.at("rho")));
      sc.params = lame_to_speeds(*sc.elastic, n);
      for (const auto& [k, v] : p)
        if (k != "lambda" && k != "mu" && k != "rho" && k != "n")
          fail(errc::validation_error, "params." + k + ": unknown key");
    } else {
      for (const char* k : {"a", "b"})
        if (!p.count(k)) fail(errc::validation_error, std::string("params.") + k + ": missing");
      sc.params = make_params(detail::parse_scalar(p.at("a")), detail::parse_scalar(p.at("b")), n);
      for (const auto& [k, v] : p)
        if (k != "a" && k != "b" && k != "n")
          fail(errc::validation_error, "params." + k + ": unknown key");
    }
  }

  {  // [data]
    ScalarField phi[4] = {ScalarField::zero(sc.params.n), ScalarField::zero(sc.params.n),
                          ScalarField::zero(sc.params.n), ScalarField::zero(sc.params.n)};
    if (sections.count("data")) {
      auto& d = sections["data"];
      if (d.count("base_freq")) sc.base_freq = detail::parse_scalar(d.at("base_freq"));
      if (!(sc.base_freq > 0)) fail(errc::validation_error, "data.base_freq: must be positive");
      for (const auto& [k, v] : d) {
        if (k == "base_freq") continue;
        if (k.size() == 4 && k.rfind("phi", 0) == 0 && k[3] >= '0' && k[3] <= '3')
          phi[k[3] - '0'] = detail::parse_field_expr(v.value, sc.params.n, sc.base_freq, v.line);
        else
          fail(errc::validation_error, "data." + k + ": unknown key");
      }
    }
    sc.data = make_initial_data(phi[0], phi[1], phi[2], phi[3]);
  }

  if (sections.count("forcing")) {  // [forcing]
    auto& f = sections["forcing"];
    for (const auto& [k, v] : f) {
      if (k != "f") fail(errc::validation_error, "forcing." + k + ": unknown key");
      sc.forcing = detail::parse_forcing_expr(v.value, sc.params.n, sc.base_freq, v.line);
    }
  }

  {  // [grid]
    auto& g = sections["grid"];
    sc.axes.assign(static_cast<std::size_t>(sc.params.n), AxisRange{});
    std::vector<bool> seen(static_cast<std::size_t>(sc.params.n), false);
    for (const auto& [k, v] : g) {
      if (k == "t") {
        sc.times = detail::parse_times(v);
        continue;
      }
      if (k.size() >= 2 && k[0] == 'x') {
        const int axis = std::atoi(k.c_str() + 1);
        if (axis >= 1 && axis <= sc.params.n) {
          detail::parse_grid_axis(v, sc.axes[static_cast<std::size_t>(axis - 1)]);
          seen[static_cast<std::size_t>(axis - 1)] = true;
          continue;
        }
      }
      fail(errc::validation_error, "grid." + k + ": unknown key");
    }
    for (int i = 0; i < sc.params.n; ++i)
      if (!seen[static_cast<std::size_t>(i)])
        fail(errc::validation_error, "grid.x" + std::to_string(i + 1) + ": missing");
    if (sc.times.empty()) fail(errc::validation_error, "grid.t: missing");
  }

  if (sections.count("task")) {  // [task]
    auto& t = sections["task"];
    for (const auto& [k, v] : t) {
      if (k == "task") {
        if (v.value == "solve") sc.task = Task::solve;
        else if (v.value == "oracle-compare") sc.task = Task::oracle_compare;
        else if (v.value == "residual") sc.task = Task::residual;
        else if (v.value == "initial-check") sc.task = Task::initial_check;
        else if (v.value == "elastokit-demo") sc.task = Task::elastokit_demo;
        else fail(errc::validation_error, "task.task: unknown task '" + v.value + "'");
      } else if (k == "tolerance") {
        sc.tolerance = detail::parse_scalar(v);
        if (!(*sc.tolerance > 0)) fail(errc::validation_error, "task.tolerance: must be positive");
      } else if (k == "out") {
        sc.out_path = v.value;
      } else if (k == "quad_order") {
        sc.solver.interval_order = static_cast<int>(detail::parse_scalar(v));
      } else if (k == "sphere_level") {
        sc.solver.sphere_level = static_cast<int>(detail::parse_scalar(v));
      } else if (k == "h_rel") {
        sc.solver.h_rel = detail::parse_scalar(v);
      } else if (k == "t_eps") {
        sc.solver.t_eps = detail::parse_scalar(v);
      } else if (k == "profile_nodes") {
        sc.solver.profile_nodes = static_cast<int>(detail::parse_scalar(v));
      } else if (k == "tau_order") {
        sc.tau_order = static_cast<int>(detail::parse_scalar(v));
      } else if (k == "residual_h") {
        sc.residual_h = detail::parse_scalar(v);
      } else if (k == "probe_eps") {
        sc.probe_eps = detail::parse_scalar(v);
      } else {
        fail(errc::validation_error, "task." + k + ": unknown key");
      }
    }
  }

  sc.solver.validate();
  if (sc.task == Task::elastokit_demo && !sc.elastic)
    fail(errc::validation_error, "elastokit-demo needs Lame parameters");
  sc.grid();  // validates axes and times
  return sc;
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string linform_string(const Point& k, double base_freq) {
  std::string s;
  for (int i = 0; i < k.dim(); ++i) {
    const long c = std::lround(k[i] / base_freq);
    if (c == 0) continue;
    if (!s.empty()) s += c > 0 ? " + " : " - ";
    else if (c < 0) s += "-";
    const long mag = std::labs(c);
    if (mag != 1) s += std::to_string(mag) + " ";
    s += "x" + std::to_string(i + 1);
  }
  return s.empty() ? "0 x1" : s;
}

inline std::string field_string(const ScalarField& f, double base_freq) {
  switch (f.kind()) {
    case ScalarField::Kind::zero:
      return "zero";
    case ScalarField::Kind::gaussian:
      fail(errc::bad_field_kind, "gaussian serialization goes through the scenario writer");
    case ScalarField::Kind::closure:
      fail(errc::bad_field_kind, "closures have no file representation");
    case ScalarField::Kind::trig_poly:
      break;
  }
  // group modes into +/- pairs and emit cos/sin terms
  std::map<Point, std::complex<double>, PointLess> amps;
  for (const auto& m : f.modes()) amps[m.k] += m.amp;
  std::string s;
  std::map<Point, bool, PointLess> done;
  for (const auto& [k, amp] : amps) {
    if (done.count(k)) continue;
    Point neg(k.dim());
    for (int i = 0; i < k.dim(); ++i) neg[i] = -k[i];
    done[k] = done[neg] = true;
    double cos_amp, sin_amp;
    if (k.norm2() == 0.0) {
      cos_amp = amp.real();
      sin_amp = 0.0;
    } else {
      cos_amp = 2.0 * amp.real();
      sin_amp = -2.0 * amp.imag();
    }
    const bool use_neg = PointLess{}(k, neg);  // canonical representative of the pair
    const Point& rep = use_neg ? neg : k;
    const double flip = use_neg ? -1.0 : 1.0;  // sin flips under k -> -k
    auto term = [&](double coef, const char* fn) {
      if (coef == 0.0) return;
      if (!s.empty()) s += " + ";
      if (k.norm2() == 0.0) {
        s += "const " + fmt_g17(coef);
        return;
      }
      s += fmt_g17(coef) + std::string("*") + fn + "(" + linform_string(rep, base_freq) + ")";
    };
    term(cos_amp, "cos");
    term(flip * sin_amp, "sin");
  }
  return s.empty() ? "zero" : s;
}

}  // namespace detail

/// Canonical text form; parse(serialize(s)) reproduces the scenario.
inline std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "[params]\n";
  if (sc.elastic) {
    out << "lambda = " << detail::fmt_g17(sc.elastic->lambda) << "\n";
    out << "mu = " << detail::fmt_g17(sc.elastic->mu) << "\n";
    out << "rho = " << detail::fmt_g17(sc.elastic->rho) << "\n";
  } else {
    out << "a = " << detail::fmt_g17(sc.params.a) << "\n";
    out << "b = " << detail::fmt_g17(sc.params.b) << "\n";
  }
  out << "n = " << sc.params.n << "\n\n[data]\n";
  out << "base_freq = " << detail::fmt_g17(sc.base_freq) << "\n";
  for (int i = 0; i < 4; ++i) {
    const ScalarField& f = sc.data.phi(i);
    if (f.is_zero()) continue;
    if (f.kind() == ScalarField::Kind::gaussian)
      fail(errc::bad_field_kind, "gaussian fields are serialized by the original file only");
    out << "phi" << i << " = " << detail::field_string(f, sc.base_freq) << "\n";
  }
  if (sc.forcing && !sc.forcing->is_zero()) {
    out << "\n[forcing]\n";
    const auto& modes = sc.forcing->modes();
    std::vector<TrigMode> xmodes;
    for (const auto& m : modes) xmodes.push_back({m.k, m.amp});
    const TimeAmplitude& g = modes.front().g;
    out << "f = " << detail::field_string(ScalarField::trig(sc.forcing->dim(), xmodes),
                                          sc.base_freq);
    switch (g.kind) {
      case TimeAmplitude::Kind::constant:
        if (g.value != 1.0) out << " * const " << detail::fmt_g17(g.value);
        break;
      case TimeAmplitude::Kind::cosine:
        out << " * cos(" << detail::fmt_g17(g.omega) << " t)";
        break;
      case TimeAmplitude::Kind::sine:
        out << " * sin(" << detail::fmt_g17(g.omega) << " t)";
        break;
      case TimeAmplitude::Kind::closure:
        fail(errc::bad_field_kind, "closure forcing has no file representation");
    }
    out << "\n";
  }
  out << "\n[grid]\n";
  for (std::size_t i = 0; i < sc.axes.size(); ++i) {
    out << "x" << (i + 1) << " = " << detail::fmt_g17(sc.axes[i].lo);
    if (sc.axes[i].count > 1)
      out << " : " << detail::fmt_g17(sc.axes[i].hi) << " : " << sc.axes[i].count;
    out << "\n";
  }
  out << "t = {";
  for (std::size_t i = 0; i < sc.times.size(); ++i)
    out << (i ? ", " : "") << detail::fmt_g17(sc.times[i]);
  out << "}\n\n[task]\n";
  out << "task = " << task_name(sc.task) << "\n";
  if (sc.tolerance) out << "tolerance = " << detail::fmt_g17(*sc.tolerance) << "\n";
  if (sc.out_path) out << "out = " << *sc.out_path << "\n";
  out << "quad_order = " << sc.solver.interval_order << "\n";
  out << "sphere_level = " << sc.solver.sphere_level << "\n";
  out << "h_rel = " << detail::fmt_g17(sc.solver.h_rel) << "\n";
  out << "t_eps = " << detail::fmt_g17(sc.solver.t_eps) << "\n";
  out << "profile_nodes = " << sc.solver.profile_nodes << "\n";
  if (sc.tau_order != 0) out << "tau_order = " << sc.tau_order << "\n";
  out << "residual_h = " << detail::fmt_g17(sc.residual_h) << "\n";
  out << "probe_eps = " << detail::fmt_g17(sc.probe_eps) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// running
// ---------------------------------------------------------------------------

struct RunOptions {
  std::optional<std::string> out_path;
  std::optional<int> quad_order;
  std::optional<int> sphere_level;
  std::optional<double> h_rel;
  std::optional<double> tolerance;
  int threads = 0;
};

struct RunResult {
  int exit_code = 0;
  std::string csv;
  std::string report;
};

namespace detail {

inline SolutionEvaluator scenario_solver(const Scenario& sc) {
  if (sc.forcing && !sc.forcing->is_zero()) {
    DuhamelConfig dc;
    dc.tau_order = sc.tau_order;
    dc.inner = sc.solver;
    return solve_nonhomogeneous(sc.data, *sc.forcing, sc.params, dc);
  }
  return solve_homogeneous(sc.data, sc.params, sc.solver);
}

/// Reference evaluator: closed-form modes for the homogeneous problem,
/// adaptively integrated forced modes otherwise.
inline SolutionEvaluator scenario_oracle(const Scenario& sc) {
  if (!sc.forcing || sc.forcing->is_zero()) return oracle_solution(sc.data, sc.params);
  auto spectra = gather_spectra(sc.data);
  for (const auto& m : sc.forcing->modes()) spectra.try_emplace(m.k);  // ensure mode exists
  struct ForcedMode {
    Point k;
    SpectralData data;
    std::vector<std::pair<std::complex<double>, TimeAmplitude>> g;
  };
  std::vector<ForcedMode> modes;
  for (const auto& [k, sd] : spectra) {
    ForcedMode fm{k, sd, {}};
    for (const auto& m : sc.forcing->modes())
      if (m.k == k) fm.g.emplace_back(m.amp, m.g);
    modes.push_back(std::move(fm));
  }
  const BiwaveParams p = sc.params;
  return SolutionEvaluator(
      p, SolutionEvaluator::Provenance::oracle, [modes, p](const Point& x, double t) {
        std::complex<double> u = 0.0;
        for (const auto& m : modes) {
          auto g = [&](double tau) {
            std::complex<double> s = 0.0;
            for (const auto& [amp, ta] : m.g) s += amp * ta(tau);
            return s;
          };
          const std::complex<double> mode = forced_mode_solution(m.k, g, m.data, p, t);
          u += mode * std::exp(std::complex<double>(0.0, dot(m.k, x)));
        }
        return u.real();
      });
}

inline std::string csv_table(const EvalGrid& grid, const std::vector<std::string>& value_names,
                             const std::vector<std::vector<double>>& columns) {
  std::ostringstream out;
  for (int i = 0; i < grid.dim(); ++i) out << "x" << (i + 1) << ",";
  out << "t";
  for (const auto& name : value_names) out << "," << name;
  out << "\n";
  for (std::size_t row = 0; row < grid.size(); ++row) {
    const auto [x, t] = grid.at(row);
    for (int i = 0; i < grid.dim(); ++i) out << fmt_g17(x[i]) << ",";
    out << fmt_g17(t);
    for (const auto& col : columns) out << "," << fmt_g17(col[row]);
    out << "\n";
  }
  return out.str();
}

inline std::vector<std::pair<Point, double>> interior_probes(const EvalGrid& grid, double h,
                                                             double t_min) {
  std::vector<std::pair<Point, double>> probes;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [x, t] = grid.at(i);
    if (t >= std::max(t_min, 4.0 * h)) probes.emplace_back(x, t);
  }
  if (probes.empty())
    fail(errc::validation_error, "no grid points clear the residual stencil (need t >= 0.2)");
  return probes;
}

}  // namespace detail

inline RunResult run_scenario(const Scenario& scenario, const RunOptions& opt = {}) {
  Scenario sc = scenario;  // apply overrides on a copy
  if (opt.quad_order) sc.solver.interval_order = *opt.quad_order;
  if (opt.sphere_level) sc.solver.sphere_level = *opt.sphere_level;
  if (opt.h_rel) sc.solver.h_rel = *opt.h_rel;
  if (opt.tolerance) sc.tolerance = *opt.tolerance;
  sc.solver.validate();
  const EvalGrid grid = sc.grid();
  const int threads = opt.threads;

  RunResult result;
  std::ostringstream rep;
  rep.precision(6);

  switch (sc.task) {
    case Task::solve: {
      const SolutionEvaluator u = detail::scenario_solver(sc);
      std::vector<double> values(grid.size());
      parallel_for(
          grid.size(),
          [&](std::size_t i) {
            const auto [x, t] = grid.at(i);
            values[i] = u(x, t);
          },
          threads);
      result.csv = detail::csv_table(grid, {"u"}, {values});
      rep << "task solve: " << grid.size() << " points, provenance "
          << provenance_name(u.provenance()) << "\n";
      break;
    }
    case Task::oracle_compare: {
      const SolutionEvaluator u = detail::scenario_solver(sc);
      const SolutionEvaluator oracle = detail::scenario_oracle(sc);
      std::vector<double> us(grid.size()), os(grid.size());
      parallel_for(
          grid.size(),
          [&](std::size_t i) {
            const auto [x, t] = grid.at(i);
            us[i] = u(x, t);
            os[i] = oracle(x, t);
          },
          threads);
      ErrorNorms norms;
      double sum = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = std::abs(us[i] - os[i]);
        norms.max_abs = std::max(norms.max_abs, d);
        sum += d;
      }
      norms.mean_abs = sum / static_cast<double>(grid.size());
      result.csv = detail::csv_table(grid, {"u", "oracle"}, {us, os});
      rep << "task oracle-compare: max error " << norms.max_abs << ", mean error "
          << norms.mean_abs << "\n";
      if (sc.tolerance && norms.max_abs > *sc.tolerance) {
        rep << "tolerance " << *sc.tolerance << " exceeded\n";
        result.exit_code = 2;
      }
      break;
    }
    case Task::residual: {
      const SolutionEvaluator u = detail::scenario_solver(sc);
      const auto probes = detail::interior_probes(grid, sc.residual_h, 0.2);
      const ResidualReport r = biwave_residual(u, probes, sc.residual_h);
      rep << "task residual: probes " << r.probes << ", max |L u| " << r.max_abs << ", scale "
          << r.scale << ", relative " << r.relative << "\n";
      if (sc.tolerance && r.relative > *sc.tolerance) {
        rep << "tolerance " << *sc.tolerance << " exceeded\n";
        result.exit_code = 2;
      }
      break;
    }
    case Task::initial_check: {
      const SolutionEvaluator u = detail::scenario_solver(sc);
      std::vector<Point> points;
      const std::size_t spatial = grid.spatial_count();
      for (std::size_t i = 0; i < spatial; ++i) points.push_back(grid.at(i).first);
      double worst = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double dev = initial_probe(u, sc.data, k, sc.probe_eps, points);
        rep << "initial-check k=" << k << ": max deviation " << dev << "\n";
        worst = std::max(worst, dev);
      }
      if (sc.tolerance && worst > *sc.tolerance) {
        rep << "tolerance " << *sc.tolerance << " exceeded\n";
        result.exit_code = 2;
      }
      break;
    }
    case Task::elastokit_demo: {
      if (!sc.elastic) fail(errc::validation_error, "elastokit-demo needs Lame parameters");
      // potential: first component solves the scalar problem, others are zero
      std::vector<SolutionEvaluator> comps;
      comps.push_back(solve_homogeneous(sc.data, sc.params, sc.solver));
      const SolutionEvaluator zero_sol(sc.params, SolutionEvaluator::Provenance::synthetic,
                                       [](const Point&, double) { return 0.0; });
      for (int i = 1; i < sc.params.n; ++i) comps.push_back(zero_sol);
      const auto w = VectorFieldEvaluator::from_solutions(comps).memoized(sc.residual_h / 64.0);
      const auto u = cks_displacement(w, sc.params, sc.residual_h);
      const auto probes = detail::interior_probes(grid, sc.residual_h, 0.2);
      const ResidualReport r = navier_residual(u, nullptr, *sc.elastic, probes, sc.residual_h);
      rep << "task elastokit-demo: probes " << r.probes << ", max residual " << r.max_abs
          << ", scale " << r.scale << ", relative " << r.relative << "\n";
      if (sc.tolerance && r.relative > *sc.tolerance) {
        rep << "tolerance " << *sc.tolerance << " exceeded\n";
        result.exit_code = 2;
      }
      break;
    }
  }

  result.report = rep.str();
  const auto& out_path = opt.out_path ? opt.out_path : sc.out_path;
  if (out_path && !result.csv.empty()) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot write " + *out_path);
    out << result.csv;
  }
  return result;
}

}  // namespace biwave
