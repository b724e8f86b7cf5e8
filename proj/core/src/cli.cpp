// Front-end logic: key=value parsing into RunSpec, command dispatch, and
// deterministic artifact emission.  Formatting rules in cli.hpp.

#include <g2sew/cli.hpp>

#include <g2sew/checks.hpp>
#include <g2sew/fermion.hpp>
#include <g2sew/qseries.hpp>
#include <g2sew/sewing.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace g2sew::cli {

namespace {

using fermion::CharPair;
using sewing::SewingConfig;
using sewing::SurfacePoint;

// ---------------------------------------------------------------------------
// Formatting: every float at 17 significant digits, complexes as [re, im].

std::string fmt_d(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_c(cplx v) { return "[" + fmt_d(v.real()) + ", " + fmt_d(v.imag()) + "]"; }

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Minimal ordered JSON writer; two-space indentation, fields emitted in call
// order so identical RunSpecs render byte-identical artifacts.
struct Json {
  std::string s;
  int depth = 0;
  bool first = true;

  void indent() { s.append(static_cast<size_t>(2 * depth), ' '); }
  void sep() {
    if (!first) s += ",\n";
    first = false;
    indent();
  }
  void open(const std::string& key, char bracket) {
    sep();
    if (!key.empty()) s += "\"" + key + "\": ";
    s += bracket;
    s += '\n';
    ++depth;
    first = true;
  }
  void close(char bracket) {
    --depth;
    if (first) {
      s.pop_back();  // the newline from open(): render empty containers inline
    } else {
      s += '\n';
      indent();
    }
    s += bracket;
    first = false;
  }
  void raw(const std::string& key, const std::string& value) {
    sep();
    if (!key.empty()) s += "\"" + key + "\": ";
    s += value;
  }
  void num(const std::string& key, double v) { raw(key, fmt_d(v)); }
  void integer(const std::string& key, long v) { raw(key, std::to_string(v)); }
  void cnum(const std::string& key, cplx v) { raw(key, fmt_c(v)); }
  void boolean(const std::string& key, bool v) { raw(key, v ? "true" : "false"); }
  void str(const std::string& key, const std::string& v) {
    raw(key, "\"" + escape_json(v) + "\"");
  }
};

// ---------------------------------------------------------------------------
// Scalar parsing with full-consumption validation.  Whitespace is stripped
// first so that config-file values like "M = 16" parse.

std::string strip_space(const std::string& text) {
  std::string out;
  for (const char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string s = strip_space(text);
  if (s.empty()) throw ParseError(where + ": empty numeric literal");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ParseError(where + ": cannot parse number from '" + text + "'");
  return v;
}

long parse_long(const std::string& text, const std::string& where) {
  const std::string s = strip_space(text);
  if (s.empty()) throw ParseError(where + ": empty integer literal");
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size())
    throw ParseError(where + ": cannot parse integer from '" + text + "'");
  return v;
}

}  // namespace

cplx parse_complex(const std::string& text, const std::string& where) {
  const std::string s = strip_space(text);
  if (s.empty()) throw ParseError(where + ": empty complex literal");
  if (s.back() != 'i') return cplx(parse_double(s, where), 0.0);

  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is neither leading nor an exponent sign.
  size_t split = std::string::npos;
  for (size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string real_part = split == std::string::npos ? "" : body.substr(0, split);
  const std::string imag_part = split == std::string::npos ? body : body.substr(split);
  double im = 0.0;
  if (imag_part.empty() || imag_part == "+")
    im = 1.0;
  else if (imag_part == "-")
    im = -1.0;
  else
    im = parse_double(imag_part, where);
  const double re = real_part.empty() ? 0.0 : parse_double(real_part, where);
  return cplx(re, im);
}

std::pair<cplx, int> parse_point(const std::string& text, const std::string& where) {
  const std::string s = strip_space(text);
  const size_t at = s.find('@');
  if (at == std::string::npos)
    throw ParseError(where + ": point '" + text + "' needs a torus suffix '@1' or '@2'");
  const std::string torus = s.substr(at + 1);
  if (torus != "1" && torus != "2")
    throw ParseError(where + ": torus suffix must be '@1' or '@2', got '@" + torus + "'");
  return {parse_complex(s.substr(0, at), where), torus == "1" ? 1 : 2};
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  if (out.size() == 1 && strip_space(out[0]).empty()) out.clear();
  return out;
}

void parse_point_list(const std::string& value, const std::string& where,
                      std::vector<cplx>& pts, std::vector<int>& tori) {
  pts.clear();
  tori.clear();
  for (const std::string& item : split_list(value)) {
    const auto [z, torus] = parse_point(item, where);
    pts.push_back(z);
    tori.push_back(torus);
  }
}

}  // namespace

void apply_kv(RunSpec& spec, const std::string& key, const std::string& value,
              const std::string& where) {
  const std::string ctx = where + ": key '" + key + "'";
  if (key == "tau1")
    spec.tau1 = parse_complex(value, ctx);
  else if (key == "tau2")
    spec.tau2 = parse_complex(value, ctx);
  else if (key == "eps")
    spec.eps = parse_complex(value, ctx);
  else if (key == "xi")
    spec.xi = parse_complex(value, ctx);
  else if (key == "alpha1")
    spec.alpha1 = parse_double(value, ctx);
  else if (key == "beta1")
    spec.beta1 = parse_double(value, ctx);
  else if (key == "alpha2")
    spec.alpha2 = parse_double(value, ctx);
  else if (key == "beta2")
    spec.beta2 = parse_double(value, ctx);
  else if (key == "M") {
    const long m = parse_long(value, ctx);
    if (m < 1 || m > 256) throw ParseError(ctx + ": M must be in [1, 256], got " + value);
    spec.M = static_cast<int>(m);
  } else if (key == "W") {
    spec.W = parse_double(value, ctx);
    if (!(spec.W >= 1.0)) throw ParseError(ctx + ": W must be >= 1, got " + value);
  } else if (key == "series_rel_tol") {
    spec.series_rel_tol = parse_double(value, ctx);
    if (!(spec.series_rel_tol > 0.0)) throw ParseError(ctx + ": tolerance must be positive");
  } else if (key == "series_max_terms") {
    const long n = parse_long(value, ctx);
    if (n < 8) throw ParseError(ctx + ": series_max_terms must be >= 8, got " + value);
    spec.series_max_terms = static_cast<int>(n);
  } else if (key == "x") {
    spec.x = parse_complex(value, ctx);
  } else if (key == "y") {
    spec.y = parse_complex(value, ctx);
  } else if (key == "x_torus" || key == "y_torus") {
    const long t = parse_long(value, ctx);
    if (t != 1 && t != 2) throw ParseError(ctx + ": torus must be 1 or 2, got " + value);
    (key == "x_torus" ? spec.x_torus : spec.y_torus) = static_cast<int>(t);
  } else if (key == "w")
    parse_point_list(value, ctx, spec.w_pts, spec.w_tori);
  else if (key == "z")
    parse_point_list(value, ctx, spec.z_pts, spec.z_tori);
  else if (key == "point")
    spec.point = parse_complex(value, ctx);
  else if (key == "direction")
    spec.direction = parse_complex(value, ctx);
  else if (key == "check")
    spec.check_name = strip_space(value);
  else if (key == "order") {
    const long o = parse_long(value, ctx);
    if (o < 2 || o > 12) throw ParseError(ctx + ": order must be in [2, 12], got " + value);
    spec.order = static_cast<int>(o);
  } else if (key == "eps_grid") {
    const long n = parse_long(value, ctx);
    if (n < 2 || n > 100000)
      throw ParseError(ctx + ": eps_grid must be in [2, 100000], got " + value);
    spec.eps_grid = static_cast<int>(n);
  } else if (key == "eps_max") {
    spec.eps_max = parse_double(value, ctx);
    if (spec.eps_max < 0.0) throw ParseError(ctx + ": eps_max must be >= 0");
  } else if (key == "eps_arg")
    spec.eps_arg = parse_double(value, ctx);
  else if (key == "out") {
    // Trim the ends only: interior spaces may be part of the path.
    const size_t b = value.find_first_not_of(" \t");
    const size_t e = value.find_last_not_of(" \t");
    spec.out = b == std::string::npos ? std::string() : value.substr(b, e - b + 1);
  } else if (key == "format") {
    const std::string f = strip_space(value);
    if (f != "json" && f != "csv")
      throw ParseError(ctx + ": format must be json or csv, got '" + value + "'");
    spec.format = f;
  } else if (key == "command")
    spec.command = strip_space(value);
  else
    throw ParseError(ctx + ": unknown key");
}

RunSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config '" + path + "': cannot open file");
  RunSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (strip_space(line).empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config '" + path + "' line " + std::to_string(lineno) +
                       ": expected key = value");
    const std::string key = strip_space(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key.empty())
      throw ParseError("config '" + path + "' line " + std::to_string(lineno) + ": empty key");
    apply_kv(spec, key, value, "config '" + path + "' line " + std::to_string(lineno));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Command dispatch.

namespace {

double rel_change(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

SeriesPolicy policy_of(const RunSpec& spec) {
  return SeriesPolicy{spec.series_rel_tol, spec.series_max_terms};
}

SewingConfig config_of(const RunSpec& spec, int M) {
  return SewingConfig::make(spec.tau1, spec.tau2, spec.eps, spec.xi, M, policy_of(spec));
}

CharPair chars_of(const RunSpec& spec) {
  return CharPair::make(TwistData(spec.alpha1, spec.beta1), TwistData(spec.alpha2, spec.beta2));
}

// Full effective configuration, echoed into every JSON artifact in a fixed
// order.  The `out` path is excluded: it does not affect the computation.
void emit_inputs(Json& j, const RunSpec& spec) {
  j.open("inputs", '{');
  j.cnum("tau1", spec.tau1);
  j.cnum("tau2", spec.tau2);
  j.cnum("eps", spec.eps);
  j.cnum("xi", spec.xi);
  j.num("alpha1", spec.alpha1);
  j.num("beta1", spec.beta1);
  j.num("alpha2", spec.alpha2);
  j.num("beta2", spec.beta2);
  j.integer("M", spec.M);
  j.num("W", spec.W);
  j.num("series_rel_tol", spec.series_rel_tol);
  j.integer("series_max_terms", spec.series_max_terms);
  j.cnum("x", spec.x);
  j.integer("x_torus", spec.x_torus);
  j.cnum("y", spec.y);
  j.integer("y_torus", spec.y_torus);
  const auto list_c = [](const std::vector<cplx>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += fmt_c(v[i]);
    }
    return s + "]";
  };
  const auto list_i = [](const std::vector<int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(v[i]);
    }
    return s + "]";
  };
  j.raw("w", list_c(spec.w_pts));
  j.raw("w_tori", list_i(spec.w_tori));
  j.raw("z", list_c(spec.z_pts));
  j.raw("z_tori", list_i(spec.z_tori));
  j.cnum("point", spec.point);
  j.cnum("direction", spec.direction);
  j.str("check", spec.check_name);
  j.integer("order", spec.order);
  j.integer("eps_grid", spec.eps_grid);
  j.num("eps_max", spec.eps_max);
  j.num("eps_arg", spec.eps_arg);
  j.str("format", "json");
  j.close('}');
}

// One complex value with an M -> M+4 matrix-truncation probe.
std::string emit_value_artifact(const RunSpec& spec, const char* name, cplx value, cplx probe) {
  Json j;
  j.open("", '{');
  j.str("command", name);
  emit_inputs(j, spec);
  j.open("outputs", '{');
  j.cnum("value", value);
  j.close('}');
  j.open("truncation", '{');
  j.integer("M", spec.M);
  j.num("series_rel_tol", spec.series_rel_tol);
  j.open("self_convergence", '{');
  j.str("probe", "M+4");
  j.integer("probe_M", spec.M + 4);
  j.num("rel_change", rel_change(value, probe));
  j.close('}');
  j.close('}');
  j.close('}');
  j.s += '\n';
  return j.s;
}

std::string run_z1(const RunSpec& spec) {
  const TwistData tw(spec.alpha1, spec.beta1);
  const ModularParam m(spec.tau1);
  const SeriesPolicy pol = policy_of(spec);
  const cplx value = fermion::z1_partition(tw, m, pol);
  // No matrix truncation here; probe by tightening the series stop rule.
  const SeriesPolicy tight{pol.rel_tol * 1e-2, 2 * pol.max_terms};
  const double conv = rel_change(value, fermion::z1_partition(tw, m, tight));

  Json j;
  j.open("", '{');
  j.str("command", "z1");
  emit_inputs(j, spec);
  j.open("outputs", '{');
  j.cnum("value", value);
  j.close('}');
  j.open("truncation", '{');
  j.num("series_rel_tol", spec.series_rel_tol);
  j.open("self_convergence", '{');
  j.str("probe", "series_rel_tol*1e-2");
  j.num("rel_change", conv);
  j.close('}');
  j.close('}');
  j.close('}');
  j.s += '\n';
  return j.s;
}

std::string run_check(const RunSpec& spec, int& exit_code) {
  const checks::CheckResult res = spec.check_name == "jacobi-product"
                                      ? checks::check_jacobi_product(spec.order)
                                      : checks::run_named(spec.check_name);
  exit_code = res.passed ? 0 : 3;

  Json j;
  j.open("", '{');
  j.str("command", "check");
  emit_inputs(j, spec);
  j.open("outputs", '{');
  j.str("name", res.name);
  j.boolean("passed", res.passed);
  j.num("max_residual", res.max_residual);
  j.num("tolerance", res.tolerance);
  j.str("detail", res.detail);
  j.close('}');
  j.close('}');
  j.s += '\n';
  return j.s;
}

std::string run_scan(const RunSpec& spec) {
  // D(q_a) depends only on the taus, so the default ray length and the
  // in-domain threshold are fixed across the grid.
  const SewingConfig probe =
      SewingConfig::make(spec.tau1, spec.tau2, cplx(0.0, 0.0), spec.xi, spec.M, policy_of(spec));
  const double bound = spec.eps_max > 0.0 ? spec.eps_max : probe.r1 * probe.r2;
  const double quarter = 0.25 * probe.d1 * probe.d2;
  const CharPair chars = chars_of(spec);
  const int n = spec.eps_grid;
  const cplx ray = std::exp(cplx(0.0, spec.eps_arg));

  struct Row {
    cplx eps;
    double abs_z2 = std::numeric_limits<double>::quiet_NaN();
    cplx det{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    bool in_domain = false;
  };
  std::vector<Row> rows(static_cast<size_t>(n));

  const auto eval_row = [&](int jdx) {
    Row row;
    row.eps = (static_cast<double>(jdx) / (n - 1)) * bound * ray;
    row.in_domain = std::abs(row.eps) < quarter;
    try {
      const SewingConfig cfg =
          SewingConfig::make(spec.tau1, spec.tau2, row.eps, spec.xi, spec.M, policy_of(spec));
      row.abs_z2 = std::abs(fermion::z2_partition(cfg, chars));
      row.det = sewing::det_i_minus_q(cfg, chars.t1, chars.t2);
    } catch (const DomainError&) {
      // grid point outside the sewable region: keep the nan row
    } catch (const NumericalError&) {
    }
    rows[static_cast<size_t>(jdx)] = row;
  };

  // Rows are written by index, so output order is grid order regardless of
  // which worker computes them.
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = static_cast<int>(std::clamp(hw, 1u, 8u));
  std::vector<std::future<void>> futs;
  futs.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t)
    futs.push_back(std::async(std::launch::async, [&, t] {
      for (int jdx = t; jdx < n; jdx += workers) eval_row(jdx);
    }));
  for (auto& f : futs) f.get();

  std::string out = "eps_re,eps_im,abs_z2,det_q_re,det_q_im,in_domain\n";
  for (const Row& row : rows) {
    out += fmt_d(row.eps.real());
    out += ',';
    out += fmt_d(row.eps.imag());
    out += ',';
    out += fmt_d(row.abs_z2);
    out += ',';
    out += fmt_d(row.det.real());
    out += ',';
    out += fmt_d(row.det.imag());
    out += ',';
    out += row.in_domain ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& artifact, std::ostream& diag) {
  try {
    const std::string& cmd = spec.command;
    if (cmd.empty()) throw ParseError("no command given");
    if (cmd == "scan") {
      if (!spec.format.empty() && spec.format != "csv")
        throw ParseError("key 'format': scan emits csv only");
    } else if (!spec.format.empty() && spec.format != "json") {
      throw ParseError("key 'format': command '" + cmd + "' emits json only");
    }

    // Evaluate fully before writing anything: a thrown error must not leave a
    // truncated artifact behind.
    std::string text;
    int code = 0;
    if (cmd == "z1") {
      text = run_z1(spec);
    } else if (cmd == "z2") {
      const auto eval = [&](int M) {
        return fermion::z2_partition(config_of(spec, M), chars_of(spec));
      };
      text = emit_value_artifact(spec, "z2", eval(spec.M), eval(spec.M + 4));
    } else if (cmd == "z2-rank1") {
      const auto eval = [&](int M) {
        return fermion::z2_partition_rank1(config_of(spec, M), chars_of(spec));
      };
      text = emit_value_artifact(spec, "z2-rank1", eval(spec.M), eval(spec.M + 4));
    } else if (cmd == "z2-heisenberg") {
      const auto eval = [&](int M) { return fermion::z2_heisenberg(config_of(spec, M)); };
      text = emit_value_artifact(spec, "z2-heisenberg", eval(spec.M), eval(spec.M + 4));
    } else if (cmd == "szego") {
      const auto eval = [&](int M) {
        const SewingConfig cfg = config_of(spec, M);
        const CharPair ch = chars_of(spec);
        return sewing::szego_g2(cfg.point(spec.x, spec.x_torus), cfg.point(spec.y, spec.y_torus),
                                cfg, ch.t1, ch.t2);
      };
      text = emit_value_artifact(spec, "szego", eval(spec.M), eval(spec.M + 4));
    } else if (cmd == "genform") {
      const auto eval = [&](int M) {
        const SewingConfig cfg = config_of(spec, M);
        std::vector<SurfacePoint> ws, zs;
        for (size_t i = 0; i < spec.w_pts.size(); ++i)
          ws.push_back(cfg.point(spec.w_pts[i], spec.w_tori[i]));
        for (size_t i = 0; i < spec.z_pts.size(); ++i)
          zs.push_back(cfg.point(spec.z_pts[i], spec.z_tori[i]));
        return fermion::gen_form_2n(ws, zs, cfg, chars_of(spec));
      };
      text = emit_value_artifact(spec, "genform", eval(spec.M), eval(spec.M + 4));
    } else if (cmd == "virasoro") {
      const auto eval = [&](int M) {
        const SewingConfig cfg = config_of(spec, M);
        return fermion::virasoro_onept(cfg.point(spec.point, 1), cfg, chars_of(spec),
                                       spec.direction);
      };
      text = emit_value_artifact(spec, "virasoro", eval(spec.M), eval(spec.M + 4));
    } else if (cmd == "check") {
      text = run_check(spec, code);
    } else if (cmd == "scan") {
      text = run_scan(spec);
    } else {
      throw ParseError("unknown command '" + cmd + "'");
    }

    artifact << text;
    artifact.flush();
    return code;
  } catch (const ParseError& e) {
    diag << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    diag << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    diag << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace g2sew::cli
