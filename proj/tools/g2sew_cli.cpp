// g2sew command-line front end.  All value parsing, validation, and artifact
// emission live in the library (g2sew/cli.hpp); this file only maps CLI11
// flags onto key=value pairs so flags and config files share one code path.
//
// Exit codes: 0 success, 1 parse/usage error, 2 domain violation, 3 numerical
// failure.

#include <g2sew/cli.hpp>

#include <CLI11.hpp>

#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace {

using g2sew::cli::RunSpec;

std::string flag_spelling(const std::string& key) {
  std::string flag = "--" + key;
  for (char& c : flag)
    if (c == '_') c = '-';
  return flag;
}

// Options of one subcommand, bound as raw strings and replayed through
// apply_kv in declaration order after parsing.
struct Harvester {
  CLI::App* cmd = nullptr;
  std::deque<std::string> storage;  // stable addresses for CLI11 bindings
  std::vector<std::pair<std::string, CLI::Option*>> scalars;
  std::vector<std::string> w_items, z_items;
  CLI::Option* w_opt = nullptr;
  CLI::Option* z_opt = nullptr;
  CLI::Option* name_opt = nullptr;  // `check` positional
  std::string config_path;

  void add(const std::string& key, const std::string& help) {
    storage.emplace_back();
    CLI::Option* o = cmd->add_option(flag_spelling(key), storage.back(), help);
    o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    scalars.emplace_back(key, o);
  }

  void apply(RunSpec& spec) const {
    size_t idx = 0;
    for (const auto& [key, opt] : scalars) {
      if (opt->count() > 0)
        g2sew::cli::apply_kv(spec, key, storage[idx], "flag " + flag_spelling(key));
      ++idx;
    }
    const auto join = [](const std::vector<std::string>& items) {
      std::string s;
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) s += ',';
        s += items[i];
      }
      return s;
    };
    if (w_opt && w_opt->count() > 0)
      g2sew::cli::apply_kv(spec, "w", join(w_items), "flag --w");
    if (z_opt && z_opt->count() > 0)
      g2sew::cli::apply_kv(spec, "z", join(z_items), "flag --z");
  }
};

const char* const kComplexHelp = " (complex: 'i', '0.3+0.9i', '1e-3i', ...)";

void add_torus_params(Harvester& h) {
  h.add("tau1", std::string("modulus of torus 1, Im > 0") + kComplexHelp);
  h.add("tau2", std::string("modulus of torus 2, Im > 0") + kComplexHelp);
  h.add("eps", std::string("sewing parameter, |eps| <= r1 r2") + kComplexHelp);
  h.add("xi", "cross-kernel square root of -1, +i or -i");
}

void add_char_params(Harvester& h) {
  h.add("alpha1", "torus-1 characteristic alpha (mod 1)");
  h.add("beta1", "torus-1 characteristic beta (mod 1)");
  h.add("alpha2", "torus-2 characteristic alpha (mod 1)");
  h.add("beta2", "torus-2 characteristic beta (mod 1)");
}

void add_truncation_params(Harvester& h) {
  h.add("M", "moment-matrix truncation order");
  h.add("series_rel_tol", "stop rule for q-series tails");
  h.add("series_max_terms", "hard cap on series terms");
}

void add_output_params(Harvester& h) {
  h.add("out", "artifact path (default: standard output)");
  h.add("format", "json or csv (per-command default when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Genus-two free-fermion calculator on two sewn tori: partition\n"
      "functions, Szego kernels, correlation generating forms, identity\n"
      "checks, and sewing-domain scans."};
  app.require_subcommand(1);

  std::map<std::string, std::unique_ptr<Harvester>> harvesters;
  const auto make_cmd = [&](const std::string& name, const std::string& desc) -> Harvester& {
    auto h = std::make_unique<Harvester>();
    h->cmd = app.add_subcommand(name, desc);
    h->cmd->add_option("--config", h->config_path,
                       "key=value config file; flags override file values");
    Harvester& ref = *h;
    harvesters[name] = std::move(h);
    return ref;
  };

  {
    Harvester& h = make_cmd("z1", "one-torus twisted partition function");
    h.add("tau1", std::string("torus modulus, Im > 0") + kComplexHelp);
    h.add("alpha1", "characteristic alpha (mod 1)");
    h.add("beta1", "characteristic beta (mod 1)");
    h.add("series_rel_tol", "stop rule for q-series tails");
    h.add("series_max_terms", "hard cap on series terms");
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("z2", "genus-two partition function Z1 Z1 det(I - Q)");
    add_torus_params(h);
    add_char_params(h);
    add_truncation_params(h);
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("z2-rank1",
                            "single-fermion genus-two partition function (half-integer "
                            "characteristics)");
    add_torus_params(h);
    add_char_params(h);
    add_truncation_params(h);
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("z2-heisenberg", "free-boson genus-two partition function");
    add_torus_params(h);
    add_truncation_params(h);
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("szego", "genus-two Szego kernel S(x, y)");
    add_torus_params(h);
    add_char_params(h);
    add_truncation_params(h);
    h.add("x", std::string("first point") + kComplexHelp);
    h.add("x_torus", "torus of x: 1 or 2");
    h.add("y", std::string("second point") + kComplexHelp);
    h.add("y_torus", "torus of y: 1 or 2");
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("genform", "2n-point generating form det[S(w_i, z_j)] Z2");
    add_torus_params(h);
    add_char_params(h);
    add_truncation_params(h);
    h.w_opt = h.cmd->add_option("--w", h.w_items, "plus-type point 'z@1' or 'z@2' (repeatable)");
    h.z_opt = h.cmd->add_option("--z", h.z_items, "minus-type point 'z@1' or 'z@2' (repeatable)");
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("virasoro", "Virasoro one-point function on torus 1");
    add_torus_params(h);
    add_char_params(h);
    add_truncation_params(h);
    h.add("point", std::string("insertion point on torus 1") + kComplexHelp);
    h.add("direction", std::string("finite-difference direction") + kComplexHelp);
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("check", "run one identity check from the catalogue");
    h.storage.emplace_back();
    h.name_opt = h.cmd->add_option("name", h.storage.back(),
                                   "check name (default jacobi-product); see README for the "
                                   "catalogue");
    h.scalars.emplace_back("check", h.name_opt);
    h.add("order", "truncation order for jacobi-product");
    add_output_params(h);
  }
  {
    Harvester& h = make_cmd("scan", "CSV scan of |Z2| and det(I - Q) along a sewing ray");
    h.add("tau1", std::string("modulus of torus 1, Im > 0") + kComplexHelp);
    h.add("tau2", std::string("modulus of torus 2, Im > 0") + kComplexHelp);
    h.add("xi", "cross-kernel square root of -1, +i or -i");
    add_char_params(h);
    add_truncation_params(h);
    h.add("eps_grid", "number of grid points along the ray");
    h.add("eps_max", "ray length (0 = the validation bound r1 r2)");
    h.add("eps_arg", "ray direction: eps_j = t_j eps_max exp(i eps_arg)");
    add_output_params(h);
  }

  try {
    app.parse(argc, argv);

    CLI::App* sub = app.get_subcommands().front();
    const Harvester& h = *harvesters.at(sub->get_name());

    RunSpec spec;
    if (sub->count("--config") > 0) spec = g2sew::cli::load_config(h.config_path);
    h.apply(spec);
    spec.command = sub->get_name();

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!spec.out.empty()) {
      file.open(spec.out, std::ios::binary);
      if (!file) {
        std::cerr << "parse error: cannot open output file '" << spec.out << "'\n";
        return 1;
      }
      out = &file;
    }
    return g2sew::cli::run(spec, *out, std::cerr);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const g2sew::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  }
}
