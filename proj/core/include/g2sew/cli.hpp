#pragma once
// Command-line front-end logic, kept in the library so it is directly
// testable: parameter records, key=value config parsing, command dispatch,
// and deterministic JSON/CSV emission.
//
// Contract highlights:
//   - run() maps errors to exit codes: ParseError -> 1, DomainError -> 2,
//     NumericalError -> 3; success -> 0 with the artifact written whole (no
//     partial output on failure).
//   - JSON artifacts are byte-deterministic for identical RunSpecs: fixed
//     field order, every float printed with 17 significant digits, complex
//     numbers as two-element [re, im] arrays.  Every value is accompanied by
//     its truncation metadata and a self-convergence probe (M vs M+4, or a
//     tightened series tolerance where no matrix truncation is involved).
//   - CSV scans: mandatory header, no quoting, '.' decimal; rows in grid
//     order.  Grid points whose configuration fails validation keep their
//     row with nan value fields and their in-domain flag.

#include <g2sew/types.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace g2sew::cli {

struct RunSpec {
  std::string command;  // z1 z2 z2-rank1 z2-heisenberg szego genform virasoro check scan

  cplx tau1{0.0, 1.0};
  cplx tau2{0.0, 1.2};
  cplx eps{0.0, 0.0};
  cplx xi{0.0, 1.0};
  double alpha1 = 0.87, beta1 = 0.25;  // torus-1 characteristics
  double alpha2 = 0.13, beta2 = 0.6;   // torus-2 characteristics
  int M = 16;
  double W = 5.0;
  double series_rel_tol = 1e-13;
  int series_max_terms = 4096;

  // szego: one evaluation point pair
  cplx x{0.4, 0.7};
  int x_torus = 1;
  cplx y{-0.5, -0.6};
  int y_torus = 2;

  // genform: n plus-points and n minus-points, each with a torus tag
  std::vector<cplx> w_pts;
  std::vector<int> w_tori;
  std::vector<cplx> z_pts;
  std::vector<int> z_tori;

  // virasoro: insertion point on torus 1 and finite-difference direction
  cplx point{0.6, 0.4};
  cplx direction{1.0, 0.0};

  // check: catalogue name, plus the truncation order for jacobi-product
  std::string check_name = "jacobi-product";
  int order = 6;

  // scan: ray grid eps_j = (j / (eps_grid - 1)) * eps_max * exp(i eps_arg),
  // j = 0 .. eps_grid-1; eps_max = 0 means the validation bound r1 r2
  int eps_grid = 32;
  double eps_max = 0.0;
  double eps_arg = 0.0;

  std::string out;     // artifact path; empty = standard output
  std::string format;  // "", "json", "csv" (per-command default when empty)
};

// Parse "a", "bi", "a+bi", "i", "-i", with exponents ("1e-3-2e-4i").
// `where` names the source (config line or flag) in ParseError messages.
cplx parse_complex(const std::string& text, const std::string& where);

// Like parse_complex with a mandatory "@1" / "@2" torus suffix.
std::pair<cplx, int> parse_point(const std::string& text, const std::string& where);

// Apply one key=value setting; throws ParseError on unknown key or bad value.
void apply_kv(RunSpec& spec, const std::string& key, const std::string& value,
              const std::string& where);

// Defaults + key=value file ('#' comments, blank lines allowed).  Flags are
// applied on top by the caller via apply_kv, so they override file values.
RunSpec load_config(const std::string& path);

// Execute and write the whole artifact to `artifact` on success.
// Returns the process exit code; diagnostics go to `diag`.
int run(const RunSpec& spec, std::ostream& artifact, std::ostream& diag);

}  // namespace g2sew::cli
