#include "nncalc/approx.hpp"
#include "nncalc/calculus.hpp"
#include "nncalc/census.hpp"
#include "nncalc/extract.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/json_io.hpp"
#include "nncalc/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace nncalc;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Network read_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

RVec parse_list(const std::string& text) {
  RVec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("range must look like lo:hi");
  try {
    return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("bad range '" + text + "'");
  }
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity") return INFINITY;
  return std::stod(text);
}

void print_complexity(const Network& net) {
  auto c = complexity(net);
  std::cout << "W = " << c.W << ", L = " << c.L << ", N = " << c.N << ", W0 = " << c.W0 << "\n";
}

// Prints one budget line; returns ok.
bool budget(const std::string& text, bool ok) {
  std::cout << text << ": " << (ok ? "PASS" : "FAIL") << "\n";
  return ok;
}

std::size_t ceil_log2(std::size_t d) {
  std::size_t j = 0;
  while ((std::size_t(1) << j) < d) ++j;
  return j;
}

struct GadgetArgs {
  std::string kind, out, variant = "weights", in, coeffs = "0,1", path = "auto";
  unsigned j = 4, r = 2, t = 2, n = 1;
  std::size_t L = 2, d = 1;
  std::string eps = "1/8", R = "1", delta = "1/2";
};

int cmd_gadget(const GadgetArgs& a) {
  Network net;
  bool ok = true;
  const std::string& k = a.kind;
  if (k == "sawtooth") {
    if (a.variant != "weights" && a.variant != "neurons") throw UsageError("variant must be weights or neurons");
    bool weights = a.variant == "weights";
    net = sawtooth_net({a.j, a.d, weights ? SawtoothVariant::Weights : SawtoothVariant::Neurons, a.L});
    print_complexity(net);
    auto c = complexity(net);
    std::string CL = sawtooth_constant(a.L).get_str();
    if (weights)
      ok &= budget("W = " + std::to_string(c.W) + " ≤ " + CL + "·2^(" + std::to_string(a.j) + "/" +
                       std::to_string(a.L / 2) + ")",
                   within_sawtooth_budget(c.W, a.L, a.j, a.L / 2));
    else
      ok &= budget("N = " + std::to_string(c.N) + " ≤ " + CL + "·2^(" + std::to_string(a.j) + "/" +
                       std::to_string(a.L - 1) + ")",
                   within_sawtooth_budget(c.N, a.L, a.j, a.L - 1));
    ok &= budget("L = " + std::to_string(a.L), c.L == a.L);
  } else if (k == "bspline") {
    net = bspline_net(a.n);
    print_complexity(net);
    auto c = complexity(net);
    ok &= budget("(L, N) = (2, " + std::to_string(a.n + 2) + ")", c.L == 2 && c.N == a.n + 2);
  } else if (k == "squash") {
    net = squash_net(a.r);
    print_complexity(net);
    auto c = complexity(net);
    ok &= budget("(W, L, N) = (" + std::to_string(2 * (a.r + 1)) + ", 2, " + std::to_string(a.r + 1) + ")",
                 c.W == 2 * (a.r + 1) && c.L == 2 && c.N == a.r + 1);
  } else if (k == "mult") {
    net = mult_net(a.d, a.r);
    print_complexity(net);
    auto c = complexity(net);
    std::size_t n = 2 * (a.r + 1), j = ceil_log2(a.d), p = (std::size_t(1) << j) - 1;
    ok &= budget("W ≤ " + std::to_string(6 * n * p), c.W <= 6 * n * p);
    ok &= budget("L = " + std::to_string(2 * j), c.L == 2 * j);
    ok &= budget("N ≤ " + std::to_string((2 * n + 1) * p - 1), c.N + 1 <= (2 * n + 1) * p);
  } else if (k == "tensor-bspline") {
    net = tensor_bspline_net(a.d, a.t);
    print_complexity(net);
    auto c = complexity(net);
    if (a.d == 1) {
      ok &= budget("(W, L, N) ≤ (" + std::to_string(2 * (a.t + 2)) + ", 2, " + std::to_string(a.t + 2) + ")",
                   c.W <= 2 * (a.t + 2) && c.L == 2 && c.N <= a.t + 2);
    } else {
      ok &= budget("W ≤ " + std::to_string(28 * a.d * (a.t + 1)), c.W <= 28 * a.d * (a.t + 1));
      ok &= budget("N ≤ " + std::to_string(13 * a.d * (a.t + 1)), c.N <= 13 * a.d * (a.t + 1));
      ok &= budget("L = " + std::to_string(2 + 2 * ceil_log2(a.d)), c.L == 2 + 2 * ceil_log2(a.d));
    }
  } else if (k == "indicator") {
    if (a.path != "auto" && a.path != "general") throw UsageError("path must be auto or general");
    Network sigma = squash_net(a.r);
    auto cs = complexity(sigma);
    Rect unit(a.d, {Rational(0), Rational(1)});
    IndicatorNet ind = indicator_net(a.d, unit, parse_rational(a.eps), sigma,
                                     a.path == "general" ? IndicatorPath::General : IndicatorPath::Auto);
    for (const auto& w : ind.warnings) std::cerr << "warning: " << w << "\n";
    net = ind.net;
    print_complexity(net);
    auto c = complexity(net);
    if (ind.shortcut)
      ok &= budget("(W, L, N) ≤ (2W, L, 2N) of σ", c.W <= 2 * cs.W && c.L == cs.L && c.N <= 2 * cs.N);
    else
      ok &= budget("(W, L, N) ≤ (2dW(N+1), 2L−1, (2d+1)N) of σ",
                   c.W <= 2 * a.d * cs.W * (cs.N + 1) && c.L <= 2 * cs.L - 1 && c.N <= (2 * a.d + 1) * cs.N);
  } else if (k == "localize") {
    if (a.in.empty()) throw UsageError("localize needs --in g.json");
    Network g = read_network(a.in);
    require_valid(g);
    LocalizeNet loc = localize_net(g, parse_rational(a.R), parse_rational(a.delta), a.r);
    net = loc.net;
    print_complexity(net);
    auto c = complexity(net), cg = complexity(g);
    ok &= budget("W ≤ " + std::to_string(loc.constant) + "·" + std::to_string(cg.W), c.W <= loc.constant * cg.W);
    ok &= budget("N ≤ " + std::to_string(loc.constant) + "·" + std::to_string(cg.N), c.N <= loc.constant * cg.N);
    ok &= budget("L ≤ " + std::to_string(loc.depth_bound), c.L <= loc.depth_bound);
  } else if (k == "poly") {
    net = represent_polynomial(parse_list(a.coeffs), a.r);
    print_complexity(net);
    auto c = complexity(net);
    ok &= budget("L = 2, N ≤ " + std::to_string(2 * a.r + 2), c.L == 2 && c.N <= 2 * a.r + 2);
  } else {
    throw UsageError("unknown gadget kind '" + k + "'");
  }
  std::string out = a.out.empty() ? k + ".json" : a.out;
  write_text(out, dump_network(net) + "\n");
  std::cout << "wrote " << out << "\n";
  return ok ? kPass : kFail;
}

struct VerifyArgs {
  std::string suite, out;
  std::size_t trials = 20;
  std::uint64_t seed = 7;
  unsigned resolution = 10;
  bool serial = false;
};

int cmd_verify(const VerifyArgs& a) {
  SuiteOptions opt;
  opt.trials = a.trials;
  opt.seed = a.seed;
  opt.resolution = a.resolution;
  opt.parallel = !a.serial;
  if (std::find(suite_names().begin(), suite_names().end(), a.suite) == suite_names().end())
    throw UsageError("unknown suite '" + a.suite + "'");
  Recorder rec = run_suite(a.suite, opt);
  Json report = suite_report(a.suite, opt, rec);
  std::string out = a.out.empty() ? "verify_" + a.suite + ".json" : a.out;
  write_text(out, report.dump(2) + "\n");
  for (const auto& [name, e] : rec.entries())
    if (e.failures) std::cout << "FAIL " << name << " (" << e.failures << "/" << e.checks << ")\n";
  std::cout << a.suite << ": " << rec.entries().size() << " assertions, " << rec.checks() << " checks, "
            << rec.failures() << " failed\nreport: " << out << "\n";
  return rec.failures() ? kFail : kPass;
}

struct CensusArgs {
  std::string family = "random-net", range = "1:0", out = "-", format = "csv";
  unsigned r = 1;
  std::size_t L = 3, trials = 10;
  std::uint64_t seed = 7;
};

int cmd_census(const CensusArgs& a) {
  if (a.format != "csv" && a.format != "json") throw UsageError("format must be csv or json");
  CensusSpec spec;
  spec.family = a.family;
  spec.r = a.r;
  spec.L = a.L;
  std::tie(spec.lo, spec.hi) = parse_range(a.range);
  spec.trials = a.trials;
  spec.seed = a.seed;
  if (spec.family != "random-net" && spec.family != "sawtooth") throw UsageError("unknown family '" + a.family + "'");
  auto rows = run_census(spec);
  std::string text;
  bool within = true;
  double max_ratio = 0;
  for (const auto& row : rows) {
    within = within && Integer(row.pieces) <= row.bound_weights && Integer(row.pieces) <= row.bound_neurons;
    max_ratio = std::max(max_ratio, double(row.pieces) / row.bound_weights.get_d());
  }
  if (a.format == "csv") {
    text = census_csv_header() + "\n";
    for (const auto& row : rows) text += census_csv_row(row) + "\n";
  } else {
    Json arr = Json::array();
    for (const auto& row : rows)
      arr.push_back({{"family", row.family}, {"seed", row.seed}, {"r", row.r}, {"W", row.W}, {"L", row.L},
                     {"N", row.N}, {"pieces", row.pieces}, {"bound_weights", row.bound_weights.get_str()},
                     {"bound_neurons", row.bound_neurons.get_str()}, {"cr", row.cr}});
    text = Json{{"rows", arr}, {"max_ratio_weights", max_ratio}}.dump(2) + "\n";
  }
  write_text(a.out, text);
  if (a.out != "-")
    std::cout << rows.size() << " rows, max pieces/bound_weights = " << max_ratio
              << (within ? ", all within bounds" : ", BOUND VIOLATED") << "\n";
  return within ? kPass : kFail;
}

struct CalcArgs {
  std::string op, out = "-", a = "1", P, Q, x, mode = "general", sigma, sigma_name = "sigma";
  std::vector<std::string> in;
  std::size_t L0 = 1, axis = 0;
  unsigned r = 1, s = 2;
};

int cmd_calculus(const CalcArgs& a) {
  // σ must be registered before the input that refers to it is parsed.
  std::optional<unsigned> sigma_handle;
  Network sigma;
  if (a.op == "substitute") {
    if (a.sigma.empty()) throw UsageError("substitute needs --sigma network");
    sigma = read_network(a.sigma);
    require_valid(sigma);
    sigma_handle = register_network_activation(a.sigma_name, sigma);
  }
  std::vector<Network> nets;
  for (const auto& p : a.in) nets.push_back(read_network(p));
  auto need = [&](std::size_t n) {
    if (nets.size() != n) throw UsageError(a.op + " takes " + std::to_string(n) + " --in network(s)");
    for (const auto& net : nets) require_valid(net);
  };
  auto need_some = [&] {
    if (nets.empty()) throw UsageError(a.op + " needs at least one --in network");
    for (const auto& net : nets) require_valid(net);
  };
  auto emit = [&](const Network& n) {
    write_text(a.out, dump_network(n) + "\n");
    return kPass;
  };
  auto single_map = [&](const std::string& path) {
    Network m = read_network(path);
    if (m.depth() != 1) throw UsageError(path + " must hold a single affine layer");
    return m.layers[0].map;
  };
  const std::string& op = a.op;
  if (op == "deepen") return need(1), emit(deepen(nets[0], a.L0));
  if (op == "scale") return need(1), emit(scale(nets[0], parse_rational(a.a)));
  if (op == "cartesian") return need_some(), emit(cartesian(nets));
  if (op == "block-parallel") return need_some(), emit(block_parallel(nets));
  if (op == "sum") return need_some(), emit(sum(nets));
  if (op == "compose-stacked") return need(2), emit(compose_stacked(nets[0], nets[1]));
  if (op == "compose-fused") return need(2), emit(compose_fused(nets[0], nets[1]));
  if (op == "strictify") return need(1), emit(strictify(nets[0]));
  if (op == "power-unroll") return need(1), emit(power_unroll(nets[0], a.r, a.s));
  if (op == "compress") return need(1), emit(compress(nets[0]));
  if (op == "pre-post-affine") {
    need(1);
    if (a.P.empty() || a.Q.empty()) throw UsageError("pre-post-affine needs --P and --Q (1-layer networks)");
    return emit(pre_post_affine(nets[0], single_map(a.P), single_map(a.Q)));
  }
  if (op == "substitute") {
    need(1);
    SubstituteMode mode = a.mode == "two-layer" ? SubstituteMode::TwoLayer : SubstituteMode::General;
    return emit(substitute_activation(nets[0], *sigma_handle, sigma, mode));
  }
  if (op == "complexity") {
    need(1);
    auto c = complexity(nets[0]);
    Json layers = Json::array();
    for (const auto& s : c.per_layer)
      layers.push_back({{"l0", s.l0}, {"l0_col_max", s.l0_col_max}, {"l0_row_max", s.l0_row_max}});
    write_text(a.out, Json{{"W", c.W}, {"N", c.N}, {"L", c.L}, {"W0", c.W0}, {"strict", is_strict(nets[0])},
                           {"layers", layers}}
                              .dump(2) +
                          "\n");
    return kPass;
  }
  if (op == "evaluate") {
    need(1);
    RVec x = parse_list(a.x);
    if (x.size() != nets[0].d_in()) throw UsageError("--x must have d_in entries");
    Json out = Json::array();
    for (const auto& v : evaluate(nets[0], x)) out.push_back(to_string(v));
    write_text(a.out, out.dump() + "\n");
    return kPass;
  }
  if (op == "extract") {
    need(1);
    if (nets[0].d_in() == 1) {
      write_text(a.out, to_json(extract_pieces(nets[0])).dump(2) + "\n");
    } else {
      RVec base = parse_list(a.x);
      if (base.size() != nets[0].d_in()) throw UsageError("--x gives the slice base point, d_in entries");
      Json arr = Json::array();
      for (const auto& f : extract_slice(nets[0], base, a.axis)) arr.push_back(to_json(f));
      write_text(a.out, arr.dump(2) + "\n");
    }
    return kPass;
  }
  if (op == "validate") {
    if (nets.size() != 1) throw UsageError("validate takes one --in network");
    auto diags = validate(nets[0]);
    for (const auto& d : diags) std::cout << "layer " << d.layer + 1 << ": " << d.message << "\n";
    if (diags.empty()) std::cout << "valid\n";
    return diags.empty() ? kPass : kFail;
  }
  throw UsageError("unknown calculus op '" + op + "'");
}

struct InapproxArgs {
  std::string range = "4:8", p = "1", out = "-";
  long N = -1;
  unsigned alpha = 1, resolution = 10;
};

int cmd_inapprox(const InapproxArgs& a) {
  auto [lo, hi] = parse_range(a.range);
  std::string text = inapprox_csv_header() + "\n";
  bool all = true;
  for (std::size_t j = lo; j <= hi; ++j) {
    std::size_t N = a.N > 0 ? static_cast<std::size_t>(a.N) : ((std::size_t(1) << j) + 1) / (4 * (1 + a.alpha));
    InapproxReport rep = sawtooth_inapprox_check(static_cast<unsigned>(j), N, a.alpha, parse_p(a.p), a.resolution);
    all = all && rep.pass;
    text += inapprox_csv_row(rep) + "\n";
  }
  write_text(a.out, text);
  return all ? kPass : kFail;
}

struct BernsteinArgs {
  std::string n_list = "32,64,128,256,512,1024", out = "-";
  double s = 1, p = 2;
  unsigned degree = 1;
  std::uint64_t seed = 1;
};

int cmd_bernstein(const BernsteinArgs& a) {
  std::vector<std::size_t> ns;
  for (const auto& q : parse_list(a.n_list)) ns.push_back(q.get_num().get_ui());
  BernsteinReport rep = bernstein_probe(ns, a.s, a.p, a.degree, a.seed);
  Json entries = Json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"label", e.label}, {"pieces", e.pieces}, {"besov", e.besov}, {"lp", e.lp}, {"ratio", e.ratio}});
  write_text(a.out, Json{{"s", rep.s}, {"p", rep.p}, {"sigma", rep.sigma}, {"entries", entries}, {"fit_from", rep.fit_from}, {"slope", rep.slope},
                         {"constant", rep.constant}, {"pass", rep.pass}}
                            .dump(2) +
                        "\n");
  return rep.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact calculus and experiments for ReLU-power networks"};
  app.require_subcommand(1);

  GadgetArgs ga;
  auto* gadget = app.add_subcommand("gadget", "Build a gadget network and check its budget");
  gadget->add_option("kind", ga.kind, "sawtooth|bspline|squash|mult|tensor-bspline|indicator|localize|poly")->required();
  gadget->add_option("--j", ga.j);
  gadget->add_option("--L", ga.L);
  gadget->add_option("--r", ga.r);
  gadget->add_option("--d", ga.d);
  gadget->add_option("--t", ga.t, "tensor B-spline order");
  gadget->add_option("--n", ga.n, "B-spline order");
  gadget->add_option("--variant", ga.variant, "weights|neurons");
  gadget->add_option("--eps", ga.eps);
  gadget->add_option("--path", ga.path, "indicator path: auto|general");
  gadget->add_option("--R", ga.R);
  gadget->add_option("--delta", ga.delta);
  gadget->add_option("--in", ga.in, "network g for localize");
  gadget->add_option("--coeffs", ga.coeffs, "polynomial coefficients, low to high");
  gadget->add_option("--out", ga.out);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("suite", va.suite, "calculus|gadgets|pieces|crossing|inapprox|besov|all")->required();
  verify->add_option("--trials", va.trials);
  verify->add_option("--seed", va.seed);
  verify->add_option("--resolution", va.resolution);
  verify->add_option("--out", va.out);
  verify->add_flag("--serial", va.serial, "disable OpenMP fan-out");

  CensusArgs ca;
  auto* census = app.add_subcommand("census", "Piece-count census");
  census->add_option("--family", ca.family, "random-net|sawtooth");
  census->add_option("--r", ca.r);
  census->add_option("--L", ca.L);
  census->add_option("--budget-range", ca.range, "lo:hi (W for random-net, j for sawtooth)");
  census->add_option("--trials", ca.trials);
  census->add_option("--seed", ca.seed);
  census->add_option("--out", ca.out);
  census->add_option("--format", ca.format, "csv|json");

  CalcArgs la;
  auto* calc = app.add_subcommand("calculus", "Apply a calculus operation to network files");
  calc->add_option("op", la.op)->required();
  calc->add_option("--in", la.in);
  calc->add_option("--out", la.out);
  calc->add_option("--L0", la.L0);
  calc->add_option("--a", la.a, "scale factor");
  calc->add_option("--r", la.r);
  calc->add_option("--s", la.s);
  calc->add_option("--P", la.P);
  calc->add_option("--Q", la.Q);
  calc->add_option("--x", la.x, "point, comma-separated rationals");
  calc->add_option("--axis", la.axis);
  calc->add_option("--sigma", la.sigma);
  calc->add_option("--sigma-name", la.sigma_name, "name of σ in the input (custom:<name>)");
  calc->add_option("--mode", la.mode, "general|two-layer");

  InapproxArgs ia;
  auto* inapprox = app.add_subcommand("inapprox", "Sawtooth inapproximability table (CSV)");
  inapprox->add_option("--j-range", ia.range);
  inapprox->add_option("--N", ia.N, "pieces (default the largest admissible)");
  inapprox->add_option("--alpha", ia.alpha);
  inapprox->add_option("--p", ia.p, "1, 2 or inf");
  inapprox->add_option("--resolution", ia.resolution);
  inapprox->add_option("--out", ia.out);

  BernsteinArgs ba;
  auto* bern = app.add_subcommand("bernstein", "Besov/L_p ratio probe");
  bern->add_option("--n", ba.n_list);
  bern->add_option("--s", ba.s);
  bern->add_option("--p", ba.p);
  bern->add_option("--degree", ba.degree);
  bern->add_option("--seed", ba.seed);
  bern->add_option("--out", ba.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    if (*gadget) return cmd_gadget(ga);
    if (*verify) return cmd_verify(va);
    if (*census) return cmd_census(ca);
    if (*calc) return cmd_calculus(la);
    if (*inapprox) return cmd_inapprox(ia);
    if (*bern) return cmd_bernstein(ba);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
