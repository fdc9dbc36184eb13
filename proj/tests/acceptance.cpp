// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 all criteria
//   acceptance --criterion 3   one criterion (5a and 5b select the two halves of 5)
#include "nncalc/approx.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

using namespace nncalc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome from_recorder(const Recorder& rec) {
  Outcome o;
  o.ok = rec.failures() == 0;
  o.detail = std::to_string(rec.checks()) + " checks";
  for (const auto& [name, e] : rec.entries())
    if (e.failures) o.detail += "; FAIL " + name + " " + std::to_string(e.failures) + "/" + std::to_string(e.checks);
  return o;
}

SuiteOptions options(std::size_t trials) {
  SuiteOptions opt;
  opt.trials = trials;
  opt.seed = 7;
  opt.resolution = 10;
  return opt;
}

Outcome criterion1() {
  Recorder rec;
  check_calculus(rec, options(100));
  return from_recorder(rec);
}

Outcome criterion2() {
  Recorder rec;
  check_sawtooth(rec, options(1));
  return from_recorder(rec);
}

Outcome criterion3() {
  Recorder rec;
  check_pieces(rec, options(200));  // 200 ϱ_1 and 50 ϱ_2 networks
  return from_recorder(rec);
}

Outcome criterion4() {
  Recorder rec;
  check_crossing(rec, options(100));
  return from_recorder(rec);
}

// First half: lower constant at N = ⌊(2^j + 1)/8⌋.
Outcome criterion5a() {
  Outcome o;
  for (unsigned j = 4; j <= 8; ++j) {
    std::size_t N = ((std::size_t(1) << j) + 1) / 8;
    InapproxReport r = sawtooth_inapprox_check(j, N, 1, 1, 10);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%sj=%u N=%zu err=%.6f margin=%.6f", o.detail.empty() ? "" : "; ", j, N,
                  r.dp_error, r.margin);
    o.detail += buf;
    o.ok = o.ok && r.pass;
  }
  return o;
}

// Second half: zero error at N = 2^{j−1} + 1, taken literally.
Outcome criterion5b() {
  Outcome o;
  for (unsigned j = 4; j <= 8; ++j) {
    std::size_t N = (std::size_t(1) << (j - 1)) + 1;
    FreeKnotResult r = best_free_knot(sawtooth_pw(j), N, 1, 1, 10);
    char buf[120];
    std::snprintf(buf, sizeof buf, "%sj=%u N=%zu err=%.6f", o.detail.empty() ? "" : "; ", j, N, r.error);
    o.detail += buf;
    o.ok = o.ok && r.error_pow_hi == 0;
  }
  return o;
}

Outcome criterion5() {
  Outcome a = criterion5a(), b = criterion5b();
  return {a.ok && b.ok, "[a: " + std::string(a.ok ? "PASS" : "FAIL") + "] " + a.detail + " [b: " +
                            (b.ok ? "PASS" : "FAIL") + "] " + b.detail};
}

Outcome criterion6() {
  Recorder rec;
  check_besov(rec, options(1));
  return from_recorder(rec);
}

Outcome criterion7() {
  Recorder rec;
  check_gadget_exactness(rec, options(1));
  return from_recorder(rec);
}

Outcome criterion8() {
  Recorder rec;
  check_roundtrip(rec, options(100));
  Outcome o = from_recorder(rec);
  // Parallel and serial runs of the full suite must agree byte for byte.
  SuiteOptions par = options(20), ser = options(20);
  ser.parallel = false;
  std::string first = suite_report("all", par, run_suite("all", par)).dump(2);
  std::string second = suite_report("all", ser, run_suite("all", ser)).dump(2);
  bool same = first == second;
  o.ok = o.ok && same;
  o.detail += same ? "; verify all --seed 7 reports identical" : "; verify all reports DIFFER";
  return o;
}

struct Criterion {
  std::string id;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{{"1", 60, criterion1},  {"2", 30, criterion2},   {"3", 120, criterion3},
                             {"4", 30, criterion4},  {"5", 120, criterion5},  {"6", 60, criterion6},
                             {"7", 60, criterion7},  {"8", 600, criterion8},  {"5a", 120, criterion5a},
                             {"5b", 120, criterion5b}};
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  bool any = false, ok = true;
  for (const auto& c : all) {
    bool half = c.id.size() > 1;
    if (only.empty() ? half : c.id != only) continue;
    any = true;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = s < c.limit_s;
    bool pass = o.ok && in_time;
    ok = ok && pass;
    std::printf("criterion %s: %s (%.1f s of %.0f s%s) %s\n", c.id.c_str(), pass ? "PASS" : "FAIL", s, c.limit_s,
                in_time ? "" : ", over time", o.detail.c_str());
    std::fflush(stdout);
  }
  if (!any) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}
