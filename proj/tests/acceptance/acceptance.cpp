// One line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "entcum/combinat.hpp"
#include "entcum/convert.hpp"
#include "entcum/engine.hpp"
#include "entcum/numverify.hpp"
#include "fixtures.hpp"
#include "worked.hpp"

using namespace entcum;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string artefact;  // timing-free record, compared across runs
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Shared state for one cold run.
struct Run {
  fs::path cache;
  Engine engine;
  std::vector<SymExpr> kS;  // kappa_1..6(S)
  explicit Run(const fs::path& dir) : cache(dir), engine((fs::remove_all(dir), fs::create_directories(dir), dir)) {}
};

Outcome exact_fixtures(Run& r) {
  Outcome o;
  const auto names = fixtures::cumulant_fixture_names();
  const auto t0 = Clock::now();
  double t4 = 0;
  for (unsigned l = 1; l <= 6; ++l) {
    r.kS.push_back(cumulant_S(r.engine, l));
    if (l == 4) t4 = seconds_since(t0);
    const bool eq = expr_equal(r.kS.back(), fixtures::text_fixture(names[l - 1]));
    if (!eq) o.detail += " mismatch at l=" + std::to_string(l) + ";";
    o.pass = o.pass && eq;
    o.artefact += to_json(r.kS.back());
  }
  const double t6 = seconds_since(t0);
  o.pass = o.pass && t4 <= 60 && t6 <= 1800;
  o.detail += " l=1..6 exact; l<=4 in " + fmt("%.2f", t4) + " s, l<=6 in " + fmt("%.2f", t6) + " s";
  return o;
}

Outcome mean_fixtures(Run&) {
  Outcome o;
  for (unsigned k = 2; k <= 6; ++k) {
    const bool t = expr_equal(mean_T(k), fixtures::text_fixture("mT" + std::to_string(k)));
    const bool r = expr_equal(mean_R(k), fixtures::text_fixture("kR" + std::to_string(k)));
    if (!t) o.detail += " mean_T(" + std::to_string(k) + ") differs;";
    if (!r) o.detail += " mean_R(" + std::to_string(k) + ") differs;";
    o.pass = o.pass && t && r;
    o.artefact += to_json(mean_T(k)) + to_json(mean_R(k));
  }
  if (o.pass) o.detail = " mean_T and mean_R, k=2..6";
  return o;
}

Outcome induced_fixtures(Run& r) {
  Outcome o;
  const SymExpr t1 = r.engine.cumulant_T(1), t2 = r.engine.cumulant_T(2);
  o.pass = expr_equal(t1, fixtures::text_fixture("T1")) && expr_equal(t2, fixtures::text_fixture("T2"));
  o.detail = " kappa_1(T), kappa_2(T)";
  o.artefact = to_json(t1) + to_json(t2);
  return o;
}

Outcome leading_terms(Run& r) {
  Outcome o;
  for (unsigned l = 2; l <= 6; ++l) {
    const SymExpr top = terms_with_order(r.kS[l - 1], l - 1);
    const bool ok = r.kS[l - 1].max_order() == static_cast<int>(l) - 1 && expr_equal(top, leading_term(l));
    if (!ok) o.detail += " l=" + std::to_string(l) + " differs;";
    o.pass = o.pass && ok;
    o.artefact += to_json(top);
  }
  if (o.pass) o.detail = " highest polygamma order terms, l=2..6";
  return o;
}

Outcome degenerate_subsystem(Run& r) {
  Outcome o;
  for (unsigned l = 1; l <= 6; ++l) {
    const bool z = specialize_m_one(r.kS[l - 1]).is_zero();
    if (!z) o.detail += " l=" + std::to_string(l) + " survives;";
    o.pass = o.pass && z;
  }
  if (o.pass) o.detail = " m=1 gives exact zero, l=1..6";
  o.artefact = o.detail;
  return o;
}

Outcome recurrence_cross_check(Run&) {
  Outcome o;
  for (unsigned k = 2; k <= 10; ++k) {
    const bool ok = expr_equal(mean_R(k), mean_R_alt(k));
    if (!ok) o.detail += " k=" + std::to_string(k) + " differs;";
    o.pass = o.pass && ok;
    o.artefact += to_json(mean_R(k));
  }
  if (o.pass) o.detail = " two-term and three-term recursions agree, k=2..10";
  return o;
}

Outcome worked_examples(Run& r) {
  Outcome o;
  const auto cases = fixtures::worked_cases(r.engine);
  for (const auto& c : cases) {
    const bool ok = expr_equal(c.actual, c.expected);
    if (!ok) o.detail += " " + c.name + " differs;";
    o.pass = o.pass && ok;
    o.artefact += c.name + to_json(c.actual);
  }
  if (o.pass) o.detail = " " + std::to_string(cases.size()) + " hand-expanded structures";
  return o;
}

Outcome moment_round_trip(Run&) {
  Outcome o;
  std::mt19937_64 gen(20240601);
  int trials = 0;
  for (; trials < 200; ++trials) {
    const unsigned order = 1 + static_cast<unsigned>(gen() % 8);
    std::vector<Rational> kap(order), mu(order);
    for (auto* v : {&kap, &mu}) {
      for (auto& x : *v) {
        x = Rational(static_cast<long>(gen() % 2001) - 1000, static_cast<long>(gen() % 97) + 1);
        x.canonicalize();
      }
    }
    const bool ok = cumulants_from_moments(moments_from_cumulants(kap)) == kap &&
                    moments_from_cumulants(cumulants_from_moments(mu)) == mu;
    o.pass = o.pass && ok;
    o.artefact += moments_from_cumulants(kap).back().get_str() + ";";
  }
  o.detail = " " + std::to_string(trials) + " random rational vectors, orders 1..8";
  return o;
}

BigFloat binom(unsigned n, unsigned k, unsigned P) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return BigFloat(Rational(c), P);
}

// mu_n = sum_k C(n-1, k) kappa_{k+1} mu_{n-1-k}; kappa[0] is the first cumulant
std::vector<BigFloat> moments_of(const std::vector<BigFloat>& kappa, unsigned P) {
  std::vector<BigFloat> mu{BigFloat(1L, P)};
  for (unsigned n = 1; n <= kappa.size(); ++n) {
    BigFloat acc(P);
    for (unsigned k = 0; k < n; ++k) acc += binom(n - 1, k, P) * kappa[k] * mu[n - 1 - k];
    mu.push_back(acc);
  }
  return mu;
}

std::vector<BigFloat> cumulants_of(const std::vector<BigFloat>& mu, unsigned P) {
  std::vector<BigFloat> kappa;
  for (unsigned n = 1; n < mu.size(); ++n) {
    BigFloat acc = mu[n];
    for (unsigned k = 0; k + 1 < n; ++k) acc -= binom(n - 1, k, P) * kappa[k] * mu[n - 1 - k];
    kappa.push_back(acc);
  }
  return kappa;
}

// kappa_1..L(S) from S = ln theta - T / theta, theta ~ Gamma(mn) independent
// of the normalized spectrum:
//   E[T^q] = (mn)_q sum_j C(q, j) (-1)^j E[ln^(q-j) theta'] E[S^j]
// where theta' ~ Gamma(mn + q), whose log-cumulants are psi_k(mn + q).
std::vector<BigFloat> numeric_route(Engine& engine, long m, long n, unsigned L, unsigned P) {
  std::vector<BigFloat> kT;
  for (unsigned j = 1; j <= L; ++j) kT.push_back(eval_expr(engine.cumulant_T(j), m, n, P));
  const auto ET = moments_of(kT, P);
  std::vector<BigFloat> ES{BigFloat(1L, P)};
  for (unsigned q = 1; q <= L; ++q) {
    std::vector<BigFloat> logk;
    for (unsigned k = 0; k < q; ++k) logk.push_back(polygamma_num(k, Rational(m * n + q), P));
    const auto logm = moments_of(logk, P);
    BigFloat poch(1L, P);
    for (unsigned i = 0; i < q; ++i) poch *= BigFloat(static_cast<long>(m * n + i), P);
    BigFloat rest = ET[q] / poch;
    for (unsigned j = 0; j < q; ++j) {
      BigFloat t = binom(q, j, P) * logm[q - j] * ES[j];
      rest -= (j % 2 == 0) ? t : -t;
    }
    ES.push_back(q % 2 == 0 ? rest : -rest);
  }
  return cumulants_of(ES, P);
}

double rel_error(const BigFloat& a, const BigFloat& b) {
  const BigFloat diff = (a - b).abs();
  if (diff.is_zero()) return 0.0;
  BigFloat scale = a.abs();
  if (scale < b.abs()) scale = b.abs();
  return (diff / scale).to_double();
}

Outcome numeric_identity(Run& r) {
  Outcome o;
  const auto t0 = Clock::now();
  const unsigned P = 100;
  const auto names = fixtures::cumulant_fixture_names();
  std::vector<SymExpr> fx;
  for (const auto& n : names) fx.push_back(fixtures::text_fixture(n));
  std::mt19937_64 gen(777);
  double worst = 0, worst_route = 0;
  for (int p = 0; p < 20; ++p) {
    long m = 2 + static_cast<long>(gen() % 11), n = 2 + static_cast<long>(gen() % 11);
    if (m > n) std::swap(m, n);
    o.artefact += "(" + std::to_string(m) + "," + std::to_string(n) + ")";
    const auto route = numeric_route(r.engine, m, n, 6, P + 40);
    for (unsigned l = 1; l <= 6; ++l) {
      const BigFloat a = eval_expr(r.kS[l - 1], m, n, P);
      const BigFloat b = eval_expr(fx[l - 1], m, n, P);
      worst = std::max(worst, rel_error(a, b));
      worst_route = std::max(worst_route, rel_error(eval_expr(fx[l - 1], m, n, P + 30), route[l - 1]));
      o.artefact += a.to_string(P);
    }
  }
  const double t = seconds_since(t0);
  o.pass = worst <= 1e-25 && worst_route <= 1e-25 && t <= 120;
  o.detail = " 20 points x 6 orders at 100 digits, max rel. error " + fmt("%.1e", worst) +
             " (fixture vs numeric moment route " + fmt("%.1e", worst_route) + "), " + fmt("%.2f", t) + " s";
  return o;
}

Outcome monte_carlo(Run& r) {
  Outcome o;
  struct Point {
    unsigned m, n;
    std::vector<unsigned> orders;
    std::size_t N;
    double budget;
  };
  const Point pts[] = {{2, 2, {1, 2}, 100000, 180},
                       {2, 3, {1, 2}, 100000, 180},
                       {3, 3, {1, 2}, 100000, 180},
                       {2, 3, {3}, 1000000, 600}};
  std::uint64_t seed = 1001;
  for (const auto& pt : pts) {
    VerifyOptions vo;
    vo.m = pt.m;
    vo.n = pt.n;
    vo.orders = pt.orders;
    vo.samples = pt.N;
    vo.seed = seed++;
    vo.threshold = 4.0;
    const auto rep = verify(r.engine, vo);
    const bool ok = rep.pass && rep.wall_seconds <= pt.budget;
    o.pass = o.pass && ok;
    o.detail += " (" + std::to_string(pt.m) + "," + std::to_string(pt.n) + ")";
    for (const auto& x : rep.orders) o.detail += " z" + std::to_string(x.order) + "=" + fmt("%+.2f", x.z);
    o.detail += " [" + fmt("%.1f", rep.wall_seconds) + " s];";
    o.artefact += report_json(rep);
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(Run&)> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "exact cumulant fixtures", exact_fixtures},
      {2, "mean fixtures", mean_fixtures},
      {3, "induced entropy fixtures", induced_fixtures},
      {4, "leading polygamma terms", leading_terms},
      {5, "degenerate subsystem", degenerate_subsystem},
      {6, "mean recursion cross-check", recurrence_cross_check},
      {7, "worked low-order structures", worked_examples},
      {8, "moment/cumulant round trip", moment_round_trip},
      {9, "numeric identity at 100 digits", numeric_identity},
      {10, "Monte Carlo agreement", monte_carlo},
  };
  return c;
}

void report(int id, const char* title, const Outcome& o, double secs) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << title << "):" << o.detail << "  ["
            << fmt("%.2f", secs) << " s]" << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::string(argv[1]) == "--no-repeat";
  const fs::path base = fs::temp_directory_path() / ("entcum_acceptance_" + std::to_string(::getpid()));
  bool all = true;
  std::vector<std::string> first;
  {
    Run run(base / "run1");
    for (const auto& c : criteria()) {
      const auto t0 = Clock::now();
      Outcome o;
      try {
        o = c.fn(run);
      } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string(" exception: ") + e.what();
      }
      report(c.id, c.title, o, seconds_since(t0));
      all = all && o.pass;
      first.push_back(o.artefact);
    }
  }
  Outcome det;
  const auto t0 = Clock::now();
  if (quick) {
    det.pass = false;
    det.detail = " skipped (--no-repeat)";
  } else {
    try {
      Run run(base / "run2");
      std::size_t differ = 0;
      for (std::size_t i = 0; i < criteria().size(); ++i) {
        const Outcome o = criteria()[i].fn(run);
        if (o.artefact != first[i]) {
          ++differ;
          det.detail += " criterion " + std::to_string(criteria()[i].id) + " differs;";
        }
      }
      det.pass = differ == 0;
      if (det.pass) det.detail = " second cold-cache run of 1-10 is bit-identical";
    } catch (const std::exception& e) {
      det.pass = false;
      det.detail = std::string(" exception: ") + e.what();
    }
  }
  report(11, "determinism", det, seconds_since(t0));
  all = all && det.pass;
  fs::remove_all(base);
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
