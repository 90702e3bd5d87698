#include "entcum/numverify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "entcum/combinat.hpp"
#include "entcum/convert.hpp"
#include "entcum/engine.hpp"
#include "entcum/errors.hpp"

namespace entcum {

namespace {

constexpr unsigned kGuardDigits = 10;

Rational factorial(unsigned k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return Rational(f);
}

}  // namespace

namespace {

std::mutex bernoulli_mu;
std::deque<Rational> bernoulli_cache;  // deque: references stay valid

// sum_{j<=k} C(k+1, j) B_j = 0
void extend_bernoulli(unsigned count) {
  while (bernoulli_cache.size() < count) {
    const unsigned k = static_cast<unsigned>(bernoulli_cache.size());
    if (k == 0) {
      bernoulli_cache.emplace_back(1);
      continue;
    }
    Rational acc = 0;
    mpz_class binom = 1;  // C(k+1, j)
    for (unsigned j = 0; j < k; ++j) {
      if (sgn(bernoulli_cache[j]) != 0) acc += Rational(binom) * bernoulli_cache[j];
      binom = binom * (k + 1 - j) / (j + 1);
    }
    Rational b = -acc / Rational(k + 1);
    b.canonicalize();
    bernoulli_cache.push_back(b);
  }
}

const Rational& bernoulli(unsigned i) {
  std::lock_guard lock(bernoulli_mu);
  extend_bernoulli(i + 1);
  return bernoulli_cache[i];
}

}  // namespace

std::vector<Rational> bernoulli_numbers(unsigned count) {
  std::lock_guard lock(bernoulli_mu);
  extend_bernoulli(count);
  return {bernoulli_cache.begin(), bernoulli_cache.begin() + count};
}

namespace {

// (-1)^(k+1) [ (k-1)!/x^k + k!/(2x^(k+1)) + sum_j B_2j (2j+k-1)!/((2j)! x^(2j+k)) ]
// and for k = 0: ln x - 1/(2x) - sum_j B_2j / (2j x^2j).
BigFloat polygamma_asymptotic(unsigned k, const BigFloat& x, unsigned digits) {
  const BigFloat inv = BigFloat(1L, digits) / x;
  const BigFloat inv2 = inv * inv;
  BigFloat sum(digits);
  BigFloat xpow = inv.pow(k);  // x^-k, updated to x^-(2j+k)
  if (k == 0) {
    sum = BigFloat::log(x) - inv / BigFloat(2L, digits);
    xpow = BigFloat(1L, digits);
  } else {
    sum = BigFloat(factorial(k - 1), digits) * xpow + BigFloat(factorial(k) / 2, digits) * xpow * inv;
  }
  const BigFloat tol = BigFloat(Rational(1), digits) / BigFloat(10L, digits).pow(digits + 5);
  constexpr unsigned kMaxTerms = 400;
  // ratio (2j+k-1)!/(2j)!, updated incrementally
  bool converged = false;
  for (unsigned j = 1; j <= kMaxTerms; ++j) {
    xpow *= inv2;
    Rational c;
    if (k == 0) {
      c = bernoulli(2 * j) / Rational(2 * j);
    } else {
      c = bernoulli(2 * j) * factorial(2 * j + k - 1) / factorial(2 * j);
    }
    BigFloat t = BigFloat(c, digits) * xpow;
    if (k == 0) {
      sum -= t;
    } else {
      sum += t;
    }
    if (compare(t.abs(), tol * sum.abs()) <= 0) {
      converged = true;
      break;
    }
  }
  if (!converged) throw InvariantViolation("polygamma asymptotic series did not converge");
  return (k == 0 || k % 2 == 1) ? sum : -sum;
}

}  // namespace

BigFloat polygamma_num(unsigned k, const Rational& z, unsigned digits) {
  if (sgn(z) <= 0) throw DomainError("polygamma argument must be positive");
  const unsigned work = digits + kGuardDigits;
  const long threshold = static_cast<long>(std::max(20u, work) + k);
  long shift = 0;
  if (z < threshold) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), z.get_num_mpz_t(), z.get_den_mpz_t());
    shift = threshold - fl.get_si();
  }
  // psi_k(z) = psi_k(z + N) - (-1)^k k! sum_{i<N} (z + i)^-(k+1)
  BigFloat tail(work);
  for (long i = 0; i < shift; ++i) {
    const BigFloat zi(z + i, work);
    tail += BigFloat(1L, work) / zi.pow(k + 1);
  }
  tail *= BigFloat(factorial(k), work);
  BigFloat r = polygamma_asymptotic(k, BigFloat(z + shift, work), work);
  if (k % 2 == 0) {
    r -= tail;
  } else {
    r += tail;
  }
  return r.rounded(digits);
}

BigFloat hurwitz_zeta(unsigned s, const Rational& z, unsigned digits) {
  if (s < 2) throw DomainError("hurwitz_zeta needs s >= 2");
  if (sgn(z) <= 0) throw DomainError("hurwitz_zeta argument must be positive");
  const unsigned work = digits + kGuardDigits;
  const long cutoff = 2 * static_cast<long>(work) + s;
  BigFloat sum(work);
  for (long i = 0; i < cutoff; ++i) sum += BigFloat(1L, work) / BigFloat(z + i, work).pow(s);
  const BigFloat a(z + cutoff, work);
  const BigFloat inv = BigFloat(1L, work) / a;
  BigFloat apow = inv.pow(s);  // a^-s
  sum += apow * a / BigFloat(static_cast<long>(s - 1), work);
  sum += apow / BigFloat(2L, work);
  const BigFloat tol = BigFloat(1L, work) / BigFloat(10L, work).pow(work + 5);
  // B_2j/(2j)! * s(s+1)...(s+2j-2) * a^(-s-2j+1)
  Rational rising = s;  // s(s+1)...(s+2j-2)
  BigFloat ap = apow * inv;  // a^(-s-1)
  for (unsigned j = 1; j <= 400; ++j) {
    if (j > 1) {
      rising *= Rational((s + 2 * j - 3) * static_cast<unsigned long>(s + 2 * j - 2));
      ap *= inv * inv;
    }
    const BigFloat t = BigFloat(bernoulli(2 * j) * rising / factorial(2 * j), work) * ap;
    sum += t;
    if (compare(t.abs(), tol * sum.abs()) <= 0) return sum.rounded(digits);
  }
  throw InvariantViolation("Euler-Maclaurin series did not converge");
}

BigFloat eval_expr(const SymExpr& e0, long m, long n, unsigned digits) {
  if (m < 1 || n < m) throw DomainError("eval_expr needs 1 <= m <= n");
  const unsigned work = digits + kGuardDigits;
  SymExpr e = e0;
  std::array<Rational, kNumVars> point;
  if (e.context() == VarContext::MN) {
    if (m == 1) e = specialize_m_one(e);
    point = {Rational(m), Rational(n)};
  } else {
    point = {Rational(m), Rational(n - m)};
  }
  auto base_value = [&](PsiBase b) -> Rational {
    switch (b) {
      case PsiBase::MPlusAlpha: return Rational(n);
      case PsiBase::Alpha: return Rational(n - m);
      case PsiBase::MN: return Rational(m * n);
      case PsiBase::N: return Rational(n);
      case PsiBase::NMinusM: return Rational(n - m);
    }
    throw InvariantViolation("unknown polygamma base");
  };
  std::map<std::pair<unsigned, Rational>, BigFloat> psi_cache;
  auto psi = [&](unsigned k, const Rational& z) -> const BigFloat& {
    auto key = std::make_pair(k, z);
    auto it = psi_cache.find(key);
    if (it == psi_cache.end()) {
      if (sgn(z) <= 0) throw PoleError("polygamma argument " + z.get_str() + " is not positive");
      it = psi_cache.emplace(key, polygamma_num(k, z, work)).first;
    }
    return it->second;
  };
  Rational exact_part = 0;
  BigFloat sum(work);
  for (const auto& [factors, coeff] : ordered_terms(e)) {
    const Rational c = coeff.evaluate(point);
    if (factors.empty()) {
      exact_part += c;
      continue;
    }
    BigFloat t(c, work);
    for (const auto& f : factors) {
      const BigFloat& v = psi(f.order, base_value(f.base) + f.offset);
      t *= v.pow(f.power);
    }
    sum += t;
  }
  sum += BigFloat(exact_part, work);
  return sum.rounded(digits);
}

// ---- sampling

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ (stream * 0xd1b54a32d192ed03ULL + 1))) {}

std::uint64_t CounterRng::next() { return mix64(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double th = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(th);
  return r * std::cos(th);
}

std::vector<double> hermitian_eigenvalues(unsigned m, std::vector<double> re, std::vector<double> im) {
  using cd = std::complex<double>;
  std::vector<cd> a(static_cast<std::size_t>(m) * m);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = {re[i], im[i]};
  auto at = [&](unsigned i, unsigned j) -> cd& { return a[static_cast<std::size_t>(i) * m + j]; };
  constexpr double kTol = 1e-13;
  constexpr int kMaxSweeps = 100;
  double total = 0;
  for (const auto& v : a) total += std::norm(v);
  const double scale = std::sqrt(total);
  bool converged = (m <= 1) || scale == 0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0;
    for (unsigned p = 0; p < m; ++p)
      for (unsigned q = p + 1; q < m; ++q) off += 2 * std::norm(at(p, q));
    if (std::sqrt(off) <= kTol * scale) {
      converged = true;
      break;
    }
    for (unsigned p = 0; p < m; ++p) {
      for (unsigned q = p + 1; q < m; ++q) {
        const cd apq = at(p, q);
        const double r = std::abs(apq);
        if (r == 0) continue;
        const cd ph = apq / r;  // e^{i phi}
        const double app = at(p, p).real(), aqq = at(q, q).real();
        const double theta = (aqq - app) / (2 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        // U = diag(1, e^{-i phi}) [[c, s], [-s, c]]; A <- U^dagger A U
        const cd upp = c, upq = s, uqp = -s * std::conj(ph), uqq = c * std::conj(ph);
        for (unsigned k = 0; k < m; ++k) {
          const cd x = at(k, p), y = at(k, q);
          at(k, p) = x * upp + y * uqp;
          at(k, q) = x * upq + y * uqq;
        }
        for (unsigned k = 0; k < m; ++k) {
          const cd x = at(p, k), y = at(q, k);
          at(p, k) = std::conj(upp) * x + std::conj(uqp) * y;
          at(q, k) = std::conj(upq) * x + std::conj(uqq) * y;
        }
        at(p, q) = at(q, p) = 0;
        at(p, p) = at(p, p).real();
        at(q, q) = at(q, q).real();
      }
    }
  }
  if (!converged) {
    double off = 0;
    for (unsigned p = 0; p < m; ++p)
      for (unsigned q = p + 1; q < m; ++q) off += 2 * std::norm(at(p, q));
    if (std::sqrt(off) > kTol * scale) throw InvariantViolation("Jacobi eigensolver did not converge");
  }
  std::vector<double> ev(m);
  for (unsigned i = 0; i < m; ++i) ev[i] = at(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> sample_spectrum(unsigned m, unsigned n, CounterRng& rng) {
  if (m < 1 || n < m || n > 64) throw DomainError("sample_spectrum needs 1 <= m <= n <= 64");
  const double sd = std::sqrt(0.5);
  std::vector<std::complex<double>> z(static_cast<std::size_t>(m) * n);
  for (auto& v : z) {
    const double x = rng.normal() * sd;
    v = {x, rng.normal() * sd};
  }
  std::vector<double> re(static_cast<std::size_t>(m) * m), im(re.size());
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = i; j < m; ++j) {
      std::complex<double> acc = 0;
      for (unsigned k = 0; k < n; ++k) acc += z[i * n + k] * std::conj(z[j * n + k]);
      re[i * m + j] = acc.real();
      im[i * m + j] = acc.imag();
      re[j * m + i] = acc.real();
      im[j * m + i] = -acc.imag();
    }
    im[i * m + i] = 0;
  }
  auto ev = hermitian_eigenvalues(m, std::move(re), std::move(im));
  for (auto& v : ev) {
    if (v < -1e-12) throw InvariantViolation("negative Wishart eigenvalue");
    v = std::max(v, 0.0);
  }
  return ev;
}

namespace {
constexpr double kTiny = 1e-300;
}

double entropy_S(const std::vector<double>& x) {
  double total = 0;
  for (double v : x) total += v;
  if (total <= 0) throw DomainError("entropy of a zero spectrum");
  double s = 0;
  for (double v : x) {
    const double l = v / total;
    if (l >= kTiny) s -= l * std::log(l);
  }
  return std::clamp(s, 0.0, std::log(static_cast<double>(x.size())));
}

double entropy_T(const std::vector<double>& x) {
  double t = 0;
  for (double v : x)
    if (v >= kTiny) t += v * std::log(v);
  return t;
}

SampleBatch sample_batch(unsigned m, unsigned n, std::size_t count, std::uint64_t seed, Statistic stat,
                         unsigned workers) {
  if (m < 1 || n < m || n > 64) throw DomainError("sampling needs 1 <= m <= n <= 64");
  SampleBatch b{m, n, seed, stat, std::vector<double>(count)};
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      CounterRng rng(seed, i);
      const auto ev = sample_spectrum(m, n, rng);
      b.values[i] = stat == Statistic::S ? entropy_S(ev) : entropy_T(ev);
    }
  };
  if (workers == 1) {
    work(0, count);
    return b;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = count * w / workers, hi = count * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] {
      try {
        work(lo, hi);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return b;
}

namespace {

// cumulants 1..L from power sums about c (sums[j] = sum (x - c)^j)
std::vector<long double> cumulants_from_sums(const std::vector<long double>& sums, long double c, unsigned L) {
  const long double cnt = sums[0];
  std::vector<long double> raw(L + 1);
  for (unsigned j = 0; j <= L; ++j) raw[j] = sums[j] / cnt;
  const long double mean = raw[1];
  std::vector<long double> central(L, 0.0L);  // central[j-1] = E(x - mean)^j
  for (unsigned j = 1; j <= L; ++j) {
    long double acc = 0, binom = 1, negpow = 1;
    // sum_i C(j, i) raw[j - i] (-mean)^i
    for (unsigned i = 0; i <= j; ++i) {
      acc += binom * raw[j - i] * negpow;
      binom = binom * (j - i) / (i + 1);
      negpow *= -mean;
    }
    central[j - 1] = acc;
  }
  central[0] = 0;
  auto kappa = cumulants_from_moments(central);
  kappa[0] = c + mean;
  return kappa;
}

}  // namespace

std::vector<CumulantEstimate> estimate_cumulants(const std::vector<double>& values, unsigned max_order) {
  if (values.size() < kMinSamples) throw DomainError("at least 1000 samples are needed");
  if (max_order < 1 || max_order > 6) throw DomainError("cumulant order must be in 1..6");
  const std::size_t N = values.size();
  const unsigned L = max_order;
  long double c = 0;
  for (double v : values) c += v;
  c /= static_cast<long double>(N);
  const unsigned B = kJackknifeBatches;
  std::vector<std::vector<long double>> batch(B, std::vector<long double>(L + 1, 0.0L));
  for (unsigned b = 0; b < B; ++b) {
    const std::size_t lo = N * b / B, hi = N * (b + 1) / B;
    for (std::size_t i = lo; i < hi; ++i) {
      const long double d = values[i] - c;
      long double p = 1;
      for (unsigned j = 0; j <= L; ++j) {
        batch[b][j] += p;
        p *= d;
      }
    }
  }
  std::vector<long double> total(L + 1, 0.0L);
  for (const auto& s : batch)
    for (unsigned j = 0; j <= L; ++j) total[j] += s[j];
  const auto full = cumulants_from_sums(total, c, L);
  std::vector<std::vector<long double>> loo;
  for (unsigned b = 0; b < B; ++b) {
    std::vector<long double> s(L + 1);
    for (unsigned j = 0; j <= L; ++j) s[j] = total[j] - batch[b][j];
    loo.push_back(cumulants_from_sums(s, c, L));
  }
  std::vector<CumulantEstimate> out(L);
  for (unsigned l = 0; l < L; ++l) {
    long double mean = 0;
    for (const auto& k : loo) mean += k[l];
    mean /= B;
    long double var = 0;
    for (const auto& k : loo) var += (k[l] - mean) * (k[l] - mean);
    var *= static_cast<long double>(B - 1) / B;
    out[l] = {static_cast<double>(full[l]), static_cast<double>(std::sqrt(var))};
  }
  return out;
}

VerificationReport verify(Engine& engine, const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  for (unsigned l : opt.orders)
    if (l < 1 || l > 6) throw DomainError("verification orders must lie in 1..6");
  if (opt.m < 1 || opt.n < opt.m || opt.n > 64) throw DomainError("verification needs 1 <= m <= n <= 64");
  VerificationReport r;
  r.options = opt;
  const unsigned L = opt.orders.empty() ? 1 : *std::max_element(opt.orders.begin(), opt.orders.end());
  const auto batch = sample_batch(opt.m, opt.n, opt.samples, opt.seed, Statistic::S, opt.workers);
  const auto est = estimate_cumulants(batch.values, L);
  r.pass = true;
  for (unsigned l : opt.orders) {
    OrderResult o;
    o.order = l;
    const BigFloat exact = eval_expr(cumulant_S(engine, l), opt.m, opt.n, opt.digits);
    o.exact = exact.to_string(opt.digits);
    o.estimate = est[l - 1].estimate;
    o.stderr_ = est[l - 1].stderr_;
    const double diff = o.estimate - exact.to_double();
    if (o.stderr_ > 0) {
      o.z = diff / o.stderr_;
    } else {
      // degenerate sample (m = 1): exact agreement or bust
      o.z = std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(exact.to_double())) ? 0.0 : HUGE_VAL;
    }
    o.pass = std::abs(o.z) <= opt.threshold;
    o.gated = l <= kMaxGatedOrder;
    if (o.gated && !o.pass) r.pass = false;
    r.orders.push_back(o);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string report_json(const VerificationReport& r, bool with_timing) {
  nlohmann::ordered_json j;
  j["m"] = r.options.m;
  j["n"] = r.options.n;
  j["N"] = r.options.samples;
  j["seed"] = r.options.seed;
  j["workers"] = r.options.workers;
  j["threshold"] = r.options.threshold;
  j["orders"] = nlohmann::ordered_json::array();
  for (const auto& o : r.orders) {
    nlohmann::ordered_json e;
    e["order"] = o.order;
    e["exact"] = o.exact;
    e["estimate"] = o.estimate;
    e["stderr"] = o.stderr_;
    if (std::isfinite(o.z)) {
      e["z"] = o.z;
    } else {
      e["z"] = nullptr;
    }
    e["pass"] = o.pass;
    e["gated"] = o.gated;
    j["orders"].push_back(e);
  }
  j["pass"] = r.pass;
  if (with_timing) j["wall_seconds"] = r.wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace entcum
