#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entcum/bigfloat.hpp"
#include "entcum/symexpr.hpp"

namespace entcum {

class Engine;

/// B_0 .. B_count-1 (B_1 = -1/2).
std::vector<Rational> bernoulli_numbers(unsigned count);

/// psi_k(z) for rational z > 0, good to at least digits - 5 significant
/// digits. Shifts z upward, then sums the asymptotic series.
BigFloat polygamma_num(unsigned k, const Rational& z, unsigned digits);

/// Hurwitz zeta(s, z) for integer s >= 2 by Euler-Maclaurin summation with
/// its own cutoff. psi_k(z) = (-1)^(k+1) k! zeta(k+1, z) for k >= 1.
BigFloat hurwitz_zeta(unsigned s, const Rational& z, unsigned digits);

/// Value of e at integers (m, n), 1 <= m <= n. {m, alpha} expressions are
/// read with alpha = n - m. Throws PoleError if a coefficient has a pole or
/// a polygamma argument is not positive.
BigFloat eval_expr(const SymExpr& e, long m, long n, unsigned digits);

/// Counter-based generator: draw number c of stream `key` is a fixed mix of
/// (key, c), so any sub-range of counters can be produced independently.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  /// Uniform on (0, 1).
  double uniform();
  /// Standard normal (Box-Muller, both outputs used).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

/// Eigenvalues of Z Z^dagger, Z an m x n matrix of standard complex
/// Gaussians (E|z|^2 = 1). Ascending, clamped at 0.
std::vector<double> sample_spectrum(unsigned m, unsigned n, CounterRng& rng);

/// Eigenvalues of an m x m Hermitian matrix (row-major, re/im split) by
/// cyclic Jacobi. Throws InvariantViolation when 100 sweeps do not converge.
std::vector<double> hermitian_eigenvalues(unsigned m, std::vector<double> re, std::vector<double> im);

enum class Statistic { S, T };

/// -sum lambda ln lambda with lambda = x / sum x.
double entropy_S(const std::vector<double>& x);
/// sum x ln x.
double entropy_T(const std::vector<double>& x);

struct SampleBatch {
  unsigned m = 1, n = 1;
  std::uint64_t seed = 0;
  Statistic stat = Statistic::S;
  std::vector<double> values;
};

/// Sample i always uses stream i, so the values do not depend on the
/// worker count.
SampleBatch sample_batch(unsigned m, unsigned n, std::size_t count, std::uint64_t seed, Statistic stat = Statistic::S,
                         unsigned workers = 1);

struct CumulantEstimate {
  double estimate = 0;
  double stderr_ = 0;
};

inline constexpr std::size_t kMinSamples = 1000;
inline constexpr unsigned kJackknifeBatches = 100;

/// Plug-in cumulants 1..max_order with delete-one-batch jackknife errors.
std::vector<CumulantEstimate> estimate_cumulants(const std::vector<double>& values, unsigned max_order);

struct VerifyOptions {
  unsigned m = 2, n = 2;
  std::vector<unsigned> orders{1, 2};
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double threshold = 4.0;
  unsigned workers = 1;
  unsigned digits = 30;
};

struct OrderResult {
  unsigned order = 0;
  std::string exact;
  double estimate = 0, stderr_ = 0, z = 0;
  bool pass = false;
  bool gated = false;
};

struct VerificationReport {
  VerifyOptions options;
  std::vector<OrderResult> orders;
  double wall_seconds = 0;
  bool pass = false;
};

/// Orders up to 3 decide `pass`; higher ones are informational.
inline constexpr unsigned kMaxGatedOrder = 3;

VerificationReport verify(Engine& engine, const VerifyOptions& opt);

/// JSON report; wall time only when asked, so reports stay reproducible.
std::string report_json(const VerificationReport& r, bool with_timing = false);

}  // namespace entcum
