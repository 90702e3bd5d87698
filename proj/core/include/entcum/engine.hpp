#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "entcum/symexpr.hpp"

namespace entcum {

/// T_k = sum x^k ln x, R_k = sum x^k over Wishart eigenvalues.
enum class StatKind : std::uint8_t { TK, RK };

/// kappa_l(X_k, T, ..., T) with l-1 trailing copies of T = T_1.
struct CumulantKey {
  StatKind kind = StatKind::TK;
  unsigned k = 1;
  unsigned l = 1;

  auto operator<=>(const CumulantKey&) const = default;
};

/// "TK_1_2" style name, also the cache file stem.
std::string key_name(const CumulantKey& key);
std::optional<CumulantKey> parse_key_name(std::string_view name);

/// Pure mean recursions (no store needed).
SymExpr mean_R(unsigned k);
/// Three-term recursion seeded with kappa(R_0), kappa(R_1); cross-check only.
SymExpr mean_R_alt(unsigned k);
SymExpr mean_T(unsigned k);

/// m(m+alpha) = kappa(R_1), the scalar in front of every H term.
SymExpr kappa_R1();

/// FNV-1a over bytes, hex encoded.
std::string content_hash(std::string_view bytes);

struct EngineStats {
  std::size_t computed = 0;
  std::size_t cache_hits = 0;
  std::size_t cache_writes = 0;
  std::size_t cache_rejected = 0;
};

/// Memoized joint-cumulant store plus the decoupled integrals built on it.
/// Single-writer: one thread drives a given Engine.
class Engine {
 public:
  /// With a cache directory, keys are read from and written to
  /// <dir>/<key_name>.json; entries failing the hash check are recomputed.
  explicit Engine(std::optional<std::filesystem::path> cache_dir = std::nullopt);

  const SymExpr& joint_cumulant(const CumulantKey& key);
  /// kappa_l(T); checks polynomial coefficients and the single base m+alpha.
  SymExpr cumulant_T(unsigned l);

  /// Sum over set partitions of the shifted-difference products. kind and r
  /// name the slot-1 statistic; s is the operand count.
  SymExpr H_integral(StatKind kind, unsigned r, unsigned s);
  SymExpr h_integral(StatKind kind, unsigned r, unsigned s);
  SymExpr D_integral(StatKind kind, unsigned k, unsigned l);

  SymExpr delta_T(unsigned l, unsigned k);
  SymExpr delta_R(unsigned l, unsigned k);

  /// kappa^+ (direction +1) or kappa^- (direction -1) of a stored key.
  const SymExpr& shifted(const CumulantKey& key, int direction);

  const std::map<CumulantKey, SymExpr>& store() const { return store_; }
  const EngineStats& stats() const { return stats_; }
  const std::optional<std::filesystem::path>& cache_dir() const { return cache_dir_; }

 private:
  SymExpr compute(const CumulantKey& key);
  std::optional<SymExpr> load(const CumulantKey& key);
  void save(const CumulantKey& key, const SymExpr& e);
  SymExpr shifted_difference(const CumulantKey& key, int direction);

  std::optional<std::filesystem::path> cache_dir_;
  std::map<CumulantKey, SymExpr> store_;
  std::map<std::pair<CumulantKey, int>, SymExpr> shifted_;
  std::map<std::tuple<int, StatKind, unsigned, unsigned>, SymExpr> integrals_;
  EngineStats stats_;
  unsigned depth_ = 0;
};

/// Cache file contents for a key: {"schema", "key", "expr", "hash"}.
std::string cache_record(const CumulantKey& key, const SymExpr& e);
/// Parses and hash-verifies a cache record; nullopt when invalid.
std::optional<SymExpr> read_cache_record(std::string_view text, const CumulantKey& key);

}  // namespace entcum
