#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "entcum/errors.hpp"

namespace entcum {

/// Blocks of 1-based indices, each sorted, ordered by smallest element.
struct SetPartition {
  std::vector<std::vector<unsigned>> blocks;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

constexpr unsigned kMaxPartitionSize = 12;

/// Calls fn on every set partition of {1..l} in restricted-growth-string
/// order. Throws DomainError unless 1 <= l <= 12.
void for_each_set_partition(unsigned l, const std::function<void(const SetPartition&)>& fn);
std::vector<SetPartition> set_partitions(unsigned l);

/// Checks the structural invariants of a partition of {1..l}.
bool is_valid_partition(const SetPartition& p, unsigned l);

std::uint64_t bell_number(unsigned l);

/// Block-size signature (sorted descending) -> number of set partitions of
/// {1..k} with that shape, restricted to j blocks when j > 0.
std::map<std::vector<unsigned>, std::uint64_t> partition_shapes(unsigned k, unsigned j = 0);

/// Same, but the size of the block holding element 1 is kept apart:
/// (first block size, sorted sizes of the other blocks) -> count.
std::map<std::pair<unsigned, std::vector<unsigned>>, std::uint64_t> rooted_partition_shapes(unsigned k);

namespace detail {

template <class Ring>
Ring shape_sum(const std::map<std::vector<unsigned>, std::uint64_t>& shapes, std::span<const Ring> z) {
  std::optional<Ring> acc;
  for (const auto& [sizes, count] : shapes) {
    std::optional<Ring> prod;
    for (unsigned s : sizes) {
      if (s > z.size()) throw DomainError("Bell polynomial input too short");
      prod = prod ? Ring(*prod * z[s - 1]) : z[s - 1];
    }
    Ring t = *prod * static_cast<long>(count);
    acc = acc ? Ring(*acc + t) : t;
  }
  return acc ? *acc : Ring(z[0] * 0L);
}

}  // namespace detail

/// B_{k,j}(z_1, ..., z_{k-j+1}) summed over partitions of {1..k} into j blocks.
template <class Ring>
Ring bell_incomplete(unsigned k, unsigned j, std::span<const Ring> z) {
  if (z.empty()) throw DomainError("Bell polynomial needs at least one input");
  if (j < 1 || j > k) throw DomainError("bell_incomplete: need 1 <= j <= k");
  return detail::shape_sum(partition_shapes(k, j), z);
}

/// B_k(z_1, ..., z_k) summed over all partitions of {1..k}.
template <class Ring>
Ring bell_complete(std::span<const Ring> z) {
  if (z.empty()) throw DomainError("Bell polynomial needs at least one input");
  const auto k = static_cast<unsigned>(z.size());
  return detail::shape_sum(partition_shapes(k), z);
}

/// Raw moments mu_1..mu_l from cumulants kappa_1..kappa_l.
template <class Ring>
std::vector<Ring> moments_from_cumulants(std::span<const Ring> kappa) {
  std::vector<Ring> mu;
  for (std::size_t l = 1; l <= kappa.size(); ++l) mu.push_back(bell_complete(kappa.first(l)));
  return mu;
}

/// Inverse of moments_from_cumulants.
template <class Ring>
std::vector<Ring> cumulants_from_moments(std::span<const Ring> mu) {
  std::vector<Ring> kappa;
  for (unsigned l = 1; l <= mu.size(); ++l) {
    std::optional<Ring> acc;
    long fact = 1;  // (k-1)!
    for (unsigned k = 1; k <= l; ++k) {
      if (k > 1) fact *= static_cast<long>(k - 1);
      Ring t = bell_incomplete(l, k, mu.first(l)) * ((k % 2 == 1) ? fact : -fact);
      acc = acc ? Ring(*acc + t) : t;
    }
    kappa.push_back(*acc);
  }
  return kappa;
}

template <class Ring>
std::vector<Ring> moments_from_cumulants(const std::vector<Ring>& kappa) {
  return moments_from_cumulants(std::span<const Ring>(kappa));
}
template <class Ring>
std::vector<Ring> cumulants_from_moments(const std::vector<Ring>& mu) {
  return cumulants_from_moments(std::span<const Ring>(mu));
}

}  // namespace entcum
