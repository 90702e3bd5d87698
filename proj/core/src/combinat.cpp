#include "entcum/combinat.hpp"

#include <algorithm>
#include <mutex>
#include <string>

namespace entcum {

void for_each_set_partition(unsigned l, const std::function<void(const SetPartition&)>& fn) {
  if (l < 1 || l > kMaxPartitionSize)
    throw DomainError("set partitions supported for 1 <= l <= " + std::to_string(kMaxPartitionSize));
  // restricted growth string a[0..l-1], a[0] = 0, a[i] <= 1 + max(a[0..i-1])
  std::vector<unsigned> a(l, 0), mx(l, 0);
  SetPartition p;
  for (;;) {
    const unsigned nblocks = mx[l - 1] + 1;
    p.blocks.assign(nblocks, {});
    for (unsigned i = 0; i < l; ++i) p.blocks[a[i]].push_back(i + 1);
    fn(p);
    int i = static_cast<int>(l) - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i == 0) return;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (unsigned j = i + 1; j < l; ++j) {
      a[j] = 0;
      mx[j] = mx[i];
    }
  }
}

std::vector<SetPartition> set_partitions(unsigned l) {
  std::vector<SetPartition> out;
  for_each_set_partition(l, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

bool is_valid_partition(const SetPartition& p, unsigned l) {
  std::vector<bool> seen(l + 1, false);
  unsigned prev_min = 0;
  for (const auto& b : p.blocks) {
    if (b.empty() || !std::is_sorted(b.begin(), b.end())) return false;
    if (b.front() <= prev_min) return false;
    prev_min = b.front();
    for (unsigned x : b) {
      if (x < 1 || x > l || seen[x]) return false;
      seen[x] = true;
    }
  }
  return std::all_of(seen.begin() + 1, seen.end(), [](bool s) { return s; });
}

std::uint64_t bell_number(unsigned l) {
  // Bell triangle
  std::vector<std::uint64_t> row{1};
  for (unsigned i = 1; i <= l; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

namespace {

std::mutex shape_mutex;
std::map<std::pair<unsigned, unsigned>, std::map<std::vector<unsigned>, std::uint64_t>> shape_cache;
std::map<unsigned, std::map<std::pair<unsigned, std::vector<unsigned>>, std::uint64_t>> rooted_cache;

}  // namespace

std::map<std::vector<unsigned>, std::uint64_t> partition_shapes(unsigned k, unsigned j) {
  std::lock_guard lock(shape_mutex);
  auto key = std::make_pair(k, j);
  if (auto it = shape_cache.find(key); it != shape_cache.end()) return it->second;
  std::map<std::vector<unsigned>, std::uint64_t> out;
  for_each_set_partition(k, [&](const SetPartition& p) {
    if (j != 0 && p.blocks.size() != j) return;
    std::vector<unsigned> sizes;
    for (const auto& b : p.blocks) sizes.push_back(static_cast<unsigned>(b.size()));
    std::sort(sizes.rbegin(), sizes.rend());
    ++out[sizes];
  });
  shape_cache.emplace(key, out);
  return out;
}

std::map<std::pair<unsigned, std::vector<unsigned>>, std::uint64_t> rooted_partition_shapes(unsigned k) {
  std::lock_guard lock(shape_mutex);
  if (auto it = rooted_cache.find(k); it != rooted_cache.end()) return it->second;
  std::map<std::pair<unsigned, std::vector<unsigned>>, std::uint64_t> out;
  for_each_set_partition(k, [&](const SetPartition& p) {
    std::vector<unsigned> rest;
    for (std::size_t i = 1; i < p.blocks.size(); ++i) rest.push_back(static_cast<unsigned>(p.blocks[i].size()));
    std::sort(rest.rbegin(), rest.rend());
    ++out[{static_cast<unsigned>(p.blocks[0].size()), rest}];
  });
  rooted_cache.emplace(k, out);
  return out;
}

}  // namespace entcum
