#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "entcum/engine.hpp"
#include "entcum/errors.hpp"

namespace entcum {

namespace {
constexpr int kCacheSchema = 1;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
  return out;
}

std::string cache_record(const CumulantKey& key, const SymExpr& e) {
  const std::string expr = to_json(e);
  nlohmann::ordered_json j;
  j["schema"] = kCacheSchema;
  j["key"] = key_name(key);
  j["hash"] = content_hash(expr);
  j["expr"] = nlohmann::ordered_json::parse(expr);
  return j.dump() + "\n";
}

std::optional<SymExpr> read_cache_record(std::string_view text, const CumulantKey& key) {
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    if (j.at("schema").get<int>() != kCacheSchema) return std::nullopt;
    if (j.at("key").get<std::string>() != key_name(key)) return std::nullopt;
    const std::string expr = j.at("expr").dump();
    if (content_hash(expr) != j.at("hash").get<std::string>()) return std::nullopt;
    SymExpr e = from_json(expr);
    if (e.context() != VarContext::MAlpha || !e.is_canonical()) return std::nullopt;
    return e;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<SymExpr> Engine::load(const CumulantKey& key) {
  if (!cache_dir_) return std::nullopt;
  const auto path = *cache_dir_ / (key_name(key) + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  auto e = read_cache_record(ss.str(), key);
  if (!e) ++stats_.cache_rejected;
  return e;
}

void Engine::save(const CumulantKey& key, const SymExpr& e) {
  if (!cache_dir_) return;
  const auto path = *cache_dir_ / (key_name(key) + ".json");
  const auto tmp = *cache_dir_ / (key_name(key) + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out << cache_record(key, e);
    if (!out) throw Error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
  ++stats_.cache_writes;
}

}  // namespace entcum
