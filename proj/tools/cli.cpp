#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entcum/convert.hpp"
#include "entcum/engine.hpp"
#include "entcum/errors.hpp"
#include "entcum/numverify.hpp"

namespace entcum::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string of = "S";
  unsigned order = 1;
  std::string joint;
  std::string format = "text";
  std::string cache = ".cumcache";
  bool no_cache = false;
  unsigned digits = 30;
  long m = 0, n = 0;
  std::vector<unsigned> orders;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double threshold = 4.0;
  unsigned workers = 1;
  bool timing = false;
  std::string cache_action = "list";
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<CumulantKey> joint_key(const Options& o) {
  if (o.joint.empty()) return std::nullopt;
  const auto colon = o.joint.find(':');
  if (colon == std::string::npos) throw UsageError("--joint expects KIND:K, e.g. TK:2");
  const std::string kind = o.joint.substr(0, colon);
  CumulantKey key;
  if (kind == "TK" || kind == "T") {
    key.kind = StatKind::TK;
  } else if (kind == "RK" || kind == "R") {
    key.kind = StatKind::RK;
  } else {
    throw UsageError("--joint kind must be TK or RK");
  }
  try {
    std::size_t used = 0;
    const long k = std::stol(o.joint.substr(colon + 1), &used);
    if (used != o.joint.size() - colon - 1 || k < 0 || k > 64) throw UsageError("bad K");
    key.k = static_cast<unsigned>(k);
  } catch (const std::logic_error&) {
    throw UsageError("--joint K must be a non-negative integer");
  }
  key.l = o.order;
  return key;
}

Engine make_engine(const Options& o) {
  if (o.no_cache || o.cache.empty()) return Engine();
  fs::create_directories(o.cache);
  return Engine(fs::path(o.cache));
}

SymExpr build(const Options& o, Engine& engine) {
  if (auto key = joint_key(o)) return engine.joint_cumulant(*key);
  if (o.of == "S") return cumulant_S(engine, o.order);
  return engine.cumulant_T(o.order);
}

Format parse_format(const std::string& f) {
  if (f == "latex") return Format::Latex;
  if (f == "json") return Format::Json;
  return Format::Text;
}

void print_expr(std::ostream& out, const SymExpr& e, const std::string& fmt) {
  std::string s = emit(e, parse_format(fmt));
  if (s.empty() || s.back() != '\n') s += '\n';
  out << s;
}

void check_point(const Options& o) {
  if (o.m < 1 || o.n < o.m) throw UsageError("need 1 <= m <= n");
}

int cmd_cache(const Options& o, std::ostream& out) {
  const fs::path dir(o.cache);
  std::vector<fs::path> entries;
  if (fs::exists(dir)) {
    for (const auto& d : fs::directory_iterator(dir))
      if (d.is_regular_file() && d.path().extension() == ".json") entries.push_back(d.path());
  }
  std::sort(entries.begin(), entries.end());
  if (o.cache_action == "list") {
    for (const auto& p : entries) out << p.stem().string() << "\n";
  } else if (o.cache_action == "clear") {
    for (const auto& p : entries) fs::remove(p);
    out << "removed " << entries.size() << " entries\n";
  } else {  // check
    std::size_t bad = 0;
    for (const auto& p : entries) {
      const auto key = parse_key_name(p.stem().string());
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      if (!key || !read_cache_record(ss.str(), *key)) {
        out << "corrupt " << p.filename().string() << "\n";
        ++bad;
      }
    }
    out << entries.size() - bad << " valid, " << bad << " corrupt\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact cumulants of entanglement entropy under the Hilbert-Schmidt ensemble", "entcum"};
  app.require_subcommand(1);

  auto add_expr_flags = [&](CLI::App* c) {
    c->add_option("--of", o.of, "statistic")->check(CLI::IsMember({"S", "T"}));
    c->add_option("--order", o.order, "cumulant order")->check(CLI::Range(1u, 12u));
    c->add_option("--joint", o.joint, "joint cumulant of T_K or R_K, as KIND:K");
    c->add_option("--cache", o.cache, "cache directory");
    c->add_flag("--no-cache", o.no_cache, "do not read or write the cache");
  };

  auto* cumulant = app.add_subcommand("cumulant", "print a cumulant in closed form");
  add_expr_flags(cumulant);
  cumulant->add_option("--format", o.format)->check(CLI::IsMember({"latex", "json", "text"}));

  auto* mean = app.add_subcommand("mean", "print E[T_k] (--of T) or E[R_k] (--of R)");
  std::string mean_of = "T";
  mean->add_option("--of", mean_of)->check(CLI::IsMember({"T", "R"}));
  mean->add_option("--order", o.order, "k")->check(CLI::Range(0u, 64u));
  mean->add_option("--format", o.format)->check(CLI::IsMember({"latex", "json", "text"}));

  auto* eval = app.add_subcommand("eval", "evaluate a cumulant at integer m, n");
  add_expr_flags(eval);
  eval->add_option("--m", o.m)->required();
  eval->add_option("--n", o.n)->required();
  eval->add_option("--digits", o.digits)->check(CLI::Range(1u, 1000u));

  auto* ver = app.add_subcommand("verify", "compare exact cumulants of S with Monte Carlo estimates");
  ver->add_option("--m", o.m)->required();
  ver->add_option("--n", o.n)->required();
  ver->add_option("--orders,--order", o.orders, "comma separated")->delimiter(',')->check(CLI::Range(1u, 6u));
  ver->add_option("--samples", o.samples)->check(CLI::Range(std::size_t{kMinSamples}, std::size_t{1} << 32));
  ver->add_option("--seed", o.seed);
  ver->add_option("--threshold", o.threshold)->check(CLI::PositiveNumber);
  ver->add_option("--workers", o.workers)->check(CLI::Range(1u, 256u));
  ver->add_option("--digits", o.digits)->check(CLI::Range(1u, 1000u));
  ver->add_option("--cache", o.cache);
  ver->add_flag("--no-cache", o.no_cache);
  ver->add_flag("--timing", o.timing, "include wall time in the report");

  auto* cache = app.add_subcommand("cache", "inspect or clear the cache directory");
  cache->add_option("action", o.cache_action)->check(CLI::IsMember({"list", "clear", "check"}));
  cache->add_option("--cache", o.cache);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    if (*cumulant) {
      joint_key(o);
      Engine engine = make_engine(o);
      print_expr(out, build(o, engine), o.format);
    } else if (*mean) {
      print_expr(out, mean_of == "T" ? mean_T(o.order) : mean_R(o.order), o.format);
    } else if (*eval) {
      check_point(o);
      joint_key(o);
      Engine engine = make_engine(o);
      const BigFloat v = eval_expr(build(o, engine), o.m, o.n, o.digits + 10);
      out << v.to_string(o.digits) << "\n";
    } else if (*ver) {
      check_point(o);
      if (o.n > 64) throw UsageError("n must be at most 64");
      Engine engine = make_engine(o);
      VerifyOptions vo;
      vo.m = static_cast<unsigned>(o.m);
      vo.n = static_cast<unsigned>(o.n);
      if (!o.orders.empty()) vo.orders = o.orders;
      vo.samples = o.samples;
      vo.seed = o.seed;
      vo.threshold = o.threshold;
      vo.workers = o.workers;
      vo.digits = o.digits;
      const auto r = verify(engine, vo);
      out << report_json(r, o.timing);
      err << "verify: " << (r.pass ? "pass" : "FAIL") << " in " << r.wall_seconds << " s\n";
      return r.pass ? kOk : kVerifyFailed;
    } else if (*cache) {
      return cmd_cache(o, out);
    }
  } catch (const UsageError& e) {
    err << "entcum: " << e.what() << "\n";
    return kUsage;
  } catch (const InvariantViolation& e) {
    err << "entcum: internal invariant violated: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    err << "entcum: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "entcum: unexpected failure: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace entcum::cli
