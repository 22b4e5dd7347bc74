#include "mfbv/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mfbv/barrier.hpp"
#include "mfbv/chars.hpp"
#include "mfbv/csv.hpp"
#include "mfbv/disc.hpp"
#include "mfbv/errors.hpp"
#include "mfbv/lab.hpp"
#include "mfbv/ramare.hpp"
#include "mfbv/smooth.hpp"

namespace mfbv::lab {

namespace {

using arith::i64;

inline constexpr double kIdentityTolerance = 1e-9;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

u64 parse_count(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw DomainError(what + ": expected a non-negative integer, got '" + s + "'");
}

std::vector<u64> ascending_unique(std::vector<u64> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// "x^e" or a plain number.
double q_scale(const Config& c, double x) {
  const std::string spec = c.str("Q");
  if (spec.rfind("x^", 0) == 0) {
    try {
      std::size_t used = 0;
      const double e = std::stod(spec.substr(2), &used);
      if (used == spec.size() - 2 && e > 0 && e < 1) return std::pow(x, e);
    } catch (const std::exception&) {
    }
    throw c.error("Q", "'Q' must be a number or x^e with 0 < e < 1, got '" + spec + "'");
  }
  const double q = c.real("Q");
  if (!(q >= 1)) throw c.error("Q", "'Q' must be >= 1");
  return q;
}

u64 seed_of(const Config& c, const RunOptions& opt) { return opt.seed.value_or(c.u64("seed", 0)); }

MultFn fn_of(const Config& c, const RunOptions& opt) {
  try {
    return parse_fn(c.str("f"), seed_of(c, opt));
  } catch (const DomainError& e) {
    throw c.error("f", e.what());
  }
}

std::vector<u64> x_list(const Config& c) {
  auto xs = ascending_unique(c.u64s("x"));
  if (std::any_of(xs.begin(), xs.end(), [](u64 x) { return x < 2; })) throw c.error("x", "'x' values must be >= 2");
  return xs;
}

disc::ModulusFilter filter_of(const Config& c) {
  const auto parts = split(c.str("filter", "all"), ':');
  using K = disc::ModulusFilter::Kind;
  if (parts.size() == 1 && parts[0] == "all") return {K::all, 0};
  if (parts.size() == 1 && parts[0] == "primes") return {K::primes, 0};
  if (parts.size() == 2 && (parts[0] == "smooth" || parts[0] == "multiples")) {
    try {
      return {parts[0] == "smooth" ? K::smooth : K::multiples, parse_count(parts[1], "filter")};
    } catch (const DomainError& e) {
      throw c.error("filter", e.what());
    }
  }
  throw c.error("filter", "'filter' must be all, primes, smooth:W or multiples:D");
}

double z_of(const Config& c, u64 x) {
  const double e = c.real("z_exponent", 0.5);
  if (!(e > 0 && e <= 1)) throw c.error("z_exponent", "'z_exponent' must lie in (0, 1]");
  return std::pow(double(x), e);
}

u64 cutoff_of(const Config& c, u64 x) {
  const u64 r = c.u64("conductor_cutoff", disc::default_conductor_cutoff(x));
  if (r == 0) throw c.error("conductor_cutoff", "'conductor_cutoff' must be >= 1");
  return r;
}

bool same_character(const DirichletCharacter& a, const DirichletCharacter& b) {
  return a.modulus() == b.modulus() && a.index() == b.index();
}

void bv_scan(const Config& c, const RunOptions& opt, std::ostream& out) {
  c.require_known({"schema", "seed", "f", "x", "Q", "variant", "k", "xi_b", "xi_trivial", "conductor_cutoff",
                   "z_exponent", "filter", "residue", "split_w"});
  const auto f = fn_of(c, opt);
  const auto xs = x_list(c);
  c.str("Q");
  const std::string variant = c.str("variant", "plain");
  if (variant != "plain" && variant != "top_k" && variant != "xi")
    throw c.error("variant", "'variant' must be plain, top_k or xi");
  bool first = true;
  for (u64 x : xs) {
    const auto table = disc::make_table(f, x);
    const double big_q = q_scale(c, double(x));
    disc::BvOptions bv;
    bv.x = x;
    bv.q_lo = static_cast<u64>(std::floor(big_q));
    bv.q_hi = static_cast<u64>(std::floor(2.0 * big_q));
    bv.filter = filter_of(c);
    bv.split_w = c.u64("split_w", 0);
    bv.threads = opt.threads;
    if (c.has("residue")) bv.fixed_residue = c.i64("residue");
    if (variant != "plain") {
      const auto ranked = disc::ordered_exceptionals(table, x, cutoff_of(c, x), z_of(c, x));
      if (variant == "top_k") {
        bv.variant = disc::Variant::top_k(ranked, c.u64("k"));
      } else {
        std::vector<DirichletCharacter> set;
        for (const auto& e : ranked.xi_threshold(c.real("xi_b", 1.0))) set.push_back(e.psi);
        const auto trivial = character_group(1)[0];
        const bool has_trivial =
            std::any_of(set.begin(), set.end(), [&](const auto& chi) { return same_character(chi, trivial); });
        if (c.flag("xi_trivial", true) && !has_trivial) set.insert(set.begin(), trivial);
        bv.variant = disc::Variant::xi(set);
      }
    }
    disc::write_csv_rows(disc::bv_average(table, bv), out, first);
    first = false;
  }
}

void xi_find(const Config& c, const RunOptions& opt, std::ostream& out) {
  c.require_known({"schema", "seed", "f", "x", "conductor_cutoff", "z_exponent", "xi_b"});
  const auto f = fn_of(c, opt);
  const double b = c.real("xi_b", 1.0);
  csv::Writer w(out);
  w.row({"x", "rank", "conductor", "index", "score", "in_xi"});
  for (u64 x : x_list(c)) {
    const auto table = disc::make_table(f, x);
    const auto ranked = disc::ordered_exceptionals(table, x, cutoff_of(c, x), z_of(c, x));
    const double threshold = std::pow(std::log(double(x)), -b);
    for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
      const auto& e = ranked.entries[i];
      w.row({csv::num(x), csv::num(u64(i + 1)), csv::num(e.conductor), csv::num(e.psi.index()), csv::num(e.score),
             e.score >= threshold ? "1" : "0"});
    }
  }
}

smooth::SmoothFilter smooth_filter_of(const Config& c) {
  const auto parts = split(c.str("filter", "none"), ':');
  try {
    if (parts.size() == 1 && parts[0] == "none") return smooth::SmoothFilter::none();
    if (parts.size() == 2 && parts[0] == "coprime") return smooth::SmoothFilter::coprime_to(parse_count(parts[1], "filter"));
    if (parts.size() == 3 && parts[0] == "progression") {
      const u64 q = parse_count(parts[1], "filter");
      if (q == 0) throw DomainError("filter: modulus must be positive");
      return smooth::SmoothFilter::progression(q, parse_count(parts[2], "filter"));
    }
  } catch (const DomainError& e) {
    throw c.error("filter", e.what());
  }
  throw c.error("filter", "'filter' must be none, coprime:Q or progression:Q:A");
}

void smooth_psi(const Config& c, const RunOptions&, std::ostream& out) {
  c.require_known({"schema", "seed", "x", "y", "filter"});
  const auto xs = c.reals("x"), ys = c.reals("y");
  const auto filter = smooth_filter_of(c);
  csv::Writer w(out);
  w.row({"x", "y", "u", "psi", "rho_u", "psi_over_x_rho"});
  for (double x : xs) {
    for (double y : ys) {
      const auto count = smooth::psi_exact(x, y, filter);
      std::string rho, ratio;
      if (count.u <= smooth::default_dickman().u_max()) {
        const double r = smooth::dickman_rho(count.u);
        rho = csv::num(r);
        ratio = csv::num(double(count.value) / (x * r));
      }
      w.row({csv::num(x), csv::num(y), csv::num(count.u), csv::num(count.value), rho, ratio});
    }
  }
}

void rho(const Config& c, const RunOptions&, std::ostream& out) {
  c.require_known({"schema", "seed", "u", "steps", "u_max"});
  const u64 steps = c.u64("steps", 2048);
  if (steps < 4 || steps > (1u << 20)) throw c.error("steps", "'steps' must lie in [4, 2^20]");
  const smooth::DickmanRho table(c.real("u_max", 20.0), int(steps));
  csv::Writer w(out);
  w.row({"u", "rho"});
  for (double u : c.reals("u")) w.row({csv::num(u), csv::num(table(u))});
}

void alpha(const Config& c, const RunOptions&, std::ostream& out) {
  c.require_known({"schema", "seed", "x", "y", "d", "tail_w", "tail_y"});
  smooth::CompareOptions o;
  o.x = c.real("x");
  o.y = c.real("y");
  o.d_list = c.reals("d", o.d_list);
  o.tail_w = c.u64("tail_w", o.tail_w);
  o.tail_y = c.u64("tail_y", o.tail_y);
  csv::Writer w(out);
  w.row({"quantity", "params", "value"});
  for (const auto& r : smooth::smooth_compare(o)) w.row({r.quantity, r.params, csv::num(r.value)});
}

void ramare_run(const Config& c, const RunOptions& opt, std::ostream& out) {
  c.require_known({"schema", "seed", "f", "x", "Q", "Y", "Z", "w", "residue", "restrict_main"});
  const auto f = fn_of(c, opt);
  const u64 x = c.u64("x");
  const double big_q = q_scale(c, double(x));
  ramare::RamareParams params;
  params.y = c.real("Y", params.y);
  params.z = c.real("Z", params.z);
  params.w = c.u64("w", params.w);
  params.restrict_main = c.flag("restrict_main", params.restrict_main);
  std::vector<u64> moduli;
  for (u64 q = static_cast<u64>(std::floor(big_q)) + 1; double(q) <= 2.0 * big_q; ++q) moduli.push_back(q);
  std::optional<i64> residue;
  if (c.has("residue")) residue = c.i64("residue");

  const auto table = f.table(x);
  const ramare::FFunction big_f(ramare::optimal_spec(table, x, moduli, params.w, residue));
  const auto big_table = big_f.table(x);
  const auto d = ramare::decompose(table, big_table, x, params, opt.threads);
  ramare::write_csv_rows(d, ramare::sieve_diagnostic(big_table, x, params),
                         ramare::bilinear_diagnostic(d, big_f.q_scale()), out);
}

void barrier_run(const Config& c, const RunOptions&, std::ostream& out) {
  c.require_known({"schema", "seed", "q", "q2", "p", "p2", "a", "M", "eta", "H", "H_main", "sigma", "x", "Q"});
  barrier::GCompareParams params;
  params.x = c.real("x", params.x);
  params.big_q = c.real("Q", params.big_q);
  params.sigma = c.real("sigma", params.sigma);
  params.h_poisson = c.u64("H", params.h_poisson);
  params.h_main = c.u64("H_main", params.h_main);
  const u64 q = c.u64("q"), q2 = c.u64("q2"), p = c.u64("p"), p2 = c.u64("p2");
  const double m = c.real("M", params.x / double(std::max(p, p2)));
  const auto bump = barrier::build_bump(c.real("eta", 0.05));
  std::vector<i64> residues;
  for (double a : c.reals("a")) {
    if (a != std::floor(a)) throw c.error("a", "'a' must list integers");
    residues.push_back(i64(a));
  }
  barrier::write_csv_header(out);
  for (i64 a : residues) {
    const auto quad = barrier::make_quad(q, q2, p, p2, a, m);
    barrier::write_csv_row(quad, barrier::g_compare(quad, bump, params), out);
  }
}

void construct(const Config& c, const RunOptions& opt, std::ostream& out) {
  c.require_known({"schema", "seed", "kind", "x", "Q", "q", "f"});
  ObstructionSpec spec;
  try {
    spec.kind = obstruction_kind(c.str("kind"));
  } catch (const DomainError& e) {
    throw c.error("kind", e.what());
  }
  spec.x = c.u64("x");
  if (spec.kind == ObstructionKind::gauss) {
    spec.q = c.u64("q");
  } else {
    spec.big_q = q_scale(c, double(spec.x));
  }
  if (c.has("f")) {
    if (spec.kind != ObstructionKind::large_prime_pair) throw c.error("f", "'f' only applies to large-prime-pair");
    spec.base = fn_of(c, opt);
  }
  const auto ob = construct_obstruction(spec);
  if (ob.max_error > kIdentityTolerance) {
    throw NumericError(to_string(spec.kind) + ": identity violated, max error " + csv::num(ob.max_error));
  }
  write_csv_rows(ob, out);
}

void uk(const Config& c, const RunOptions& opt, std::ostream& out) {
  c.require_known({"schema", "seed", "f", "q", "a", "Y", "k"});
  const auto f = fn_of(c, opt);
  const u64 q = c.u64("q"), y = c.u64("Y"), k = c.u64("k");
  if (k != 2 && k != 3) throw c.error("k", "'k' must be 2 or 3");
  csv::Writer w(out);
  w.row({"q", "a", "Y", "k", "N", "norm"});
  for (u64 a : c.u64s("a")) {
    w.row({csv::num(q), csv::num(a), csv::num(y), csv::num(k), csv::num(uk_group_order(y, int(k))),
           csv::num(uk_norm(f, q, a, y, int(k)))});
  }
}

using Handler = std::function<void(const Config&, const RunOptions&, std::ostream&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"bv-scan", bv_scan}, {"xi-find", xi_find}, {"smooth-psi", smooth_psi}, {"rho", rho},      {"alpha", alpha},
      {"ramare", ramare_run}, {"barrier", barrier_run}, {"construct", construct}, {"uk", uk},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"bv-scan", "xi-find",  "smooth-psi", "rho", "alpha",
                                                 "ramare",  "barrier", "construct",  "uk"};
  return names;
}

MultFn parse_fn(const std::string& spec, u64 seed) {
  const auto parts = split(spec, ':');
  const std::string& head = parts.empty() ? spec : parts[0];
  if (parts.size() == 1) {
    if (head == "unit") return builtin::unit();
    if (head == "mobius") return builtin::mobius();
    if (head == "liouville") return builtin::liouville();
    if (head == "random") return builtin::random_sign(seed);
    if (head == "quad3") return builtin::quadratic3_extension();
  }
  if (head == "gauss" && parts.size() == 2) return builtin::gauss(parse_count(parts[1], "gauss"));
  if (head == "char" && parts.size() == 3) {
    const u64 q = parse_count(parts[1], "char"), i = parse_count(parts[2], "char");
    if (q == 0) throw DomainError("char: modulus must be positive");
    const auto group = character_group(q);
    if (i >= group.size()) throw DomainError("char: index out of range for modulus " + parts[1]);
    return builtin::character(group[i]);
  }
  if (head == "smooth" && parts.size() >= 3) {
    const auto inner = spec.substr(spec.find(':', spec.find(':') + 1) + 1);
    return MultFn::smooth_restricted(parse_fn(inner, seed), parse_count(parts[1], "smooth"));
  }
  throw DomainError("unknown function '" + spec + "'");
}

void run_experiment(const Config& config, const RunOptions& opt, std::ostream& out) {
  const auto it = handlers().find(opt.subcommand);
  if (it == handlers().end()) throw ConfigError("command line", 0, "unknown subcommand '" + opt.subcommand + "'");
  if (config.u64("schema", kSchemaVersion) != u64(kSchemaVersion))
    throw config.error("schema", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");

  char hash[32];
  std::snprintf(hash, sizeof hash, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(opt.subcommand + "\n" + config.canonical())));
  csv::Writer w(out);
  w.meta("tool", std::string("mfbv ") + kToolVersion);
  w.meta("schema", std::to_string(kSchemaVersion));
  w.meta("subcommand", opt.subcommand);
  w.meta("config_hash", hash);
  w.meta("seed", std::to_string(seed_of(config, opt)));
  it->second(config, opt, out);
}

int execute(const std::string& config_path, const RunOptions& opt, const std::optional<std::string>& out_path,
            std::ostream& out, std::ostream& err) {
  try {
    const auto config = Config::load(config_path);
    std::ostringstream buffer;
    run_experiment(config, opt, buffer);
    if (out_path && !out_path->empty()) {
      std::ofstream file(*out_path, std::ios::binary);
      if (!file) {
        err << "error: cannot write " << *out_path << "\n";
        return kExitFailure;
      }
      file << buffer.str();
    } else {
      out << buffer.str();
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    err << "resource bound exceeded: " << e.what() << "\n";
    return kExitResource;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace mfbv::lab
