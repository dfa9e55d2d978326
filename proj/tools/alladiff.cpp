// alladiff: command-line front end.
//
// Exit codes: 0 success, 1 validation error, 2 internal inconsistency.

#include <alladiff/alladiff.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace alladiff;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json rational_json(const Rational& r) { return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}}; }

/// A result table rendered either as CSV (with a comment header) or as JSON.
struct Output {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json rows_json = json::array();
  std::vector<std::string> notes;
  json extra = json::object();

  void add(std::vector<std::string> row, json obj) {
    rows.push_back(std::move(row));
    rows_json.push_back(std::move(obj));
  }
};

struct Context {
  RunConfig cfg;
  std::string invocation;
  std::optional<IrreducibleCache> cache;

  IrreducibleCache* tables() { return cache ? &*cache : nullptr; }

  std::filesystem::path require_cache_dir() const {
    detail::require(cfg.cache_dir.has_value(), "no cache directory: pass --cache-dir or set ALLADIFF_CACHE");
    return *cfg.cache_dir;
  }

  void check_n(int n) const {
    detail::require(n >= 1, "--n must be >= 1");
    detail::require(n <= cfg.n_max_ceiling, "--n exceeds the configured ceiling " + std::to_string(cfg.n_max_ceiling));
  }
};

void emit(const Context& ctx, const std::string& command, const Output& out) {
  if (ctx.cfg.out == OutputFormat::csv) {
    std::cout << "# alladiff " << ALLADIFF_VERSION << ": " << ctx.invocation << "\n";
    for (const auto& n : out.notes) std::cout << "# " << n << "\n";
    for (std::size_t i = 0; i < out.columns.size(); ++i) std::cout << (i ? "," : "") << out.columns[i];
    std::cout << "\n";
    for (const auto& row : out.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
      std::cout << "\n";
    }
  } else {
    json doc = {{"tool", "alladiff"}, {"version", ALLADIFF_VERSION}, {"command", command},
                {"invocation", ctx.invocation}, {"rows", out.rows_json}};
    for (const auto& [k, v] : out.extra.items()) doc[k] = v;
    std::cout << doc.dump(2) << "\n";
  }
}

Output report_output(const PartialSumReport& r) {
  Output out;
  out.columns = {"level", "numerator", "denominator", "approx", "residual", "increment"};
  out.notes.push_back("q=" + std::to_string(r.q) + " S=" + r.s_description +
                      (r.target ? " target=" + r.target->get_str() + " (" + fmt_double(r.target->get_d()) + ")"
                                : std::string(" target=none")));
  for (const auto& L : r.levels) {
    const std::string res = L.residual ? fmt_double(L.residual->get_d()) : "";
    json obj = {{"level", L.level}, {"value", rational_json(L.value)}, {"approx", L.approx},
                {"increment", rational_json(L.increment)}};
    obj["residual"] = L.residual ? rational_json(*L.residual) : json(nullptr);
    out.add({std::to_string(L.level), L.value.get_num().get_str(), L.value.get_den().get_str(), fmt_double(L.approx), res,
             fmt_double(L.increment.get_d())},
            std::move(obj));
  }
  out.extra["q"] = r.q;
  out.extra["s"] = r.s_description;
  out.extra["target"] = r.target ? rational_json(*r.target) : json(nullptr);
  return out;
}

void check_same_values(const PartialSumReport& a, const PartialSumReport& b) {
  detail::ensure_consistent(a.levels.size() == b.levels.size(), "report lengths differ");
  for (std::size_t i = 0; i < a.levels.size(); ++i)
    detail::ensure_consistent(a.levels[i].value == b.levels[i].value,
                              "naive and DP values differ at level " + std::to_string(i + 1));
}

// --- subcommands --------------------------------------------------------------------

struct RationalArgs {
  std::string q = "2";
  std::string mod, res = "1";
  int n = 8;
  bool naive = false, with_infinity = false;
};

void run_alladi_rational(Context& ctx, const RationalArgs& a) {
  ctx.check_n(a.n);
  const FieldSpec F = parse_field(a.q);
  PartialSumReport report;
  if (a.mod.empty()) {
    detail::require(!a.naive || !a.with_infinity, "--naive enumerates polynomials and cannot include infinity");
    PlaceTable t = build_rational_table(F, a.n, a.with_infinity, ctx.tables());
    report = convergence_report(t, a.n, Rational(1));
    if (a.naive) {
      const auto sums = naive_degree_sums(F, {PrimeSet::all()}, a.n, ctx.cfg.workers, nullptr, ctx.tables());
      auto naive = report_from_values(F.cardinality(), t.s_description, naive_partial_sums(F.cardinality(), sums, a.n),
                                      Rational(1));
      check_same_values(naive, report);
      report = naive;
    }
  } else {
    const ProgressionSet set(parse_poly(F, a.res), parse_poly(F, a.mod));
    if (a.naive) {
      detail::require(!a.with_infinity, "--naive enumerates polynomials and cannot include infinity");
      detail::require(ipow(F.cardinality(), static_cast<unsigned long>(a.n)) <= big(ctx.cfg.naive_bound),
                      "q^n exceeds the naive enumeration bound");
      report = alladi_progression(set, a.n, SumMode::naive, ctx.cfg.workers, ctx.tables());
      check_same_values(report, alladi_progression(set, a.n, SumMode::dp, 1, ctx.tables()));
    } else if (a.with_infinity) {
      // infinity stays a place of the field but never lies in S
      const Rational target = make_rational(BigInt(1), euler_phi(set.modulus(), ctx.tables()));
      PlaceTable t = rational_table_for(F, a.n, PrimeSet::progression(set), true, ctx.tables());
      report = convergence_report(t, a.n, target);
    } else {
      report = alladi_progression(set, a.n, SumMode::dp, 1, ctx.tables());
    }
  }
  emit(ctx, "alladi-rational", report_output(report));
}

struct CurveArgs {
  std::uint64_t p = 5;
  std::int64_t a = 1, b = 1;
  int n = 8;
  std::string mode = "all";
};

CurveSMode parse_mode(const std::string& m) {
  if (m == "all") return CurveSMode::all;
  if (m == "rational") return CurveSMode::rational_points;
  throw ValidationError("--mode must be all or rational");
}

PlaceTable curve_table(Context& ctx, const CurveArgs& a, CurveSMode mode) {
  const Curve E = Curve::over_prime(a.p, a.a, a.b);
  if (!ctx.cfg.cache_dir) return curve_place_table(E, a.n, mode);
  PlaceTable t = cached_curve_table(*ctx.cfg.cache_dir, a.p, a.a, a.b, a.n);
  if (mode == CurveSMode::rational_points) {
    std::vector<BigInt> s(t.counts.size(), 0);
    s[1] = t.counts[1];
    t.s_counts = std::move(s);
    t.s_description = "rational points";
  }
  detail::ensure_consistent(t.counts == curve_place_table(E, a.n, mode).counts, "cached curve table disagrees");
  return t;
}

void run_alladi_curve(Context& ctx, const CurveArgs& a) {
  ctx.check_n(a.n);
  const CurveSMode mode = parse_mode(a.mode);
  PlaceTable t = curve_table(ctx, a, mode);
  std::optional<Rational> target;
  if (mode == CurveSMode::all) target = Rational(1);
  Output out = report_output(convergence_report(t, a.n, target));
  out.notes.push_back("curve y^2 = x^3 + " + std::to_string(a.a) + "x + " + std::to_string(a.b) + " over F_" +
                      std::to_string(a.p) + " h=" + t.class_number->get_str() + " g=1");
  emit(ctx, "alladi-curve", out);
}

void run_ap_recover(Context& ctx, const CurveArgs& a) {
  ctx.check_n(a.n);
  const Curve E = Curve::over_prime(a.p, a.a, a.b);
  const ApRecovery r = recover_ap(E, a.n, parse_mode(a.mode));
  Output out;
  out.columns = {"level", "numerator", "denominator", "approx", "increment", "estimate_numerator",
                 "estimate_denominator", "estimate_residual", "estimate"};
  out.notes.push_back("curve y^2 = x^3 + " + std::to_string(a.a) + "x + " + std::to_string(a.b) + " over F_" +
                      std::to_string(a.p) + " mode=" + a.mode + " a_p=" + r.target.get_str());
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    const auto& L = r.sums.levels[i];
    const auto& e = r.estimates[i];
    out.add({std::to_string(L.level), L.value.get_num().get_str(), L.value.get_den().get_str(), fmt_double(L.approx),
             fmt_double(L.increment.get_d()), e.value.get_num().get_str(), e.value.get_den().get_str(),
             fmt_double(e.residual.get_d()), fmt_double(e.approx)},
            {{"level", L.level}, {"value", rational_json(L.value)}, {"increment", rational_json(L.increment)},
             {"estimate", rational_json(e.value)}, {"estimate_approx", e.approx},
             {"estimate_residual", rational_json(e.residual)}});
  }
  out.extra["a_p"] = r.target.get_str();
  out.extra["mode"] = a.mode;
  emit(ctx, "ap-recover", out);
}

struct SatoTateArgs {
  std::int64_t a = 1, b = 1;
  std::uint64_t x = 1000;
  int bins = 20;
};

void run_sato_tate(Context& ctx, const SatoTateArgs& a) {
  const SatoTateReport r = sato_tate_scan(a.a, a.b, a.x, a.bins, ctx.cfg.workers);
  detail::ensure_consistent(r.hasse_ok, "a trace violates the Hasse bound");
  Output out;
  out.columns = {"bin_left", "bin_right", "count", "empirical_mass", "semicircle_mass"};
  out.notes.push_back("primes=" + std::to_string(r.samples.size()) + " sup_distance=" + fmt_double(r.sup_distance));
  for (const auto& bin : r.histogram)
    out.add({fmt_double(bin.left), fmt_double(bin.right), std::to_string(bin.count), fmt_double(bin.empirical_mass),
             fmt_double(bin.semicircle_mass)},
            {{"bin_left", bin.left}, {"bin_right", bin.right}, {"count", bin.count},
             {"empirical_mass", bin.empirical_mass}, {"semicircle_mass", bin.semicircle_mass}});
  out.extra["primes"] = r.samples.size();
  out.extra["sup_distance"] = r.sup_distance;
  emit(ctx, "sato-tate", out);
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto colon = item.find(':');
    detail::require(colon != std::string::npos, "pairs look like n:m,n:m");
    try {
      out.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ValidationError("bad pair '" + item + "'");
    }
    detail::require(out.back().first >= 1 && out.back().second >= 1, "pairs need n, m >= 1");
  }
  detail::require(!out.empty(), "no pairs given");
  return out;
}

void run_psi(Context& ctx, const std::string& q, const std::string& pairs_text) {
  const FieldSpec F = parse_field(q);
  const auto pairs = parse_pairs(pairs_text);
  int n_max = 1;
  for (const auto& [n, m] : pairs) n_max = std::max(n_max, n);
  ctx.check_n(n_max);
  PlaceTable t = build_rational_table(F, n_max, true, ctx.tables());
  const auto entries = psi_ratio_report(t, pairs);
  Output out;
  out.columns = {"n", "m", "psi", "ratio", "rho", "deviation", "regime"};
  for (const auto& e : entries)
    out.add({std::to_string(e.n), std::to_string(e.m), e.psi.get_str(), fmt_double(e.ratio.get_d()), fmt_double(e.rho),
             fmt_double(e.deviation), e.regime},
            {{"n", e.n}, {"m", e.m}, {"psi", e.psi.get_str()}, {"ratio", rational_json(e.ratio)}, {"rho", e.rho},
             {"deviation", e.deviation}, {"regime", e.regime}});
  for (const auto& [u, ok] : deviation_trends(entries)) {
    out.notes.push_back("u=" + u + " deviation decreasing in m: " + (ok ? "yes" : "no"));
    out.extra["trends"][u] = ok;
  }
  emit(ctx, "psi", out);
}

void run_duality_fuzz(Context& ctx, const std::string& q, int deg, int trials, std::uint64_t seed) {
  ctx.check_n(std::max(deg, 1));
  detail::require(deg >= 0, "--deg must be >= 0");
  detail::require(trials >= 1, "--trials must be >= 1");
  const FieldSpec F = parse_field(q);
  const PlaceTable t = build_rational_table(F, std::max(deg, 1), true, ctx.tables());
  detail::require(t.labeled_through(deg), "field too large to enumerate divisors of this degree");
  std::vector<Divisor> pool;
  for (int d = 0; d <= deg; ++d)
    for_each_effective_divisor(t, d, [&](const Divisor& D) { pool.push_back(D); });
  std::vector<Place> places;
  for (int k = 1; k <= std::max(deg, 1); ++k)
    for (std::uint64_t i = 0; i < to_u64(t.counts[static_cast<std::size_t>(k)]); ++i) places.push_back({k, i});

  std::mt19937_64 rng(seed);
  int passed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const Divisor& A = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    auto S = std::make_shared<std::set<Place>>();
    for (const auto& P : places)
      if (rng() & 1) S->insert(P);
    std::vector<std::int64_t> f(static_cast<std::size_t>(deg) + 1, 0);
    for (int k = 1; k <= deg; ++k) f[static_cast<std::size_t>(k)] = std::uniform_int_distribution<std::int64_t>(-9, 9)(rng);
    if (duality_check(A, [S](const Place& P) { return S->count(P) > 0; },
                      [&f](int k) { return f[static_cast<std::size_t>(k)]; }))
      ++passed;
  }
  std::cout << passed << "/" << trials << " passed\n";
  detail::ensure_consistent(passed == trials, "duality identity failed on a sampled divisor");
}

void run_identity_check(Context& ctx, const RationalArgs& a) {
  ctx.check_n(a.n);
  const FieldSpec F = parse_field(a.q);
  detail::require(ipow(F.cardinality(), static_cast<unsigned long>(a.n)) <= big(ctx.cfg.naive_bound),
                  "q^n exceeds the naive enumeration bound");
  const PrimeSet S = a.mod.empty() ? PrimeSet::all()
                                   : PrimeSet::progression(ProgressionSet(parse_poly(F, a.res), parse_poly(F, a.mod)));
  const auto sides = exact_level_identity(F, S, a.n, ctx.cfg.workers, ctx.tables());
  Output out;
  out.columns = {"level", "lhs_dp", "lhs_enum", "rhs_dp", "rhs_enum", "holds"};
  out.notes.push_back("q=" + F.to_string() + " S=" + S.description());
  bool all = true;
  for (const auto& s : sides) {
    all = all && s.holds();
    out.add({std::to_string(s.n), s.lhs_dp.get_str(), s.lhs_enum.get_str(), s.rhs_dp.get_str(), s.rhs_enum.get_str(),
             s.holds() ? "yes" : "no"},
            {{"level", s.n}, {"lhs_dp", rational_json(s.lhs_dp)}, {"lhs_enum", rational_json(s.lhs_enum)},
             {"rhs_dp", rational_json(s.rhs_dp)}, {"rhs_enum", rational_json(s.rhs_enum)}, {"holds", s.holds()}});
  }
  emit(ctx, "identity-check", out);
  detail::ensure_consistent(all, "exact level identity failed");
}

struct CacheArgs {
  std::string q;
  int n = 0;
  std::uint64_t p = 0;
  std::int64_t a = 0, b = 0;
};

void run_cache_warm(Context& ctx, const CacheArgs& a) {
  const auto dir = ctx.require_cache_dir();
  ctx.check_n(a.n);
  if (a.p != 0) {
    detail::require(a.q.empty(), "give either --q or --p, not both");
    cached_curve_table(dir, a.p, a.a, a.b, a.n);
    std::cout << curve_table_file(dir, a.p, a.a, a.b, a.n).string() << "\n";
    return;
  }
  detail::require(!a.q.empty(), "warm needs --q (irreducible table) or --p/--a/--b (curve table)");
  const FieldSpec F = parse_field(a.q);
  ctx.cache->get(F, a.n);
  std::cout << ctx.cache->file_for(F, a.n).string() << "\n";
}

void run_cache_inspect(Context& ctx) {
  for (const auto& e : inspect_cache(ctx.require_cache_dir()))
    std::cout << e.file << "\t" << (e.valid ? "ok" : "corrupt") << "\t" << e.key << "\n";
}

void run_cache_clear(Context& ctx) {
  std::cout << "removed " << clear_cache(ctx.require_cache_dir()) << " file(s)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alladi-type Moebius sums over global function fields"};
  app.set_version_flag("--version", std::string(ALLADIFF_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, cache_dir, out_format;
  unsigned workers = 0;
  app.add_option("--config", config_path, "config file (default ./alladiff.toml when present)");
  app.add_option("--cache-dir", cache_dir, "table cache directory");
  app.add_option("--out", out_format, "csv or json");
  app.add_option("--workers", workers, "worker threads for naive enumeration and prime scans");

  RationalArgs ra;
  auto* ar = app.add_subcommand("alladi-rational", "T_n over F_q(x), optionally for an arithmetic progression");
  ar->add_option("--q", ra.q, "field, q or p^e")->required();
  ar->add_option("--mod", ra.mod, "modulus g (monic)");
  ar->add_option("--res", ra.res, "residue f");
  ar->add_option("--n", ra.n, "truncation level")->required();
  ar->add_flag("--naive", ra.naive, "enumerate and factor monic polynomials");
  ar->add_flag("--with-infinity", ra.with_infinity, "tabulate the place at infinity");

  CurveArgs ca;
  auto* ac = app.add_subcommand("alladi-curve", "T_n over the function field of an elliptic curve");
  auto* ap = app.add_subcommand("ap-recover", "recover a_p from truncated sums");
  for (auto* sc : {ac, ap}) {
    sc->add_option("--p", ca.p, "prime > 3")->required();
    sc->add_option("--a", ca.a, "coefficient a")->required();
    sc->add_option("--b", ca.b, "coefficient b")->required();
    sc->add_option("--n", ca.n, "truncation level")->required();
    sc->add_option("--mode", ca.mode, "all or rational");
  }

  SatoTateArgs sa;
  auto* st = app.add_subcommand("sato-tate", "histogram of a_p / sqrt(p) against the semicircle");
  st->add_option("--a", sa.a)->required();
  st->add_option("--b", sa.b)->required();
  st->add_option("--x", sa.x, "prime bound X")->required();
  st->add_option("--bins", sa.bins, "histogram bins");

  std::string psi_q = "2", psi_pairs;
  auto* ps = app.add_subcommand("psi", "smooth-divisor counts against Dickman's rho over F_q(x)");
  ps->add_option("--q", psi_q)->required();
  ps->add_option("--pairs", psi_pairs, "n:m,n:m,...")->required();

  std::string df_q = "2";
  int df_deg = 6, df_trials = 50;
  std::uint64_t df_seed = 1;
  auto* df = app.add_subcommand("duality-fuzz", "random checks of the min/max duality on F_q(x)");
  df->add_option("--q", df_q)->required();
  df->add_option("--deg", df_deg, "largest divisor degree")->required();
  df->add_option("--trials", df_trials);
  df->add_option("--seed", df_seed);

  RationalArgs ia;
  auto* ic = app.add_subcommand("identity-check", "exact finite-level identity over F_q[x]");
  ic->add_option("--q", ia.q)->required();
  ic->add_option("--mod", ia.mod);
  ic->add_option("--res", ia.res);
  ic->add_option("--n", ia.n)->required();

  CacheArgs ka;
  auto* tc = app.add_subcommand("table-cache", "manage cached tables");
  tc->require_subcommand(1);
  auto* warm = tc->add_subcommand("warm", "build one irreducible table (--q --n) or curve table (--p --a --b --n)");
  warm->add_option("--q", ka.q);
  warm->add_option("--n", ka.n)->required();
  warm->add_option("--p", ka.p);
  warm->add_option("--a", ka.a);
  warm->add_option("--b", ka.b);
  auto* inspect = tc->add_subcommand("inspect", "list cache entries");
  auto* clear = tc->add_subcommand("clear", "remove versioned cache files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Context ctx;
    ctx.cfg = load_run_config(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));
    if (!cache_dir.empty()) ctx.cfg.cache_dir = cache_dir;
    if (!out_format.empty()) ctx.cfg.out = parse_output_format(out_format);
    if (workers) ctx.cfg.workers = workers;
    ctx.cfg.validate();
    for (int i = 0; i < argc; ++i) ctx.invocation += (i ? " " : "") + std::string(i ? argv[i] : "alladiff");
    if (ctx.cfg.cache_dir) ctx.cache.emplace(*ctx.cfg.cache_dir);

    if (*ar) run_alladi_rational(ctx, ra);
    else if (*ac) run_alladi_curve(ctx, ca);
    else if (*ap) run_ap_recover(ctx, ca);
    else if (*st) run_sato_tate(ctx, sa);
    else if (*ps) run_psi(ctx, psi_q, psi_pairs);
    else if (*df) run_duality_fuzz(ctx, df_q, df_deg, df_trials, df_seed);
    else if (*ic) run_identity_check(ctx, ia);
    else if (*warm) run_cache_warm(ctx, ka);
    else if (*inspect) run_cache_inspect(ctx);
    else if (*clear) run_cache_clear(ctx);
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return 2;
  }
}
