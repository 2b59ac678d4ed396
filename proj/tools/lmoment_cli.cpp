// lmoment: experiment runner for weighted second moments of L(1, chi).
//
// Exit codes: 0 success, 1 runtime failure or golden mismatch, 2 usage
// error, 3 guard violation, 4 identity-check failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmoment/lmoment.hpp"

namespace {

using lmoment::u64;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIdentity = 4;

struct CommonOptions {
  u64 q = 0;
  std::vector<u64> ns;
  u64 trunc = lmoment::kDefaultTruncation;
  unsigned threads = 0;
  std::string out;
  bool json = false;
  bool bless = false;
};

class GoldenMismatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Writes to stdout, or to `path`. An existing file with different contents
/// is only replaced under --bless.
void emit(const std::string& text, const std::string& path, bool bless) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  if (auto existing = read_file(path)) {
    if (*existing == text) return;
    if (!bless) throw GoldenMismatch("output differs from " + path + "; rerun with --bless to regenerate it");
  }
  if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string render(const lmoment::Table& t, bool json) { return json ? t.to_json() : t.to_csv(); }

void run_alpha(const CommonOptions& o) {
  const auto f = lmoment::factorize(o.q);
  const auto g = lmoment::gamma(f, o.trunc);
  const auto a = lmoment::alpha(f, o.trunc);
  lmoment::Table t({"q", "beta", "gamma", "gamma_tail_bound", "alpha"});
  t.add_row({lmoment::int_cell(o.q), lmoment::beta(f), g.value, g.error_bound, a.value});
  emit(render(t, o.json), o.out, o.bless);
}

void run_lvalues(const CommonOptions& o, u64 cutoff) {
  const lmoment::CharacterGroup group(o.q);
  const lmoment::DigammaTable digamma(o.q, o.threads);
  std::optional<lmoment::HarmonicClassTable> partial;
  if (cutoff > 0) partial = lmoment::harmonic_class_table(o.q, cutoff, o.threads);

  lmoment::Table t({"q", "index", "exponents", "parity", "L_re", "L_im", "L_abs2", "error_bound", "oracle_re",
                    "oracle_im", "oracle_error_bound"});
  const auto chars = lmoment::enumerate_nonprincipal(group);
  for (std::size_t k = 0; k < chars.size(); ++k) {
    const auto& chi = chars[k];
    std::string exps;
    for (std::size_t j = 0; j < chi.exponents().size(); ++j) {
      if (j > 0) exps += ';';
      exps += std::to_string(chi.exponents()[j]);
    }
    const auto l = lmoment::l_one(chi, digamma);
    std::vector<lmoment::Cell> row{lmoment::int_cell(o.q), lmoment::int_cell(k + 1), exps,
                                   static_cast<std::int64_t>(chi.parity()), l.value.real(), l.value.imag(),
                                   std::norm(l.value), l.error_bound};
    if (partial) {
      const auto orc = lmoment::l_one_oracle(chi, *partial);
      row.insert(row.end(), {orc.value.real(), orc.value.imag(), orc.error_bound});
    } else {
      row.insert(row.end(), {lmoment::Cell{}, lmoment::Cell{}, lmoment::Cell{}});
    }
    t.add_row(std::move(row));
  }
  emit(render(t, o.json), o.out, o.bless);
}

void run_scan(const CommonOptions& o, bool timing) {
  for (u64 N : o.ns) {
    if (N >= o.q) {
      std::cerr << "warning: N=" << N << " >= q=" << o.q
                << " lies outside q > N >= 1; the ratio column is left empty\n";
    }
  }
  std::vector<lmoment::ExperimentRow> rows;
  if (timing) {
    for (u64 N : o.ns) {
      const auto t0 = std::chrono::steady_clock::now();
      const u64 one[] = {N};
      auto m = lmoment::moment_scan(o.q, one, o.trunc, o.threads);
      const auto t1 = std::chrono::steady_clock::now();
      rows.push_back({m.front(), std::chrono::duration<double, std::milli>(t1 - t0).count()});
    }
  } else {
    for (const auto& m : lmoment::moment_scan(o.q, o.ns, o.trunc, o.threads)) rows.push_back({m, std::nullopt});
  }
  emit(render(lmoment::experiment_table(rows), o.json), o.out, o.bless);
}

int run_identity(const CommonOptions& o, double tolerance) {
  int status = 0;
  lmoment::Table t({"q", "N", "character_side", "congruence_side", "residual"});
  for (u64 N : o.ns) {
    const auto r = lmoment::identity_check(o.q, N, o.threads);
    t.add_row({lmoment::int_cell(o.q), lmoment::int_cell(N), r.character_side, r.congruence_side, r.residual});
    if (!(r.residual <= tolerance)) status = kExitIdentity;
  }
  emit(render(t, o.json), o.out, o.bless);
  return status;
}

void run_tij(const CommonOptions& o) {
  if (o.ns.size() != 1) throw CLI::ValidationError("--n", "tij takes exactly one N");
  const u64 N = o.ns.front();
  if (lmoment::block_table_work(o.q, N) > lmoment::kBlockTableWorkLimit) {
    throw std::out_of_range("tij: (q, N) too large for the full T table");
  }
  const unsigned J = lmoment::j_of(o.q);
  lmoment::Table t({"i", "j", "T_brute", "T_divisor", "equal"});
  for (unsigned i = 0; i <= J; ++i) {
    for (unsigned j = i; j <= J; ++j) {
      const u64 td = lmoment::t_divisor(o.q, N, {i, j});
      lmoment::Cell brute, equal;
      try {
        const u64 tb = lmoment::t_bruteforce(o.q, N, {i, j});
        brute = lmoment::int_cell(tb);
        equal = tb == td;
      } catch (const std::out_of_range&) {
        // Brute force infeasible for this block; leave the cells empty.
      }
      t.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), brute, lmoment::int_cell(td), equal});
    }
  }
  emit(render(t, o.json), o.out, o.bless);
}

void run_fit(const CommonOptions& o, const std::string& points_path) {
  const auto scan = lmoment::m2_scan(o.q, o.ns, o.threads);
  if (!points_path.empty()) emit(render(lmoment::m2_scan_table(o.q, scan), o.json), points_path, o.bless);
  emit(render(lmoment::fit_table(o.q, scan.fit), o.json), o.out, o.bless);
}

void add_common(CLI::App* sub, CommonOptions& o, bool needs_n) {
  sub->add_option("--q", o.q, "modulus q >= 2")->required()->check(CLI::Range(u64{2}, u64{1} << 31));
  auto* n = sub->add_option("--n", o.ns, "comma-separated list of N >= 1")->delimiter(',')->check(
      CLI::PositiveNumber);
  if (needs_n) n->required();
  sub->add_option("--trunc", o.trunc, "cutoff T of the simplex m + n <= T in gamma_q")
      ->check(CLI::Range(u64{2}, u64{1} << 40));
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  sub->add_option("--out", o.out, "write to this file instead of stdout");
  sub->add_flag("--json", o.json, "emit a JSON array of row objects instead of CSV");
  sub->add_flag("--bless", o.bless, "allow --out to replace an existing file with different contents");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Weighted second moments of L(1, chi) over nonprincipal characters modulo q.\n"
      "All logarithms are natural logarithms."};
  app.require_subcommand(1);

  CommonOptions o;
  u64 cutoff = 0;
  double tolerance = 1e-8;
  bool timing = false;
  std::string points_path;

  auto* alpha = app.add_subcommand("alpha", "beta_q, gamma_q and alpha_q with the gamma truncation bound");
  add_common(alpha, o, false);

  auto* lvalues = app.add_subcommand("lvalues", "L(1, chi) for every nonprincipal character");
  add_common(lvalues, o, false);
  lvalues->add_option("--cutoff", cutoff, "also evaluate the partial-sum oracle up to this cutoff (>= q^2)");

  auto* scan = app.add_subcommand("scan", "S, proxy, M1, M2, alpha and ratio for each N");
  add_common(scan, o, true);
  scan->add_flag("--timing", timing, "fill wall_time_ms (output then varies between runs)");

  auto* identity = app.add_subcommand("identity", "check S_proxy + principal term = M1 + M2 (q <= 200, N <= 50)");
  add_common(identity, o, true);
  identity->add_option("--tolerance", tolerance, "largest accepted relative residual");

  auto* tij = app.add_subcommand("tij", "block counts T_{i,j} by brute force and by divisor splitting");
  add_common(tij, o, true);

  auto* fit = app.add_subcommand("fit", "least-squares slope of ln M2 against ln N");
  add_common(fit, o, true);
  fit->add_option("--points", points_path, "also write the (N, M2) points to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*alpha) run_alpha(o);
    if (*lvalues) {
      if (cutoff > 0 && cutoff < o.q * o.q) throw CLI::ValidationError("--cutoff", "must be >= q^2");
      run_lvalues(o, cutoff);
    }
    if (*scan) run_scan(o, timing);
    if (*identity) return run_identity(o, tolerance);
    if (*tij) run_tij(o);
    if (*fit) {
      if (o.ns.size() < 4) throw CLI::ValidationError("--n", "fit needs at least 4 values of N");
      run_fit(o, points_path);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
