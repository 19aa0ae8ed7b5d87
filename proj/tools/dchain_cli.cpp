// dchain: command-line front end for the double-chain toolkit.
//
// Every verb prints a short human-readable summary followed by its
// certificate (`key=value` lines) on standard output. `--report FILE` also
// writes the certificate to FILE. Exit status: 0 pass, 1 fail,
// 2 inconclusive, 3 usage or input error.

#include "dchain/double_chain.hpp"
#include "dchain/error.hpp"
#include "dchain/extremal.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

using namespace dchain;

namespace {

constexpr int kExitUsage = 3;

struct Common {
  std::string expr;
  std::string report;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t budget = 0;
  double time_limit = 0;

  std::optional<std::chrono::milliseconds> limit() const {
    if (time_limit <= 0) return std::nullopt;
    return std::chrono::milliseconds(static_cast<long long>(time_limit * 1000));
  }
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass:
    case Verdict::PropertyPass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

int emit(const Common& common, const std::string& summary, Certificate cert,
         std::chrono::steady_clock::time_point started) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  if (!cert.get("elapsed_ms")) cert.set("elapsed_ms", std::to_string(ms.count()));
  const std::string text = cert.serialize();
  std::cout << summary << "\n" << text;
  if (!common.report.empty()) {
    std::ofstream out(common.report);
    if (!out) throw Error(common.report + ": cannot open report file for writing");
    out << text;
    if (!out) throw Error(common.report + ": write failed");
  }
  return exit_code(cert.verdict);
}

void add_expr(CLI::App* cmd, Common& common) {
  cmd->add_option("expr", common.expr, "Poset expression, e.g. \"S' * D3 + B + B\" or @file")->required();
}

void add_report(CLI::App* cmd, Common& common) {
  cmd->add_option("--report", common.report, "Also write the certificate to FILE");
}

void add_jobs(CLI::App* cmd, Common& common) {
  cmd->add_option("--jobs", common.jobs, "Worker threads")->envname("DCHAIN_JOBS")->check(CLI::Range(1u, 1024u));
}

void add_budget(CLI::App* cmd, Common& common) {
  cmd->add_option("--budget", common.budget, "Search node budget (0 = unlimited)");
  cmd->add_option("--time-limit", common.time_limit, "Time limit in seconds (0 = none)")->check(CLI::NonNegativeNumber);
}

std::string verdict_word(Verdict v) { return std::string(verdict_string(v)); }

int run_info(const Common& common, std::optional<unsigned> n) {
  const auto t0 = std::chrono::steady_clock::now();
  const PosetExpr expr = parse_expr(common.expr);
  const Poset p = eval_expr(expr);
  Certificate cert;
  cert.claim = "info";
  cert.set("expr", to_string(expr));
  cert.set("size", std::to_string(p.size()));
  cert.set("L", std::to_string(longest_chain(p)));
  cert.set("b", to_string(b_value(p)));
  cert.set("e", expr.base_leaves_only() ? std::to_string(e_composition_bound(expr)) : "n/a");
  cert.set("relations", std::to_string(p.relation_count()));
  cert.set("greatest", greatest_element(p) ? "yes" : "no");
  cert.set("least", least_element(p) ? "yes" : "no");
  if (n) {
    const UpperBound ub = upper_bound_theorem4(p, *n);
    cert.set("n", std::to_string(*n));
    cert.set("upper_bound", to_string(ub.value));
    cert.set("upper_bound_kind", std::string(bound_kind_string(ub.kind)));
    cert.set("old_bound", to_string(old_bound(p, *n)));
  }
  cert.verdict = Verdict::Pass;
  const std::string summary = "poset " + to_string(expr) + ": |P|=" + *cert.get("size") + " L(P)=" +
                              *cert.get("L") + " b(P)=" + *cert.get("b") + " e=" + *cert.get("e");
  return emit(common, summary, std::move(cert), t0);
}

int run_la(const Common& common, unsigned n) {
  const auto t0 = std::chrono::steady_clock::now();
  const PosetExpr expr = parse_expr(common.expr);
  const Poset p = eval_expr(expr);
  LaOptions opts;
  opts.max_n = std::max(opts.max_n, n);
  opts.max_nodes = common.budget;
  opts.time_limit = common.limit();
  const LaResult r = la_exact(n, p, opts);
  Certificate cert;
  cert.claim = "la";
  cert.set("expr", to_string(expr));
  cert.set("n", std::to_string(n));
  cert.set("value", std::to_string(r.value));
  cert.set("upper_bound", std::to_string(r.upper_bound));
  cert.set("method", r.method);
  cert.set("nodes", std::to_string(r.nodes));
  cert.set("sigma_b", is_integral(b_value(p)) && numerator(b_value(p)) <= n + 1
                          ? to_string(sigma(n, static_cast<unsigned>(numerator(b_value(p)))))
                          : "n/a");
  cert.verdict = r.status == LaStatus::Exact ? Verdict::Pass : Verdict::Inconclusive;
  if (r.status == LaStatus::Inconclusive) cert.set("note", "budget exhausted; value is a lower bound");
  cert.witness = r.witness;
  const std::string summary = r.status == LaStatus::Exact
                                  ? "La(" + std::to_string(n) + ", " + to_string(expr) + ") = " + std::to_string(r.value)
                                  : "La(" + std::to_string(n) + ", " + to_string(expr) + ") in [" +
                                        std::to_string(r.value) + ", " + std::to_string(r.upper_bound) + "]";
  return emit(common, summary, std::move(cert), t0);
}

int run_verify(const Common& common, unsigned n) {
  const auto t0 = std::chrono::steady_clock::now();
  const PosetExpr expr = parse_expr(common.expr);
  VerifyOptions opts;
  if (common.budget) opts.la.max_nodes = common.budget;
  opts.la.time_limit = common.limit();
  opts.window.max_nodes = common.budget;
  opts.window.time_limit = common.limit();
  opts.window.jobs = common.jobs;
  Certificate cert = verify_main_theorem(expr, n, opts);
  const std::string summary = "main theorem for " + to_string(expr) + " at n=" + std::to_string(n) + ": " +
                          verdict_word(cert.verdict);
  return emit(common, summary, std::move(cert), t0);
}

int run_audit(const Common& common, unsigned n) {
  const auto t0 = std::chrono::steady_clock::now();
  const DoubleChainAudit audit = audit_double_chains(n, common.jobs);
  Certificate cert;
  cert.claim = "audit-double-chains";
  cert.set("n", std::to_string(n));
  cert.set("subsets", std::to_string(audit.subsets));
  cert.set("matches", std::to_string(audit.matches) + "/" + std::to_string(audit.subsets));
  cert.set("incidence_enumerated", to_string(audit.incidence_enumerated));
  cert.set("incidence_closed_form", to_string(audit.incidence_closed_form));
  if (!audit.mismatches.empty()) {
    std::string list;
    for (std::size_t i = 0; i < audit.mismatches.size() && i < 10; ++i)
      list += (i ? " " : "") + format_subset(audit.mismatches[i]);
    cert.set("mismatches", list);
  }
  cert.verdict = audit.passed() ? Verdict::Pass : Verdict::Fail;
  const std::string summary = "double-chain containment counts at n=" + std::to_string(n) + ": " +
                              *cert.get("matches") + " subsets match the closed form";
  return emit(common, summary, std::move(cert), t0);
}

int run_window(const Common& common, const std::string& m_text) {
  const auto t0 = std::chrono::steady_clock::now();
  const PosetExpr expr = parse_expr(common.expr);
  const Poset p = eval_expr(expr);
  const Rational m = m_text.empty() ? b_value(p) : parse_rational(m_text);
  WindowOptions opts;
  opts.max_nodes = common.budget;
  opts.time_limit = common.limit();
  opts.jobs = common.jobs;
  Certificate cert = window_condition(p, m, to_string(expr), opts);
  const std::string summary = "window condition for " + to_string(expr) + " at m=" + to_string(m) + ": " +
                          verdict_word(cert.verdict);
  return emit(common, summary, std::move(cert), t0);
}

int run_e_scan(const Common& common, std::optional<unsigned> m_opt, std::optional<unsigned> n_max_opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const PosetExpr expr = parse_expr(common.expr);
  const Poset p = eval_expr(expr);
  unsigned m = 0;
  if (m_opt) {
    m = *m_opt;
  } else {
    const Rational b = b_value(p);
    if (!is_integral(b)) throw Error("b(P) = " + to_string(b) + " is not an integer; pass --m explicitly");
    m = static_cast<unsigned>(numerator(b));
  }
  const unsigned n_max = n_max_opt.value_or(2 * m + 2);
  Certificate cert = e_lower_scan(p, m, n_max, to_string(expr), ScanOptions{common.jobs, common.budget, common.limit()});
  const auto upper = e_upper_witness(p, m + 1, n_max);
  if (upper) {
    cert.set("upper_witness", "n=" + std::to_string(upper->n) + " k=" + std::to_string(upper->k) + " m=" +
                                  std::to_string(m + 1));
    std::string image;
    for (Mask s : upper->image.members()) image += (image.empty() ? "" : " ") + format_subset(s);
    cert.set("upper_witness_image", image);
  } else {
    cert.set("upper_witness", "none for n<=" + std::to_string(n_max));
  }
  std::string summary = "e-scan for " + to_string(expr) + ": " + std::to_string(m) + " consecutive levels ";
  switch (cert.verdict) {
    case Verdict::Fail: summary += "contain P at n=" + *cert.get("n") + ", k=" + *cert.get("k"); break;
    case Verdict::Inconclusive: summary += "undecided (" + *cert.get("note") + ")"; break;
    default: summary += "are P-free for n<=" + std::to_string(n_max);
  }
  if (upper) summary += "; " + std::to_string(m + 1) + " levels of [" + std::to_string(upper->n) + "] contain P";
  return emit(common, summary, std::move(cert), t0);
}

int run_free_check(const Common& common, const std::string& family_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const PosetExpr expr = parse_expr(common.expr);
  const Poset p = eval_expr(expr);
  const Family f = load_family_file(family_path);
  const auto found = find_in_family(f, p);
  Certificate cert;
  cert.claim = "free-check";
  cert.set("expr", to_string(expr));
  cert.set("family", family_path);
  cert.set("n", std::to_string(f.ground_size()));
  cert.set("family_size", std::to_string(f.size()));
  cert.set("value", found ? "contains" : "p-free");
  if (found) {
    cert.witness = embedding_image(f, *found);
    cert.verdict = Verdict::Fail;
  } else {
    cert.verdict = Verdict::Pass;
  }
  return emit(common, family_path + (found ? " contains " : " is free of ") + to_string(expr), std::move(cert), t0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-chain toolkit for forbidden-subposet problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dchain 0.1.0");

  Common common;
  unsigned n = 0;
  std::optional<unsigned> n_opt;
  std::optional<unsigned> m_opt;
  std::string m_text;
  std::optional<unsigned> n_max;
  std::string family_path;

  auto* info = app.add_subcommand("info", "Size, longest chain, b(P), e bound and upper bounds");
  add_expr(info, common);
  info->add_option("--n", n_opt, "Ground-set size for the bound comparison")->check(CLI::Range(0u, 10000u));
  add_report(info, common);

  auto* la = app.add_subcommand("la", "Exact La(n,P) for small n");
  add_expr(la, common);
  la->add_option("--n", n, "Ground-set size")->required()->check(CLI::Range(0u, kLaAbsoluteMaxN));
  add_budget(la, common);
  add_report(la, common);

  auto* verify = app.add_subcommand("verify", "Check La(n,P) = Sigma(n,b(P)) for an expression over the bases");
  add_expr(verify, common);
  verify->add_option("--n", n, "Ground-set size")->required()->check(CLI::Range(1u, 64u));
  add_budget(verify, common);
  add_jobs(verify, common);
  add_report(verify, common);

  auto* audit = app.add_subcommand("audit-double-chains", "Check double-chain containment counts for every subset");
  audit->add_option("--n", n, "Ground-set size")->required()->check(CLI::Range(2u, 11u));
  add_jobs(audit, common);
  add_report(audit, common);

  auto* window = app.add_subcommand("window-check", "Window condition in the infinite double chain (default m = b(P))");
  add_expr(window, common);
  window->add_option("--m", m_text, "Half-integer m, e.g. 3 or 3/2");
  add_budget(window, common);
  add_jobs(window, common);
  add_report(window, common);

  auto* escan = app.add_subcommand("e-scan", "Scan consecutive-level families (default m = b(P))");
  add_expr(escan, common);
  escan->add_option("--m", m_opt, "Number of consecutive levels")->check(CLI::Range(0u, 64u));
  escan->add_option("--n-max", n_max, "Largest ground set scanned (default 2m+2)")->check(CLI::Range(0u, 20u));
  add_budget(escan, common);
  add_jobs(escan, common);
  add_report(escan, common);

  auto* free_check = app.add_subcommand("free-check", "Test a family file for P-freeness");
  add_expr(free_check, common);
  free_check->add_option("--family", family_path, "Family file")->required();
  add_report(free_check, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (info->parsed()) return run_info(common, n_opt);
    if (la->parsed()) return run_la(common, n);
    if (verify->parsed()) return run_verify(common, n);
    if (audit->parsed()) return run_audit(common, n);
    if (window->parsed()) return run_window(common, m_text);
    if (escan->parsed()) return run_e_scan(common, m_opt, n_max);
    if (free_check->parsed()) return run_free_check(common, family_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
