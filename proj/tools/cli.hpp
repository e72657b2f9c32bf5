#pragma once

// Command-line front end. Every command writes one JSON record per line.
//
// Exit codes: 0 success, 1 usage, 2 unreadable or malformed input,
// 3 invariant violated (or precondition such as unequal barycenters),
// 4 solver did not converge.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "replay.hpp"
#include "wproj/audit.hpp"
#include "wproj/io.hpp"
#include "wproj/wproj.hpp"

namespace wproj::cli {

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kInvariant = 3, kConvergence = 4 };

using json = nlohmann::json;

struct RunConfig {
  std::string command;
  double p = 2.0;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  std::size_t discretize_n = io::kDefaultDiscretizeN;
  std::vector<std::string> inputs;
  std::string out;
  std::string csv;
};

namespace detail {

inline json atoms_json(const DiscreteMeasure& m) { return io::to_json(m)["atoms"]; }

inline json ratio_json(std::optional<double> r) {
  if (!r) return "degenerate";
  return *r;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::Parse, "cannot open output file '" + path + "'");
    }
    os_ = file_ ? file_.get() : &fallback;
  }
  void record(const json& j) { *os_ << j.dump() << '\n'; }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<DiscreteMeasure> load_all(const RunConfig& cfg, std::size_t expected) {
  if (cfg.inputs.size() != expected)
    throw UsageError(cfg.command + " expects " + std::to_string(expected) + " measure files");
  std::vector<DiscreteMeasure> out;
  for (const auto& path : cfg.inputs) out.push_back(io::load_measure(path, cfg.discretize_n));
  return out;
}

inline int cmd_project(const RunConfig& cfg, Sink& sink) {
  const auto ms = load_all(cfg, 2);
  const auto& mu = ms[0];
  const auto& nu = ms[1];
  const auto pi = project_I(mu, nu, cfg.p);
  const auto pj = project_J(mu, nu, cfg.p);
  const auto eq = equaldist_check(mu, nu, cfg.p);
  const bool i_below = is_convex_order(pi.projected, nu, cfg.tol);
  const bool j_above = is_convex_order(mu, pj.projected, cfg.tol);
  const bool ok = i_below && j_above && eq.first_residual() <= cfg.tol && eq.second_residual() <= cfg.tol;
  sink.record({{"command", "project"},
               {"p", cfg.p},
               {"I_atoms", atoms_json(pi.projected)},
               {"J_atoms", atoms_json(pj.projected)},
               {"W_I_mu", pi.distance_to_input},
               {"W_J_nu", pj.distance_to_input},
               {"W_I_nu", eq.i_to_nu},
               {"W_J_mu", eq.j_to_mu},
               {"equaldist_residuals", {eq.first_residual(), eq.second_residual()}},
               {"I_below_nu", i_below},
               {"J_above_mu", j_above},
               {"ok", ok}});
  return ok ? kOk : kInvariant;
}

inline int cmd_distance(const RunConfig& cfg, Sink& sink) {
  const auto ms = load_all(cfg, 2);
  sink.record({{"command", "distance"}, {"p", cfg.p}, {"W", wasserstein(ms[0], ms[1], cfg.p)}});
  return kOk;
}

inline int cmd_order_check(const RunConfig& cfg, Sink& sink) {
  const auto ms = load_all(cfg, 2);
  const bool ordered = is_convex_order(ms[0], ms[1], cfg.tol);
  sink.record({{"command", "order-check"},
               {"tol", cfg.tol},
               {"barycenters", {ms[0].barycenter(), ms[1].barycenter()}},
               {"ordered", ordered}});
  return kOk;
}

inline int cmd_lattice(const RunConfig& cfg, Sink& sink) {
  const auto ms = load_all(cfg, 2);
  const auto meet = min_convex(ms[0], ms[1], cfg.tol);
  const auto join = max_convex(ms[0], ms[1], cfg.tol);
  const bool ok = is_convex_order(meet, ms[0], cfg.tol) && is_convex_order(meet, ms[1], cfg.tol) &&
                  is_convex_order(ms[0], join, cfg.tol) && is_convex_order(ms[1], join, cfg.tol);
  sink.record({{"command", "lattice"},
               {"meet_atoms", atoms_json(meet)},
               {"join_atoms", atoms_json(join)},
               {"sandwich", sandwich_check(ms[0], ms[1], cfg.tol)},
               {"ok", ok}});
  return ok ? kOk : kInvariant;
}

inline int cmd_audit(const RunConfig& cfg, Sink& sink) {
  AuditSummary summary;
  if (!cfg.inputs.empty()) {
    const auto ms = load_all(cfg, 4);
    summary = summarize({{0, lipschitz_audit(ms[0], ms[1], ms[2], ms[3], cfg.p)}}, cfg.tol);
  } else {
    summary = run_audit(cfg.p, cfg.trials, cfg.seed, cfg.tol);
  }

  std::unique_ptr<std::ofstream> csv;
  if (!cfg.csv.empty()) {
    csv = std::make_unique<std::ofstream>(cfg.csv);
    *csv << "trial,lhs_I,rhs_I,lhs_J,rhs_J\n";
    csv->precision(17);
  }
  for (const auto& t : summary.trials) {
    sink.record({{"trial", t.index},
                 {"lhs_I", t.report.lhs_I},
                 {"rhs_I", t.report.rhs_I},
                 {"lhs_J", t.report.lhs_J},
                 {"rhs_J", t.report.rhs_J},
                 {"ratio_I", ratio_json(t.ratio_I())},
                 {"ratio_J", ratio_json(t.ratio_J())}});
    if (csv)
      *csv << t.index << ',' << t.report.lhs_I << ',' << t.report.rhs_I << ',' << t.report.lhs_J << ','
           << t.report.rhs_J << '\n';
  }
  sink.record({{"command", "audit"},
               {"p", cfg.p},
               {"seed", cfg.seed},
               {"trials", summary.trials.size()},
               {"max_ratio_I", summary.max_ratio_I},
               {"max_ratio_J", summary.max_ratio_J},
               {"violations", summary.violations}});
  return summary.violations == 0 ? kOk : kInvariant;
}

inline int cmd_replay(const RunConfig& cfg, Sink& sink) {
  const auto report = replay::run(cfg.discretize_n);
  for (const auto& r : report.rows)
    sink.record({{"group", r.group},
                 {"fixture", r.name},
                 {"expected", r.expected},
                 {"computed", r.computed},
                 {"tol", r.tol},
                 {"pass", r.pass}});
  for (const auto& l : report.lattice)
    sink.record({{"table", "lattice_ratio"},
                 {"n", l.n},
                 {"p", l.p},
                 {"join", l.join},
                 {"meet", l.meet},
                 {"expected", l.expected}});
  for (const auto& a : report.alpha_sweep)
    sink.record({{"table", "alpha_sweep"},
                 {"alpha", a.alpha},
                 {"gap_I", a.gap_I},
                 {"gap_J", a.gap_J},
                 {"W1_delta0_nu", a.distance},
                 {"ratio_I", a.ratio_I},
                 {"ratio_J", a.ratio_J}});

  std::size_t failed = 0;
  for (const auto& r : report.rows) failed += r.pass ? 0 : 1;
  sink.record({{"command", "replay-examples"}, {"fixtures", report.rows.size()}, {"failed", failed}});

  if (!cfg.csv.empty()) {
    std::ofstream csv(cfg.csv);
    csv.precision(17);
    csv << "series,x,p,value,expected\n";
    for (const auto& a : report.alpha_sweep) {
      csv << "alpha_ratio_I," << a.alpha << ",1," << a.ratio_I << ",2\n";
      csv << "alpha_ratio_J," << a.alpha << ",1," << a.ratio_J << ",2\n";
    }
    for (const auto& l : report.lattice) {
      csv << "lattice_join," << l.n << ',' << l.p << ',' << l.join << ',' << l.expected << '\n';
      csv << "lattice_meet," << l.n << ',' << l.p << ',' << l.meet << ',' << l.expected << '\n';
    }
  }
  return failed == 0 ? kOk : kInvariant;
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::NonPositiveWeight:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Parse:
      return kParse;
    case ErrorCode::InvalidP:
      return kUsage;
    case ErrorCode::BarycenterMismatch:
    case ErrorCode::MassMismatch:
      return kInvariant;
    case ErrorCode::NoConvergence:
      return kConvergence;
  }
  return kInvariant;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Wasserstein projections and convex order on the line"};
  app.require_subcommand(1, 1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Wasserstein exponent (p >= 1)")
        ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
    sub->add_option("--tol", cfg.tol, "Absolute tolerance for order and barycenter checks")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--discretize-n", cfg.discretize_n,
                    "Atoms used to discretize quantile-piece inputs")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "Write records to this file instead of stdout");
  };

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, detail::Sink&);
  };
  const Command commands[] = {
      {"project", "I(mu,nu) and J(mu,nu) for two measure files", detail::cmd_project},
      {"distance", "W_p between two measure files", detail::cmd_distance},
      {"order-check", "Whether the first measure is below the second in convex order",
       detail::cmd_order_check},
      {"lattice", "Convex-order minimum and maximum of two equal-mean measures", detail::cmd_lattice},
      {"audit", "Randomized check of the Lipschitz bounds", detail::cmd_audit},
      {"replay-examples", "Replay the worked examples and report pass/fail", detail::cmd_replay},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    sub->add_option("inputs", cfg.inputs, "Measure files");
    if (std::string(c.name) == "audit" || std::string(c.name) == "replay-examples")
      sub->add_option("--csv", cfg.csv, "Also write flat CSV plot data");
    if (std::string(c.name) == "audit") {
      sub->add_option("--seed", cfg.seed, "Random seed");
      sub->add_option("--trials", cfg.trials, "Number of random quadruples")->check(CLI::PositiveNumber);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    cfg.command = c.name;
    try {
      detail::Sink sink(cfg.out, out);
      return c.fn(cfg, sink);
    } catch (const detail::UsageError& e) {
      err << e.what() << '\n';
      return kUsage;
    } catch (const Error& e) {
      err << e.what() << '\n';
      return detail::exit_code_for(e.code());
    }
  }
  return kUsage;
}

}  // namespace wproj::cli
