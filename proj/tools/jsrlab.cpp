// jsrlab: joint spectral radius analysis of switched linear systems.
//
//   jsrlab {jsr|prob|equality|finiteness|lift|report} <spec.json> [flags]
//   jsrlab examples [--out-dir DIR]
//
// stdout carries the JSON report, stderr a short human summary.
// Exit status: 0 ok, 2 invalid input, 3 budget exhausted (report still
// written), 1 anything else.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "jsrlab/equality.hpp"
#include "jsrlab/io.hpp"

using namespace jsrlab;
using io::json;

namespace {

struct Flags {
  std::string spec;
  std::size_t horizon = 6;
  std::string norm = "two";
  double tol = 1e-9;
  std::size_t budget = 200'000;
  std::size_t mc_samples = 1000;
  std::uint64_t seed = 0;
  std::size_t max_cycle_len = 12;
  std::size_t max_word_len = 8;
  std::string out_dir = ".";
};

enum Exit { kOk = 0, kOther = 1, kInvalid = 2, kBudget = 3 };

int exit_for(Errc code) {
  switch (code) {
    case Errc::InvalidInput:
    case Errc::IndexOutOfRange:
    case Errc::NonFinite:
    case Errc::DimensionTooLarge:
      return kInvalid;
    case Errc::BudgetExceeded:
    case Errc::StateExplosion:
      return kBudget;
    default:
      return kOther;
  }
}

/// Collects sections and per-section failures for one command.
class Run {
 public:
  Run(std::string command, const Flags& f) : command_(std::move(command)), flags_(f) {}

  template <class F>
  void section(const char* name, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      fail(name, e.code(), e.what());
    } catch (const std::exception& e) {
      fail(name, Errc::NumericalFailure, e.what());
    }
  }

  void fail(const char* name, Errc code, const std::string& msg) {
    errors_.push_back({{"section", name}, {"code", std::string(to_string(code))}, {"message", msg}});
    std::cerr << name << ": " << msg << "\n";
    status_ = std::max(status_, exit_for(code) == kBudget ? int(kBudget) : int(kOther));
    if (exit_for(code) == kInvalid) invalid_ = true;
  }

  void flag_budget() { status_ = std::max(status_, int(kBudget)); }
  json& body() { return body_; }

  int finish() {
    json out;
    out["version"] = std::string(io::kVersion);
    out["command"] = command_;
    out["config"] = {{"spec", flags_.spec},
                     {"horizon", flags_.horizon},
                     {"norm", flags_.norm},
                     {"tol", flags_.tol},
                     {"budget", flags_.budget},
                     {"mc_samples", flags_.mc_samples},
                     {"seed", flags_.seed},
                     {"max_cycle_len", flags_.max_cycle_len},
                     {"max_word_len", flags_.max_word_len},
                     {"threads", thread_count()}};
    out["generated_at"] = io::utc_timestamp();
    for (auto& [k, v] : body_.items()) out[k] = v;
    out["errors"] = errors_;
    std::cout << out.dump(2) << "\n";
    if (invalid_) return kInvalid;
    return status_;
  }

 private:
  std::string command_;
  const Flags& flags_;
  json body_ = json::object();
  json errors_ = json::array();
  int status_ = kOk;
  bool invalid_ = false;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct Loaded {
  io::SystemSpec spec;
  std::optional<MarkovChain> chain;  // with nu attached
  std::string nu_note;
};

Loaded load(const Flags& f) {
  Loaded l{io::load_spec(f.spec), std::nullopt, {}};
  if (l.spec.chain) l.chain = io::with_invariant(*l.spec.chain, &l.nu_note);
  return l;
}

json rho_d_section(Run& run, const MatrixTuple& tuple, const Flags& f, NormKind kind,
                   std::optional<JsrBracket>* keep = nullptr) {
  std::optional<JsrBracket> bf, gr;
  run.section("rho_d_bruteforce", [&] { bf = jsr_bounds_bruteforce(tuple, f.horizon, kind); });
  run.section("rho_d", [&] { gr = jsr_gripenberg(tuple, {.tol = f.tol, .budget = f.budget, .kind = kind}); });
  if (gr && gr->budget_exhausted) run.flag_budget();
  if (keep) *keep = gr;
  if (!bf && !gr) return nullptr;
  JsrBracket best = gr ? *gr : *bf;
  if (bf && gr) {
    if (detail::better_witness(bf->lower, bf->lower_witness, best.lower, best.lower_witness)) {
      best.lower = bf->lower;
      best.lower_witness = bf->lower_witness;
    }
    best.upper = std::min(best.upper, bf->upper);
  }
  std::cerr << "rho_d in [" << fmt(best.lower) << ", " << fmt(best.upper) << "], witness "
            << format_word(best.lower_witness) << "\n";
  return json{{"lower", best.lower},
              {"upper", best.upper},
              {"witness", io::to_json(best.lower_witness)},
              {"horizon", f.horizon},
              {"norm", f.norm},
              {"gripenberg", gr ? io::to_json(*gr) : json(nullptr)},
              {"bruteforce", bf ? io::to_json(*bf) : json(nullptr)}};
}

int cmd_jsr(const Flags& f) {
  Run run("jsr", f);
  const NormKind kind = parse_norm_kind(f.norm);
  const Loaded l = load(f);
  run.body()["rho_d"] = rho_d_section(run, l.spec.tuple, f, kind);
  return run.finish();
}

int cmd_prob(const Flags& f) {
  Run run("prob", f);
  const NormKind kind = parse_norm_kind(f.norm);
  const Loaded l = load(f);
  if (!l.chain && !l.spec.higher_order) {
    throw Error(Errc::InvalidInput, "the spec has neither \"chain\" nor \"higher_order\"");
  }
  const ExpectationOptions eo{.kind = kind};
  json p;
  std::optional<ProbUpper> up;
  run.section("rho_p", [&] {
    up = l.spec.higher_order ? prob_jsr_upper(l.spec.tuple, *l.spec.higher_order, f.horizon, eo)
                             : prob_jsr_upper(l.spec.tuple, *l.chain, f.horizon, eo);
  });
  if (up) {
    if (up->budget_exhausted) run.flag_budget();
    p["curve"] = io::to_json(up->curve);
    p["upper"] = up->upper;
    p["argmin"] = up->argmin;
    p["exact"] = up->curve.exact;
    p["budget_exhausted"] = up->budget_exhausted;
    std::cerr << "rho_p <= " << fmt(up->upper) << " (min of E_n, n <= " << up->curve.values.size() << ")\n";
  }
  p["mc"] = nullptr;
  run.section("mc", [&] {
    const McEstimate mc =
        l.spec.higher_order ? mc_estimate(l.spec.tuple, *l.spec.higher_order, f.horizon, f.mc_samples, f.seed, kind)
                            : mc_estimate(l.spec.tuple, *l.chain, f.horizon, f.mc_samples, f.seed, kind);
    p["mc"] = io::to_json(mc);
    std::cerr << "MC estimate of E_" << f.horizon << ": " << fmt(mc.mean) << " +- " << fmt(mc.std_error) << "\n";
  });
  p["chain"] = l.spec.higher_order ? "higher_order" : "chain";
  if (!l.spec.higher_order) p["nu_source"] = l.nu_note;
  run.body()["rho_p"] = std::move(p);
  return run.finish();
}

int cmd_equality(const Flags& f) {
  Run run("equality", f);
  const NormKind kind = parse_norm_kind(f.norm);
  const Loaded l = load(f);
  const MatrixTuple& tuple = l.spec.tuple;
  std::optional<JsrBracket> bracket;
  run.body()["rho_d"] = rho_d_section(run, tuple, f, kind, &bracket);

  CycleCheckOptions co;
  co.max_len = f.max_cycle_len;
  co.tol = f.tol;
  co.budget = f.budget;
  co.kind = kind;
  run.body()["cycles"] = nullptr;
  if (bracket && (l.chain || l.spec.higher_order)) {
    run.section("cycles", [&] {
      EqualityVerdict v;
      if (l.spec.higher_order) {
        // Cycles of an order-m chain are those of its order-1 lift.
        const LiftedSystem lifted = lift_to_order_one(*l.spec.higher_order, tuple);
        v = check_cycle_condition(lifted.tuple, lifted.chain, *bracket, co);
      } else {
        v = check_cycle_condition(tuple, *l.chain, *bracket, co);
      }
      run.body()["cycles"] = io::to_json(v);
      std::cerr << "cycle condition: " << to_string(v.status) << " (" << v.cycles_checked << " cycles, L = "
                << v.max_len << ")";
      if (v.cycle) std::cerr << " at " << format_word(v.cycle->indices);
      std::cerr << "\n";
    });
  }
  run.body()["distinct_cycle"] = nullptr;
  run.section("distinct_cycle", [&] {
    const auto r = check_distinct_cycle(tuple, {.tol = f.tol, .budget = f.budget, .kind = kind});
    run.body()["distinct_cycle"] = io::to_json(r);
    std::cerr << "distinct-index witness: " << (r.witness ? format_word(*r.witness) : "none") << "\n";
  });
  run.body()["orthogonality"] = nullptr;
  if (bracket && bracket->lower > f.tol) {
    run.section("orthogonality", [&] {
      const auto cert = orthogonal_similarity(tuple, bracket->lower);
      run.body()["orthogonality"] = io::to_json(cert);
      std::cerr << "orthogonal similarity at scale " << fmt(bracket->lower) << ": " << (cert ? "found" : "none")
                << "\n";
    });
  }
  if (l.chain) {
    json per_state = json::array();
    for (std::size_t s = 0; s < l.chain->size(); ++s) {
      run.section("semigroup", [&] {
        const auto v = semigroup_irreducibility(tuple, *l.chain, static_cast<Letter>(s), f.max_cycle_len);
        json e = io::to_json(v);
        e["state"] = s + 1;
        per_state.push_back(std::move(e));
      });
    }
    run.body()["semigroup"] = {{"max_len", f.max_cycle_len}, {"states", std::move(per_state)}};
  }
  return run.finish();
}

int cmd_finiteness(const Flags& f) {
  Run run("finiteness", f);
  const Loaded l = load(f);
  run.body()["finiteness"] = nullptr;
  run.section("finiteness", [&] {
    const auto w = finiteness_search(l.spec.tuple, {.max_word_len = f.max_word_len, .tol = f.tol, .budget = f.budget});
    json j = io::to_json(w);
    j["max_word_len"] = f.max_word_len;
    run.body()["finiteness"] = std::move(j);
    if (w) {
      std::cerr << "finiteness witness " << format_word(w->word) << " (order " << w->order << ", "
                << (w->certified ? "certified" : "candidate") << ")\n";
    } else {
      std::cerr << "no finiteness witness up to length " << f.max_word_len << "\n";
    }
  });
  return run.finish();
}

int cmd_lift(const Flags& f) {
  Run run("lift", f);
  const Loaded l = load(f);
  if (!l.spec.higher_order && !l.chain) {
    throw Error(Errc::InvalidInput, "the spec has neither \"chain\" nor \"higher_order\"");
  }
  const HigherOrderChain hoc = l.spec.higher_order ? *l.spec.higher_order : HigherOrderChain::from_markov(*l.chain);
  run.section("lift", [&] {
    const LiftedSystem lifted = lift_to_order_one(hoc, l.spec.tuple);
    const std::size_t n = hoc.size();
    const std::size_t m = hoc.order();
    json states = json::array();
    json letters = json::array();
    for (std::size_t idx = 0; idx < lifted.chain.size(); ++idx) {
      Word w(m);
      std::size_t rest = idx;
      for (std::size_t pos = m; pos-- > 0;) {
        w[pos] = static_cast<Letter>(rest % n);
        rest /= n;
      }
      states.push_back(io::to_json(w));
      letters.push_back(w.back() + 1);
    }
    json nu = json::array();
    for (Eigen::Index i = 0; i < lifted.chain.nu().size(); ++i) nu.push_back(lifted.chain.nu()(i));
    run.body()["lift"] = {{"order", m},
                          {"states", std::move(states)},
                          {"matrix_of_state", std::move(letters)},
                          {"P", io::to_json(lifted.chain.p())},
                          {"nu", std::move(nu)}};
    std::cerr << "lifted order-" << m << " chain to " << lifted.chain.size() << " states\n";
  });
  return run.finish();
}

int cmd_report(const Flags& f) {
  Run run("report", f);
  const NormKind kind = parse_norm_kind(f.norm);
  const Loaded l = load(f);
  ReportConfig cfg;
  cfg.horizon = f.horizon;
  cfg.kind = kind;
  cfg.tol = f.tol;
  cfg.budget = f.budget;
  cfg.mc_samples = f.mc_samples;
  cfg.seed = f.seed;
  cfg.max_cycle_len = f.max_cycle_len;
  cfg.max_word_len = f.max_word_len;
  AnalysisReport r;
  if (l.spec.higher_order) {
    const LiftedSystem lifted = lift_to_order_one(*l.spec.higher_order, l.spec.tuple);
    r = gap_report(l.spec.tuple, std::nullopt, cfg);
    run.section("rho_p", [&] {
      r.rho_p = prob_jsr_upper(l.spec.tuple, *l.spec.higher_order, f.horizon, {.kind = kind});
      r.mc = mc_estimate(l.spec.tuple, *l.spec.higher_order, f.horizon, f.mc_samples, f.seed, kind);
    });
    if (r.rho_d) {
      CycleCheckOptions co;
      co.max_len = f.max_cycle_len;
      co.tol = f.tol;
      co.kind = kind;
      run.section("cycles", [&] { r.cycles = check_cycle_condition(lifted.tuple, lifted.chain, *r.rho_d, co); });
      if (!r.trivial) {
        double hi = r.rho_p && r.rho_d->lower > 0 ? std::clamp(r.rho_p->upper / r.rho_d->lower, 0.0, 1.0) : 1.0;
        double lo = r.mc ? std::clamp(r.mc->mean / r.rho_d->upper, 0.0, 1.0) : 0.0;
        r.ratio = std::make_pair(std::min(lo, hi), hi);
      }
    }
  } else {
    r = gap_report(l.spec.tuple, l.chain, cfg);
  }
  for (const auto& e : r.errors) run.fail(e.section.c_str(), e.code, e.message);
  if (r.budget_exhausted()) run.flag_budget();
  json body = io::to_json(r);
  body.erase("errors");
  if (l.chain) body["nu_source"] = l.nu_note;
  for (auto& [k, v] : body.items()) run.body()[k] = v;

  if (r.rho_d) std::cerr << "rho_d in [" << fmt(r.rho_d->lower) << ", " << fmt(r.rho_d->upper) << "]\n";
  if (r.rho_p) std::cerr << "rho_p <= " << fmt(r.rho_p->upper) << "\n";
  if (r.ratio) std::cerr << "rho_p / rho_d in [" << fmt(r.ratio->first) << ", " << fmt(r.ratio->second) << "]\n";
  if (r.trivial) std::cerr << "rho_d = 0: ratio undefined\n";
  return run.finish();
}

int cmd_examples(const Flags& f) {
  namespace fs = std::filesystem;
  fs::create_directories(f.out_dir);
  json written = json::array();
  for (int which : {1, 2}) {
    const fs::path path = fs::path(f.out_dir) / ("example" + std::to_string(which) + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::InvalidInput, "cannot write " + path.string());
    out << io::example_spec(which).dump(2) << "\n";
    written.push_back(path.string());
    std::cerr << "wrote " << path.string() << "\n";
  }
  std::cout << json{{"version", std::string(io::kVersion)}, {"command", "examples"}, {"written", written}}.dump(2)
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint spectral radius analysis of switched linear systems"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", f.spec, "System spec (JSON)")->required();
    sub->add_option("--norm", f.norm, "Induced norm: one, two or inf")
        ->check(CLI::IsMember({"one", "two", "inf"}));
    sub->add_option("--tol", f.tol, "Bracket tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--budget", f.budget, "Gripenberg budget (products evaluated)");
  };
  auto add_horizon = [&](CLI::App* sub) {
    sub->add_option("--horizon", f.horizon, "Word length / expectation horizon")->check(CLI::PositiveNumber);
  };

  auto* jsr = app.add_subcommand("jsr", "Deterministic JSR bracket");
  add_common(jsr);
  add_horizon(jsr);

  auto* prob = app.add_subcommand("prob", "Expectation curve and Monte Carlo estimate");
  add_common(prob);
  add_horizon(prob);
  prob->add_option("--mc-samples", f.mc_samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  prob->add_option("--seed", f.seed, "Seed for all randomness");

  auto* eq = app.add_subcommand("equality", "Cycle, distinct-cycle and orthogonality tests");
  add_common(eq);
  add_horizon(eq);
  eq->add_option("--max-cycle-len", f.max_cycle_len, "Longest cycle examined")->check(CLI::PositiveNumber);

  auto* fin = app.add_subcommand("finiteness", "Search for a finiteness witness");
  add_common(fin);
  fin->add_option("--max-word-len", f.max_word_len, "Longest word examined")->check(CLI::PositiveNumber);

  auto* lift = app.add_subcommand("lift", "Lift an order-m chain to order 1");
  lift->add_option("spec", f.spec, "System spec (JSON)")->required();

  auto* report = app.add_subcommand("report", "Full gap report");
  add_common(report);
  add_horizon(report);
  report->add_option("--mc-samples", f.mc_samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  report->add_option("--seed", f.seed, "Seed for all randomness");
  report->add_option("--max-cycle-len", f.max_cycle_len, "Longest cycle examined")->check(CLI::PositiveNumber);
  report->add_option("--max-word-len", f.max_word_len, "Longest word examined")->check(CLI::PositiveNumber);

  auto* ex = app.add_subcommand("examples", "Write the built-in example specs");
  ex->add_option("--out-dir", f.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*jsr) return cmd_jsr(f);
    if (*prob) return cmd_prob(f);
    if (*eq) return cmd_equality(f);
    if (*fin) return cmd_finiteness(f);
    if (*lift) return cmd_lift(f);
    if (*report) return cmd_report(f);
    if (*ex) return cmd_examples(f);
  } catch (const Error& e) {
    std::cerr << "jsrlab: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "jsrlab: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
