// mertens-tool: command-line front end for the mertens core library.
//
// Exit codes: 0 success, 1 invalid flags, 2 domain/input error,
// 3 internal cross-check failure (method disagreement, proven bound violated),
// 4 unexpected runtime error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mertens/bounds.hpp"
#include "mertens/checkpoint.hpp"
#include "mertens/ensemble.hpp"
#include "mertens/errors.hpp"
#include "mertens/format.hpp"
#include "mertens/mobius.hpp"
#include "mertens/sweep.hpp"
#include "mertens/transfer_matrix.hpp"

namespace {

using namespace mertens;

constexpr int kExitDomain = 2;
constexpr int kExitCrossCheck = 3;
constexpr int kExitInternal = 4;

struct Globals {
  unsigned threads = 0;
  int precision = 6;
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 20240229;
  double beta = 1.0;
  double alpha = 0.05;
  double p = 1.0;
};

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MERTENS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Stdout unless --output was given.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw NotFoundError("cannot open output file " + path);
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v, int precision) {
  return precision <= 0 ? format_exact(v) : format_sig(v, precision);
}

bounds::ParamDefaults defaults_of(const Globals& g) { return {g.beta, g.alpha, g.p}; }

// --- mertens -------------------------------------------------------------

struct MertensArgs {
  std::uint64_t n = 1;
  std::string method = "sieve";
  std::string checkpoint;
  std::string resume;
  std::size_t segment_size = kDefaultSegmentSize;
};

std::int64_t last_by_sieve(std::uint64_t from, std::uint64_t to, std::int64_t before,
                           const SieveOptions& opts) {
  std::int64_t last = before;
  for_each_mertens(from, to, before, opts,
                   [&](std::uint64_t, std::span<const std::int64_t> v) { last = v.back(); });
  return last;
}

int cmd_mertens(const MertensArgs& a, const Globals& g, std::ostream& out) {
  const SieveOptions opts{a.segment_size, g.threads};
  std::int64_t m = 0;
  Method tag = Method::segmented_sieve;
  if (!a.resume.empty()) {
    const auto cp = checkpoint_read(a.resume);
    if (a.n < cp.n) {
      throw DomainError("cannot resume backwards: checkpoint is at n = " + std::to_string(cp.n));
    }
    m = a.n == cp.n ? cp.m : last_by_sieve(cp.n + 1, a.n, cp.m, opts);
  } else if (a.method == "sieve") {
    m = last_by_sieve(1, a.n, 0, opts);
  } else if (a.method == "linear") {
    m = mertens_prefix(a.n, Method::linear_sieve).last();
    tag = Method::linear_sieve;
  } else if (a.method == "trial") {
    m = mertens_prefix(a.n, Method::trial).last();
    tag = Method::trial;
  } else if (a.method == "recurrence") {
    m = mertens_recurrence(a.n);
    tag = Method::recurrence;
  } else {  // both
    m = last_by_sieve(1, a.n, 0, opts);
    const std::int64_t r = mertens_recurrence(a.n);
    if (r != m) {
      throw CrossCheckError("method disagreement at n = " + std::to_string(a.n) +
                            ": sieve " + std::to_string(m) + ", recurrence " +
                            std::to_string(r));
    }
  }
  if (!a.checkpoint.empty()) {
    MertensTable t;
    t.start = a.n;
    t.values = {m};
    t.generated_by = tag;
    checkpoint_write(t, a.checkpoint);
  }
  out << m << '\n';
  return 0;
}

// --- partition -----------------------------------------------------------

struct PartitionArgs {
  std::size_t n = 1;
  double x = 1.0;
  double y = 1.0;
  bool check = false;
};

int cmd_partition(const PartitionArgs& a, const Globals& g, std::ostream& out) {
  const auto params = ising::ModelParams::from_weights(a.x, a.y);
  const auto q = ising::partition_transfer(a.n, params);
  if (q.q) {
    out << "Q=" << num(*q.q, g.precision) << '\n';
  } else {
    out << "Q=log-domain-only\n";
  }
  out << "lnQ=" << num(q.log_q, g.precision) << '\n';
  if (a.check) {
    const double brute = ising::partition_bruteforce(a.n, params);
    const double rel = std::abs(brute - *q.q) / brute;
    const bool ok = rel <= 1e-9;
    out << "bruteforce=" << num(brute, g.precision) << " check=" << (ok ? "OK" : "FAILED") << '\n';
    if (!ok) {
      throw CrossCheckError("transfer matrix and enumeration differ (rel " + format_sig(rel) + ")");
    }
  }
  return 0;
}

// --- bounds --------------------------------------------------------------

struct BoundsArgs {
  std::uint64_t n = 1;
  bool list = false;
  std::string bound;
};

int cmd_bounds(const BoundsArgs& a, const Globals& g, std::ostream& out) {
  if (a.list) {
    out << "bound_name,params,valid_from,value\n";
    for (auto kind : bounds::all_bound_kinds()) {
      const auto def = bounds::parse_bound(bounds::to_string(kind), defaults_of(g));
      out << def.name() << ',' << def.params_string() << ',' << def.valid_from() << ','
          << (def.in_domain(a.n) ? num(def.value(a.n), g.precision) : "domain-error") << '\n';
    }
    return 0;
  }
  if (a.bound.empty()) throw CLI::ValidationError("bounds", "give --list or --bound NAME");
  const auto def = bounds::parse_bound(a.bound, defaults_of(g));
  if (def.kind() == bounds::BoundKind::fluct_interval) {
    const auto iv = bounds::bound_fluctuation_interval(a.n, def.param("alpha"), def.param("beta"));
    out << num(iv.lo, g.precision) << ' ' << num(iv.hi, g.precision) << '\n';
    return 0;
  }
  out << num(def.value(a.n), g.precision) << '\n';
  return 0;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::uint64_t limit = 1;
  std::string grid = "powers";
  std::vector<std::string> bounds = {"macleod"};
  bool summary = false;
  std::string gnuplot;
  std::size_t segment_size = kDefaultSegmentSize;
};

int cmd_sweep(const SweepArgs& a, const Globals& g, std::ostream& out) {
  std::vector<bounds::BoundDefinition> defs;
  for (const auto& spec : a.bounds) defs.push_back(bounds::parse_bound(spec, defaults_of(g)));
  verify::SweepOptions opts;
  opts.sieve = {a.segment_size, g.threads};
  opts.keep_rows = !a.summary || !a.gnuplot.empty();
  const auto report = verify::sweep(a.limit, Grid::parse(a.grid), defs, opts);
  if (a.summary) {
    verify::write_summary_csv(out, report, g.precision);
  } else if (g.format == "json") {
    verify::write_sweep_json(out, report, g.precision);
  } else {
    verify::write_sweep_csv(out, report, g.precision);
  }
  if (!a.gnuplot.empty()) verify::write_gnuplot(a.gnuplot, report, g.precision);
  std::cerr << "# extremal max|M(n)|/sqrt(n) (n>=2) = " << format_sig(report.extremal.ratio)
            << " at n = " << report.extremal.n << '\n';
  if (report.theorem_violated()) {
    std::cerr << "error: a proven bound was violated\n";
    return kExitCrossCheck;
  }
  return 0;
}

// --- crossover -----------------------------------------------------------

struct CrossoverArgs {
  std::string a;
  std::string b;
  std::uint64_t lo = 1;
  std::uint64_t hi = 1000000;
};

int cmd_crossover(const CrossoverArgs& a, const Globals& g, std::ostream& out) {
  const auto result = verify::crossover(bounds::parse_bound(a.a, defaults_of(g)),
                                        bounds::parse_bound(a.b, defaults_of(g)), a.lo, a.hi);
  if (!result.reason.empty()) std::cerr << "# " << result.reason << '\n';
  out << "crossing_n\n";
  for (auto n : result.crossings) out << n << '\n';
  return 0;
}

// --- simulate / moments / trajectory -------------------------------------

struct ModelArgs {
  std::string model = "uniform3";
  std::uint64_t n = 10000;
};

ensemble::RandomSequenceModel make_model(const ModelArgs& m, const Globals& g) {
  if (m.model == "uniform3") return ensemble::RandomSequenceModel::uniform3(m.n, g.seed);
  return ensemble::RandomSequenceModel::canonical(g.beta, m.n, g.seed);
}

struct SimulateArgs {
  ModelArgs model;
  std::uint64_t trials = 10000;
  std::string bound = "rw_cheb";
};

int cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  const auto model = make_model(a.model, g);
  const auto def = bounds::parse_bound(a.bound, defaults_of(g));
  const auto result = ensemble::violation_rate(model, def, a.trials, g.threads);
  ensemble::write_violation_csv_header(out);
  ensemble::write_violation_csv_row(out, model, def, result);
  return 0;
}

struct MomentsArgs {
  ModelArgs model;
  std::uint64_t samples = 100000;
};

int cmd_moments(const MomentsArgs& a, const Globals& g, std::ostream& out) {
  const auto model = make_model(a.model, g);
  const auto stats = ensemble::ensemble_moments(model, a.samples, g.threads);
  const auto f = bounds::fluctuation_coefficients(model.effective_beta());
  const double nn = static_cast<double>(model.n);
  out << "model,n,beta,samples,mean,variance,se_mean,expected_mean,expected_variance\n";
  out << model.name() << ',' << model.n << ',' << format_exact(model.effective_beta()) << ','
      << stats.samples << ',' << num(stats.mean, g.precision) << ','
      << num(stats.variance, g.precision) << ',' << num(stats.std_error_mean, g.precision) << ','
      << num(f.a * nn, g.precision) << ',' << num(f.b * nn, g.precision) << '\n';
  return 0;
}

struct TrajectoryArgs {
  std::uint64_t limit = 10000;
  std::string model = "uniform3";
  std::uint64_t trials = 1000;
  std::string grid = "all";
};

int cmd_trajectory(const TrajectoryArgs& a, const Globals& g, std::ostream& out) {
  const auto model = make_model({a.model, a.limit}, g);
  const auto report = ensemble::mertens_trajectory_compare(a.limit, model, a.trials, g.alpha,
                                                           Grid::parse(a.grid), g.threads);
  ensemble::write_trajectory_csv(out, report);
  std::cerr << "# fraction below envelope = " << format_sig(report.fraction_below) << '\n';
  return 0;
}

std::string config_line(int argc, char** argv, const Globals& g) {
  std::ostringstream line;
  line << "# config:";
  for (int i = 1; i < argc; ++i) line << ' ' << argv[i];
  line << " | threads=" << g.threads << " seed=" << g.seed << " precision=" << g.precision
       << " format=" << g.format;
  return line.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Möbius/Mertens computation, spin-chain partition functions and M(n) bounds"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_help_all_flag("--help-all");

  Globals g;
  app.add_option("--threads", g.threads, "worker threads (default: MERTENS_THREADS or all cores)");
  app.add_option("--precision", g.precision, "significant digits; 0 = shortest exact form")
      ->check(CLI::Range(0, 17));
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", g.output, "write results to a file instead of stdout");
  app.add_option("--seed", g.seed, "master seed for Monte Carlo streams");
  app.add_option("--beta", g.beta, "field strength beta");
  app.add_option("--alpha", g.alpha, "significance level alpha");
  app.add_option("--p", g.p, "externally supplied state probability p");

  MertensArgs mertens_args;
  auto* mertens = app.add_subcommand("mertens", "print M(n)");
  mertens->add_option("n", mertens_args.n)->required()->check(CLI::PositiveNumber);
  mertens->add_option("--method", mertens_args.method)
      ->check(CLI::IsMember({"sieve", "linear", "trial", "recurrence", "both"}));
  mertens->add_option("--checkpoint", mertens_args.checkpoint, "write a checkpoint for M(n)");
  mertens->add_option("--resume", mertens_args.resume, "continue from a checkpoint file");
  mertens->add_option("--segment-size", mertens_args.segment_size)->check(CLI::PositiveNumber);

  PartitionArgs partition_args;
  auto* partition = app.add_subcommand("partition", "print Q_n = tr P^n and ln Q_n");
  partition->add_option("n", partition_args.n)->required()->check(CLI::PositiveNumber);
  partition->add_option("--x", partition_args.x, "coupling weight exp(J/2kT)");
  partition->add_option("--y", partition_args.y, "field weight exp(xi h/kT)");
  partition->add_flag("--check-bruteforce", partition_args.check, "compare with 3^n enumeration");

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate upper bounds on M(n)");
  bounds_cmd->add_option("n", bounds_args.n)->required()->check(CLI::PositiveNumber);
  bounds_cmd->add_flag("--list", bounds_args.list, "evaluate every bound");
  bounds_cmd->add_option("--bound", bounds_args.bound, "name[:key=value...]");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "compare bounds against M(n) over a grid");
  sweep_cmd->add_option("limit", sweep_args.limit)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--grid", sweep_args.grid,
                        "all | powers | geometric:<ratio> | arithmetic:<step>");
  sweep_cmd->add_option("--bounds", sweep_args.bounds, "bound specs")->delimiter(',');
  sweep_cmd->add_flag("--summary", sweep_args.summary, "print per-bound summary only");
  sweep_cmd->add_option("--gnuplot", sweep_args.gnuplot, "directory for per-bound .dat files");
  sweep_cmd->add_option("--segment-size", sweep_args.segment_size)->check(CLI::PositiveNumber);

  CrossoverArgs crossover_args;
  auto* crossover_cmd = app.add_subcommand("crossover", "where two bounds swap order");
  crossover_cmd->add_option("a", crossover_args.a)->required();
  crossover_cmd->add_option("b", crossover_args.b)->required();
  crossover_cmd->add_option("--lo", crossover_args.lo);
  crossover_cmd->add_option("--hi", crossover_args.hi);

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "empirical exceedance rate of a bound");
  simulate->add_option("--model", simulate_args.model.model)
      ->check(CLI::IsMember({"uniform3", "canonical"}));
  simulate->add_option("--n", simulate_args.model.n)->check(CLI::PositiveNumber);
  simulate->add_option("--trials", simulate_args.trials);
  simulate->add_option("--bound", simulate_args.bound, "name[:key=value...]");

  MomentsArgs moments_args;
  auto* moments = app.add_subcommand("moments", "sample mean and variance of U = sum s_i");
  moments->add_option("--model", moments_args.model.model)
      ->check(CLI::IsMember({"uniform3", "canonical"}));
  moments->add_option("--n", moments_args.model.n)->check(CLI::PositiveNumber);
  moments->add_option("--samples", moments_args.samples);

  TrajectoryArgs trajectory_args;
  auto* trajectory = app.add_subcommand("trajectory", "|M(i)|/sqrt(i) against random envelopes");
  trajectory->add_option("limit", trajectory_args.limit)->required()->check(CLI::PositiveNumber);
  trajectory->add_option("--model", trajectory_args.model)
      ->check(CLI::IsMember({"uniform3", "canonical"}));
  trajectory->add_option("--trials", trajectory_args.trials);
  trajectory->add_option("--grid", trajectory_args.grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  g.threads = resolve_threads(g.threads);
  std::cerr << config_line(argc, argv, g) << '\n';

  try {
    Sink sink(g.output);
    auto& out = sink.out();
    if (*mertens) return cmd_mertens(mertens_args, g, out);
    if (*partition) return cmd_partition(partition_args, g, out);
    if (*bounds_cmd) return cmd_bounds(bounds_args, g, out);
    if (*sweep_cmd) return cmd_sweep(sweep_args, g, out);
    if (*crossover_cmd) return cmd_crossover(crossover_args, g, out);
    if (*simulate) return cmd_simulate(simulate_args, g, out);
    if (*moments) return cmd_moments(moments_args, g, out);
    if (*trajectory) return cmd_trajectory(trajectory_args, g, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return 1;
  } catch (const CrossCheckError& e) {
    std::cerr << "cross-check failed: " << e.what() << '\n';
    return kExitCrossCheck;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const SizeError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NotFoundError& e) {
    std::cerr << "not found: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
