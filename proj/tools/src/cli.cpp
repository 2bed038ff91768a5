#include "ptwell_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include "ptwell/boundstates.hpp"
#include "ptwell/error.hpp"
#include "ptwell/oracle.hpp"
#include "ptwell/scattering.hpp"
#include "ptwell/spectrum.hpp"
#include "ptwell/transport.hpp"
#include "ptwell/validation.hpp"
#include "ptwell_cli/table.hpp"

namespace ptwell::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
  double v0 = 9.0;
  double vI = 15.0;
  double b = 1.0;
  double Lambda = 0.5;
  std::string format = "csv";
  std::string output = "-";
  int jobs = 1;
};

struct SpectrumOpts {
  double start = 0.0;
  double stop = 8.0;
  int steps = 161;
  double k_max = 12.0;
  std::string ep_output;
};

struct ScatterOpts {
  double start = 0.01;
  double stop = 10.0;
  int steps = 1000;
};

struct TransportOpts {
  int k_index = 1;
  double k_value = 0.0;
  double x_max = 0.0;
  int points = 801;
  double k_max = 12.0;
};

struct EpOpts {
  double stop = 8.0;
  double step = 0.05;
  double k_max = 12.0;
  int oracle_n = 0;
};

struct ValidateOpts {
  std::string level = "full";
  double k_max = 12.0;
};

// Thrown for user-facing argument problems detected after parsing.
struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_sweep(double start, double stop, int steps) {
  if (steps < 2) throw ArgumentError("--steps must be at least 2");
  if (!(start < stop)) throw ArgumentError("sweep start must be below stop");
}

double flux_at_origin(const WellParams& p, cplx k) {
  if (k.imag() != 0.0 || !(k.real() > 0.0)) return kNaN;
  try {
    return bound_flux(make_bound_state(p, k.real()), 0.0);
  } catch (const Error&) {
    return kNaN;
  }
}

// Opens --output (or returns the fallback stream for "-").
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::ios_base::failure("cannot open " + path + " for writing");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }
  bool to_file() const { return file_ != nullptr; }
  const std::string& path() const { return path_; }
  void close() {
    os_->flush();
    if (!*os_) throw std::ios_base::failure("write to " + path_ + " failed");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

void emit(const Table& t, const Common& c, std::ostream& out) {
  Sink sink(c.output, out);
  if (c.format == "json") {
    write_json(t, sink.stream());
  } else {
    write_csv(t, sink.stream());
  }
  sink.close();
}

int cmd_spectrum(const WellParams& p, const Common& c, const SpectrumOpts& o, std::ostream& out, std::ostream& err) {
  require_sweep(o.start, o.stop, o.steps);
  const double step = (o.stop - o.start) / (o.steps - 1);
  const Spectrum sp = trace_spectrum(p, {o.start, o.stop}, step, o.k_max, c.jobs);
  for (const auto& [id, why] : sp.stalled) err << "warning: branch " << id << ": " << why << '\n';

  Table t;
  t.columns = {"lambda", "branch_id", "k_re", "k_im", "E_re", "E_im", "J_d_at_0"};
  for (const auto& br : sp.branches) {
    for (const auto& s : br.samples) {
      const cplx E = s.k * s.k;
      t.add_row({s.Lambda, static_cast<double>(br.branch_id), s.k.real(), s.k.imag(), E.real(), E.imag(),
                 flux_at_origin(p.with_Lambda(s.Lambda), s.k)});
    }
  }
  std::sort(t.rows.begin(), t.rows.end(), [](const auto& a, const auto& b) {
    return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
  });

  Table eps;
  eps.columns = {"lambda_star", "k_star", "kappa_bound", "residual", "branch_a", "branch_b"};
  for (const auto& e : sp.eps) {
    eps.add_row({e.Lambda_star, e.k_star, e.kappa_bound, e.residual, static_cast<double>(e.branch_pair.first),
                 static_cast<double>(e.branch_pair.second)});
  }

  const bool json = c.format == "json";
  std::string ep_path = o.ep_output;
  if (ep_path.empty() && c.output != "-") ep_path = c.output + (json ? ".eps.json" : ".eps.csv");

  Sink sink(c.output, out);
  if (ep_path.empty()) {
    if (json) {
      write_json_bundle({{"spectrum", &t}, {"exceptional_points", &eps}}, sink.stream());
    } else {
      write_csv(t, sink.stream());
      sink.stream() << '\n';
      write_csv(eps, sink.stream());
    }
    sink.close();
  } else {
    json ? write_json(t, sink.stream()) : write_csv(t, sink.stream());
    sink.close();
    Sink ep_sink(ep_path, out);
    json ? write_json(eps, ep_sink.stream()) : write_csv(eps, ep_sink.stream());
    ep_sink.close();
  }
  return sp.stalled.empty() ? kOk : kComputeError;
}

int cmd_scatter(const WellParams& p, const Common& c, const ScatterOpts& o, std::ostream& out, std::ostream& err) {
  require_sweep(o.start, o.stop, o.steps);
  const std::size_t n = static_cast<std::size_t>(o.steps);
  std::vector<std::vector<double>> rows(n);
  std::vector<std::string> problems(n);

  auto work = [&](std::size_t i) {
    const double k = o.start + (o.stop - o.start) * static_cast<double>(i) / static_cast<double>(n - 1);
    try {
      const ScatterData d = scattering_coefficients(p, k);
      rows[i] = {k, d.T, d.R_plus, d.R_minus, std::abs(d.r_plus * d.r_minus), d.unitarity_residual,
                 static_cast<double>(d.sign_used), d.singular ? 1.0 : 0.0};
    } catch (const Error& e) {
      rows[i] = {k, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
      problems[i] = e.what();
    }
  };
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, c.jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  Table t;
  t.columns = {"k", "T", "R_plus", "R_minus", "abs_r_prod", "unitarity_residual", "sign_used", "singular_flag"};
  bool clean = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!problems[i].empty()) {
      err << "warning: k = " << format_number(rows[i][0]) << ": " << problems[i] << '\n';
      clean = false;
    }
    t.add_row(std::move(rows[i]));
  }
  emit(t, c, out);
  return clean ? kOk : kComputeError;
}

int cmd_transport(const WellParams& p, const Common& c, const TransportOpts& o, bool by_value, std::ostream& out) {
  double k = o.k_value;
  if (!by_value) {
    const std::vector<double> roots = find_real_roots(p, o.k_max);
    if (o.k_index < 1 || o.k_index > static_cast<int>(roots.size())) {
      throw NoBoundState("no bound state with index " + std::to_string(o.k_index) + " below k = " +
                         format_number(o.k_max));
    }
    k = roots[static_cast<std::size_t>(o.k_index - 1)];
  }
  const BoundState s = make_bound_state(p, k);
  if (o.points < 2) throw ArgumentError("--points must be at least 2");
  const double x_max = o.x_max > 0.0 ? o.x_max : p.b() + 6.0 / s.alpha.alpha_r;
  const TransportProfile tp = transport_profile(s, uniform_grid(x_max, o.points), c.jobs);

  Table t;
  t.meta = {{"k", s.k}, {"E", s.E}, {"c1_sq", tp.c1_sq}, {"delta_point_mass", tp.delta_point_mass}};
  t.columns = {"x", "rho_d", "J_d", "Q_d", "rho_E1", "rho_E2_smooth", "J_E", "Q_E"};
  for (std::size_t i = 0; i < tp.grid.size(); ++i) {
    t.add_row({tp.grid[i], tp.rho_d[i], tp.J_d[i], tp.Q_d[i], tp.rho_E1[i], tp.rho_E2[i], tp.J_E[i], tp.Q_E[i]});
  }
  emit(t, c, out);
  return kOk;
}

int cmd_boundstates(const WellParams& p, const Common& c, double k_max, std::ostream& out) {
  Table t;
  t.columns = {"index", "k", "E", "c1_sq", "alpha_r", "alpha_i", "J_d_at_0"};
  int idx = 0;
  for (double k : find_real_roots(p, k_max)) {
    ++idx;
    const AlphaParts a = alpha_parts_real(p, k);
    double c1 = kNaN;
    double j0 = kNaN;
    try {
      const BoundState s = make_bound_state(p, k);
      c1 = s.c1_sq;
      j0 = bound_flux(s, 0.0);
    } catch (const Error&) {
    }
    t.add_row({static_cast<double>(idx), k, k * k, c1, a.alpha_r, a.alpha_i, j0});
  }
  emit(t, c, out);
  return kOk;
}

int cmd_ep(const WellParams& p, const Common& c, const EpOpts& o, std::ostream& out, std::ostream& err) {
  if (!(o.stop > 0.0) || !(o.step > 0.0)) throw ArgumentError("--lambda-stop and --step must be positive");
  const Spectrum sp = trace_spectrum(p, {0.0, o.stop}, o.step, o.k_max, c.jobs);
  for (const auto& [id, why] : sp.stalled) err << "warning: branch " << id << ": " << why << '\n';
  Table t;
  t.columns = {"lambda_star", "k_star", "kappa_bound", "residual", "branch_a", "branch_b"};
  if (o.oracle_n > 0) t.columns.push_back("oracle_lambda_star");
  for (const auto& e : sp.eps) {
    std::vector<double> row = {e.Lambda_star,
                               e.k_star,
                               e.kappa_bound,
                               e.residual,
                               static_cast<double>(e.branch_pair.first),
                               static_cast<double>(e.branch_pair.second)};
    if (o.oracle_n > 0) {
      try {
        row.push_back(oracle_complexification(p, e.k_star, e.Lambda_star, o.oracle_n));
      } catch (const Error& ex) {
        err << "warning: oracle at k* = " << format_number(e.k_star) << ": " << ex.what() << '\n';
        row.push_back(kNaN);
      }
    }
    t.add_row(std::move(row));
  }
  emit(t, c, out);
  return sp.stalled.empty() ? kOk : kComputeError;
}

int cmd_validate(const WellParams& p, const Common& c, const ValidateOpts& o, std::ostream& out) {
  ValidationOptions vo;
  vo.level = o.level == "quick" ? ValidationLevel::Quick : ValidationLevel::Full;
  vo.jobs = c.jobs;
  Sink sink(c.output, out);
  std::ostream& os = sink.stream();
  bool ok = true;
  vo.on_result = [&](const CheckResult& r) {
    os << format_result(r) << '\n';
    os.flush();
    ok = ok && r.passed;
  };
  os << "ptwell validate level=" << o.level << " jobs=" << c.jobs << '\n';
  const CheckResult user = check_parameter_set(p, o.k_max);
  vo.on_result(user);
  run_validation(vo);
  os << (ok ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << '\n';
  sink.close();
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PT-symmetric square well with a central delta: spectra, EPs, scattering, transport"};
  app.name(args.empty() ? "ptwell" : args.front());
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file (command-line flags take precedence)");

  Common c;
  app.add_option("--v0", c.v0, "Reduced real well depth")->capture_default_str();
  app.add_option("--vI,--vi", c.vI, "Reduced imaginary potential magnitude (>= 0)")->capture_default_str();
  app.add_option("--b", c.b, "Half-width of the well (> 0)")->capture_default_str();
  app.add_option("--Lambda,--lambda", c.Lambda, "Reduced delta strength (>= 0)")->capture_default_str();
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("-o,--output", c.output, "Output path ('-' for stdout)")->capture_default_str();
  app.add_option("-j,--jobs", c.jobs, "Worker threads")
      ->envname("PTWELL_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SpectrumOpts so;
  auto* spectrum = app.add_subcommand("spectrum", "Trace bound-state branches k(Lambda) and their EPs");
  spectrum->add_option("--lambda-start", so.start)->capture_default_str();
  spectrum->add_option("--lambda-stop", so.stop)->capture_default_str();
  spectrum->add_option("--steps", so.steps, "Number of nominal Lambda samples")->capture_default_str();
  spectrum->add_option("--k-max", so.k_max, "Track roots below this k at the start")->capture_default_str();
  spectrum->add_option("--ep-output", so.ep_output, "Path for the EP table");

  ScatterOpts sc;
  auto* scatter = app.add_subcommand("scatter", "Scattering coefficients and generalized unitarity over k");
  scatter->add_option("--k-start", sc.start)->capture_default_str();
  scatter->add_option("--k-stop", sc.stop)->capture_default_str();
  scatter->add_option("--steps", sc.steps)->capture_default_str();

  TransportOpts to;
  auto* transport = app.add_subcommand("transport", "Density, flux and energy profiles of one bound state");
  auto* idx_opt = transport->add_option("--k-index", to.k_index, "1-based index of the bound state")->capture_default_str();
  auto* val_opt = transport->add_option("--k-value", to.k_value, "Root k of the secular equation");
  idx_opt->excludes(val_opt);
  transport->add_option("--x-max", to.x_max, "Half-width of the sampled window (default b + 6/alpha_R)");
  transport->add_option("--points", to.points)->capture_default_str();
  transport->add_option("--k-max", to.k_max)->capture_default_str();

  double bs_kmax = 12.0;
  auto* boundstates = app.add_subcommand("boundstates", "List bound states below k_max");
  boundstates->add_option("--k-max", bs_kmax)->capture_default_str();

  EpOpts eo;
  auto* ep = app.add_subcommand("ep", "Locate exceptional points for Lambda in [0, stop]");
  ep->add_option("--lambda-stop", eo.stop)->capture_default_str();
  ep->add_option("--step", eo.step)->capture_default_str();
  ep->add_option("--k-max", eo.k_max)->capture_default_str();
  ep->add_option("--oracle-n", eo.oracle_n, "Odd grid size for the finite-difference check (0 = off)")
      ->capture_default_str();

  ValidateOpts vo;
  auto* validate = app.add_subcommand("validate", "Run the validation suite");
  validate->add_option("--level", vo.level)->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  validate->add_option("--k-max", vo.k_max, "Range for the parameter-set checks")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    const WellParams p(c.v0, c.vI, c.b, c.Lambda);
    if (*spectrum) return cmd_spectrum(p, c, so, out, err);
    if (*scatter) return cmd_scatter(p, c, sc, out, err);
    if (*transport) return cmd_transport(p, c, to, val_opt->count() > 0, out);
    if (*boundstates) return cmd_boundstates(p, c, bs_kmax, out);
    if (*ep) return cmd_ep(p, c, eo, out, err);
    if (*validate) return cmd_validate(p, c, vo, out);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputeError;
  }
  return kBadArguments;
}

}  // namespace ptwell::cli
