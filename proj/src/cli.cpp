#include "cds/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include <CLI11.hpp>

#include "cds/io.hpp"

namespace cds::cli {

namespace {

int threads_from_env() {
  const char* raw = std::getenv("CDS_THREADS");
  if (!raw) return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 0) return 0;
  return static_cast<int>(v);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string meta_summary(const SweepMeta& meta) {
  std::string s;
  for (const auto& [key, value] : meta.params) {
    if (!s.empty()) s += ' ';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s=%g", key.c_str(), value);
    s += buf;
  }
  return s;
}

void emit_sweep(const SweepResult& result, const std::filesystem::path& csv_path,
                const RunConfig& config, std::ostream& out) {
  write_csv(result, csv_path, config.precision);
  out << "wrote " << csv_path.string() << '\n';
  if (config.emit_svg) {
    std::filesystem::path svg_path = csv_path;
    svg_path.replace_extension(".svg");
    write_svg(result, svg_path, "concurrence (" + meta_summary(result.meta()) + ")");
    out << "wrote " << svg_path.string() << '\n';
  }
}

int run_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const SystemParams<double> params(config.omega, config.g, config.gamma, config.n0);
  const Spectrum<double> numeric = numeric_eig(build_hamiltonian(params));
  const int p = config.precision;
  if (config.n0 < 2) {
    out << "sector dimension " << numeric.dim()
        << "; closed-form spectrum needs n0 >= 2, numeric eigenvalues only\n";
    for (int i = 0; i < numeric.dim(); ++i)
      out << "E" << i + 1 << " " << format_fixed(numeric.eigenvalues(i), p) << '\n';
    return 0;
  }
  const AnalyticSpectrum<double> analytic = analytic_spectrum(params);
  out << "A=" << format_fixed(analytic.aux.A, p) << " B=" << format_fixed(analytic.aux.B, p)
      << " C=" << format_fixed(analytic.aux.C, p) << " D=" << format_fixed(analytic.aux.D, p)
      << '\n';
  out << "index,analytic,numeric,abs_diff\n";
  double max_diff = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double a = analytic.eigenvalues[static_cast<std::size_t>(i)];
    const double b = numeric.eigenvalues(i);
    max_diff = std::max(max_diff, std::abs(a - b));
    out << i + 1 << ',' << format_fixed(a, p) << ',' << format_fixed(b, p) << ','
        << sci(std::abs(a - b)) << '\n';
  }
  out << "max_abs_diff," << sci(max_diff) << '\n';
  if (max_diff > 1e-10) {
    err << "spectrum cross-check failed: max |analytic - numeric| = " << sci(max_diff)
        << " exceeds 1e-10\n";
    return 1;
  }
  return 0;
}

int run_evolve(const RunConfig& config, std::ostream& out) {
  const SystemParams<double> params(config.omega, config.g, config.gamma, config.n0);
  const TimeGrid grid(config.t_start, config.t_end, config.samples);
  const Spectrum<double> spectrum = numeric_eig(build_hamiltonian(params));
  const StateVector<double> psi0 = initial_state(params);

  std::vector<std::string> header = {"t"};
  for (const BasisKet& ket : psi0.basis().kets)
    header.push_back("p_" + ket.short_label());
  header.push_back("concurrence");

  std::vector<double> times = grid.times();
  std::vector<double> trace(times.size());
  std::vector<std::vector<double>> rows(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const StateVector<double> psi = propagate(spectrum, psi0, times[i]);
    std::vector<double> row = {times[i]};
    for (int k = 0; k < psi.dim(); ++k) row.push_back(std::norm(psi.amplitudes()(k)));
    trace[i] = concurrence(reduce_to_atoms(psi)).value;
    row.push_back(trace[i]);
    rows[i] = std::move(row);
  }
  const std::filesystem::path csv_path = config.out / "evolve.csv";
  write_table_csv(csv_path, header, rows, config.precision);
  out << "wrote " << csv_path.string() << '\n';
  if (config.emit_svg) {
    SweepMeta meta;
    meta.params = {{"omega", params.omega},
                   {"g", params.g},
                   {"gamma", params.gamma},
                   {"n0", static_cast<double>(params.n0)}};
    const SweepResult result({{"t", std::move(times)}}, std::move(trace), std::move(meta));
    const std::filesystem::path svg_path = config.out / "evolve.svg";
    write_svg(result, svg_path, "concurrence (" + meta_summary(result.meta()) + ")");
    out << "wrote " << svg_path.string() << '\n';
  }
  return 0;
}

int run_figures(const RunConfig& config, std::ostream& out) {
  const int threads = config.threads > 0 ? config.threads : 1;
  const TimeGrid grid(0.0, 20.0, 2001);
  // Sector label n = 1 in the two-trace scenarios, i.e. n0 = 3.
  const SweepResult fig2 = sweep_time_family(
      "gamma", {0.5, 0.1},
      {SystemParams<double>(1.0, 5.0, 0.5, 3), SystemParams<double>(1.0, 5.0, 0.1, 3)},
      grid, threads);
  const SweepResult fig3 = sweep_time_family(
      "g", {1.0, 0.5},
      {SystemParams<double>(1.0, 1.0, 0.5, 3), SystemParams<double>(1.0, 0.5, 0.5, 3)},
      grid, threads);
  const SweepResult fig4 = sweep_time_family(
      "n0", {7.0, 8.0},
      {SystemParams<double>(1.0, 5.0, 0.5, 7), SystemParams<double>(1.0, 5.0, 0.5, 8)},
      grid, threads, /*axis_integral=*/true);
  const SweepResult fig5 =
      sweep_grid(0, 30, linspace(0.0, 1.0, 101), config.fig5_g, 1.0, 4.0, threads);

  emit_sweep(fig2, config.out / "fig2.csv", config, out);
  emit_sweep(fig3, config.out / "fig3.csv", config, out);
  emit_sweep(fig4, config.out / "fig4.csv", config, out);
  emit_sweep(fig5, config.out / "fig5.csv", config, out);
  return 0;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig config;
  config.threads = threads_from_env();

  CLI::App app{"cds - two dipole-coupled atoms in a single-mode cavity:\n"
               "exact spectra, unitary dynamics and two-atom concurrence"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file (# comments); flags override");

  app.add_option("--omega", config.omega, "mode / transition frequency")
      ->capture_default_str();
  app.add_option("--g", config.g, "atom-field coupling rate")->capture_default_str();
  app.add_option("--gamma", config.gamma, "dipole-dipole coupling rate")
      ->capture_default_str();
  auto* n0_opt = app.add_option("--n0", config.n0, "initial photon number");
  app.add_option("--t-start", config.t_start, "first sample time")->capture_default_str();
  app.add_option("--t-end", config.t_end, "last sample time")->capture_default_str();
  app.add_option("--samples", config.samples, "time samples")->capture_default_str();
  app.add_option("--gamma-min", config.gamma_min, "first gamma of the grid sweep")
      ->capture_default_str();
  app.add_option("--gamma-max", config.gamma_max, "last gamma of the grid sweep")
      ->capture_default_str();
  app.add_option("--gamma-steps", config.gamma_steps, "gamma grid points")
      ->capture_default_str();
  app.add_option("--n0-min", config.n0_min, "first n0 of the grid sweep")
      ->capture_default_str();
  app.add_option("--n0-max", config.n0_max, "last n0 of the grid sweep")
      ->capture_default_str();
  app.add_option("--t-fixed", config.t_fixed, "readout time of the grid sweep")
      ->capture_default_str();
  app.add_option("--fig5-g", config.fig5_g, "atom-field coupling used by the fig5 scenario")
      ->capture_default_str();
  app.add_option("--out", config.out, "output directory")->capture_default_str();
  app.add_flag("--svg", config.emit_svg, "also write SVG charts");
  app.add_option("--precision", config.precision, "decimal digits in output files")
      ->capture_default_str();

  CLI::App* cmd_spectrum =
      app.add_subcommand("spectrum", "closed-form vs numeric eigenvalues");
  CLI::App* cmd_evolve =
      app.add_subcommand("evolve", "state populations and concurrence over time");
  CLI::App* cmd_sweep_time =
      app.add_subcommand("sweep-time", "concurrence over a time grid");
  CLI::App* cmd_sweep_grid =
      app.add_subcommand("sweep-grid", "concurrence at fixed time over (n0, gamma)");
  CLI::App* cmd_figures =
      app.add_subcommand("figures", "run the four built-in scenarios");
  for (CLI::App* sub :
       {cmd_spectrum, cmd_evolve, cmd_sweep_time, cmd_sweep_grid, cmd_figures})
    sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (cmd_spectrum->parsed()) config.command = Command::kSpectrum;
  else if (cmd_evolve->parsed()) config.command = Command::kEvolve;
  else if (cmd_sweep_time->parsed()) config.command = Command::kSweepTime;
  else if (cmd_sweep_grid->parsed()) config.command = Command::kSweepGrid;
  else if (cmd_figures->parsed()) config.command = Command::kFigures;
  else throw UsageError("missing command (spectrum, evolve, sweep-time, sweep-grid, figures)");

  const bool needs_n0 = config.command == Command::kSpectrum ||
                        config.command == Command::kEvolve ||
                        config.command == Command::kSweepTime;
  if (needs_n0 && n0_opt->count() == 0) throw UsageError("missing required --n0");

  if (config.precision < 6 || config.precision > 17)
    throw UsageError("--precision must be in [6, 17]");
  if (config.samples < 2) throw UsageError("--samples must be at least 2");
  if (config.gamma_steps < 1) throw UsageError("--gamma-steps must be at least 1");
  if (config.n0 < 0) throw UsageError("--n0 must be non-negative");
  if (config.n0_min < 0 || config.n0_max < config.n0_min)
    throw UsageError("--n0-min/--n0-max must satisfy 0 <= min <= max");
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const int threads = config.threads > 0 ? config.threads : 1;
  if (config.command != Command::kSpectrum) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec && !std::filesystem::is_directory(config.out))
      throw std::runtime_error("cannot create output directory " + config.out.string());
  }
  switch (config.command) {
    case Command::kSpectrum:
      return run_spectrum(config, out, err);
    case Command::kEvolve:
      return run_evolve(config, out);
    case Command::kSweepTime: {
      const SystemParams<double> params(config.omega, config.g, config.gamma, config.n0);
      const TimeGrid grid(config.t_start, config.t_end, config.samples);
      emit_sweep(sweep_time(params, grid, threads), config.out / "sweep_time.csv",
                 config, out);
      return 0;
    }
    case Command::kSweepGrid: {
      const SweepResult result =
          sweep_grid(config.n0_min, config.n0_max,
                     linspace(config.gamma_min, config.gamma_max, config.gamma_steps),
                     config.g, config.omega, config.t_fixed, threads);
      emit_sweep(result, config.out / "sweep_grid.csv", config, out);
      return 0;
    }
    case Command::kFigures:
      return run_figures(config, out);
  }
  return 1;
}

}  // namespace cds::cli
