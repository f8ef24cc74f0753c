#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cds/entanglement.hpp"
#include "cds/version.hpp"

namespace cds {

/// Uniform sampling times t_i = t_start + i * (t_end - t_start) / (samples - 1).
struct TimeGrid {
  double t_start;
  double t_end;
  int samples;

  TimeGrid(double t_start_, double t_end_, int samples_)
      : t_start(t_start_), t_end(t_end_), samples(samples_) {
    if (!(std::isfinite(t_start) && std::isfinite(t_end)))
      throw std::invalid_argument("time grid bounds must be finite");
    if (!(t_end > t_start))
      throw std::invalid_argument("time grid requires t_end > t_start");
    if (samples < 2) throw std::invalid_argument("time grid requires at least 2 samples");
  }

  /// Evaluated so that a grid with 2*(samples-1)+1 points reproduces the
  /// coarse points bit-for-bit at shared indices.
  double at(int i) const {
    return t_start + (static_cast<double>(i) * (t_end - t_start)) /
                         static_cast<double>(samples - 1);
  }

  std::vector<double> times() const {
    std::vector<double> out(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = at(i);
    return out;
  }
};

struct SweepAxis {
  std::string name;
  std::vector<double> values;
  bool integral = false;  ///< serialize values as integers
};

struct SweepMeta {
  std::vector<std::pair<std::string, double>> params;  ///< fixed inputs, in order
  std::string version = kVersion;
};

/// Concurrence samples over a named parameter grid, row-major in axis order.
class SweepResult {
 public:
  SweepResult(std::vector<SweepAxis> axes, std::vector<double> values, SweepMeta meta)
      : axes_(std::move(axes)), values_(std::move(values)), meta_(std::move(meta)) {
    std::size_t expected = 1;
    for (const SweepAxis& axis : axes_) {
      if (axis.values.empty()) throw std::invalid_argument("sweep axis must be non-empty");
      expected *= axis.values.size();
    }
    if (axes_.empty() || values_.size() != expected)
      throw std::invalid_argument("sweep values do not match axis grid size");
    for (double v : values_)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("concurrence samples must lie in [0, 1]");
  }

  const std::vector<SweepAxis>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  const SweepMeta& meta() const { return meta_; }
  std::size_t size() const { return values_.size(); }

  double at(std::size_t i) const { return values_.at(i); }
  /// Row-major lookup for two-axis sweeps.
  double at(std::size_t i, std::size_t j) const {
    return values_.at(i * axes_.at(1).values.size() + j);
  }

 private:
  std::vector<SweepAxis> axes_;
  std::vector<double> values_;
  SweepMeta meta_;
};

namespace detail {

/// Deterministic data-parallel map: results land by index, so the output is
/// identical for any thread count. First worker exception is rethrown.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads < 1) threads = 1;
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count == 0 ? 1 : count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + nthreads - 1) / nthreads;
  for (std::size_t w = 0; w < nthreads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline double concurrence_at(const Spectrum<double>& spectrum,
                             const StateVector<double>& psi0, double t) {
  return concurrence(reduce_to_atoms(propagate(spectrum, psi0, t))).value;
}

}  // namespace detail

inline std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("linspace requires at least 1 point");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] =
        lo + (static_cast<double>(i) * (hi - lo)) / static_cast<double>(count - 1);
  return out;
}

/// Concurrence of the evolved |g,g,n0> state at every grid time.
inline SweepResult sweep_time(const SystemParams<double>& params,
                              const TimeGrid& grid, int threads = 1) {
  const Spectrum<double> spectrum = numeric_eig(build_hamiltonian(params));
  const StateVector<double> psi0 = initial_state(params);
  std::vector<double> times = grid.times();
  std::vector<double> values(times.size());
  detail::parallel_for(times.size(), threads, [&](std::size_t i) {
    try {
      values[i] = detail::concurrence_at(spectrum, psi0, times[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep failed at t=" + std::to_string(times[i]) +
                               ": " + e.what());
    }
  });
  SweepMeta meta;
  meta.params = {{"omega", params.omega},
                 {"g", params.g},
                 {"gamma", params.gamma},
                 {"n0", static_cast<double>(params.n0)}};
  return SweepResult({{"t", std::move(times)}}, std::move(values), std::move(meta));
}

/// Stacked time traces: one per parameter variant, sharing a grid. The
/// leading axis carries the varied values, e.g. ("gamma", {0.5, 0.1}).
inline SweepResult sweep_time_family(const std::string& axis_name,
                                     const std::vector<double>& axis_values,
                                     const std::vector<SystemParams<double>>& variants,
                                     const TimeGrid& grid, int threads = 1,
                                     bool axis_integral = false) {
  if (axis_values.size() != variants.size() || variants.empty())
    throw std::invalid_argument("one axis value per parameter variant required");
  std::vector<double> times = grid.times();
  std::vector<double> values(axis_values.size() * times.size());
  std::vector<Spectrum<double>> spectra;
  std::vector<StateVector<double>> starts;
  for (const auto& params : variants) {
    spectra.push_back(numeric_eig(build_hamiltonian(params)));
    starts.push_back(initial_state(params));
  }
  detail::parallel_for(values.size(), threads, [&](std::size_t k) {
    const std::size_t v = k / times.size();
    const std::size_t i = k % times.size();
    values[k] = detail::concurrence_at(spectra[v], starts[v], times[i]);
  });
  SweepMeta meta;
  const std::vector<std::pair<std::string, double>> shared = {
      {"omega", variants[0].omega},
      {"g", variants[0].g},
      {"gamma", variants[0].gamma},
      {"n0", static_cast<double>(variants[0].n0)}};
  for (const auto& kv : shared)
    if (kv.first != axis_name) meta.params.push_back(kv);
  return SweepResult(
      {{axis_name, axis_values, axis_integral}, {"t", std::move(times)}},
      std::move(values), std::move(meta));
}

/// Concurrence at one fixed time over an (n0, gamma) grid, row-major with n0
/// as the slow axis.
inline SweepResult sweep_grid(int n0_min, int n0_max,
                              const std::vector<double>& gamma_values, double g,
                              double omega, double t_fixed, int threads = 1) {
  if (n0_min < 0 || n0_max < n0_min)
    throw std::invalid_argument("n0 range must satisfy 0 <= n0_min <= n0_max");
  if (gamma_values.empty()) throw std::invalid_argument("gamma axis must be non-empty");
  if (!std::isfinite(t_fixed)) throw std::invalid_argument("time must be finite");
  std::vector<double> n0_values;
  for (int n0 = n0_min; n0 <= n0_max; ++n0) n0_values.push_back(static_cast<double>(n0));
  std::vector<double> values(n0_values.size() * gamma_values.size());
  detail::parallel_for(values.size(), threads, [&](std::size_t k) {
    const std::size_t i = k / gamma_values.size();
    const std::size_t j = k % gamma_values.size();
    const SystemParams<double> params(omega, g, gamma_values[j],
                                      n0_min + static_cast<int>(i));
    try {
      values[k] = detail::concurrence_at(numeric_eig(build_hamiltonian(params)),
                                         initial_state(params), t_fixed);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep failed at n0=" + std::to_string(params.n0) +
                               " gamma=" + std::to_string(params.gamma) + ": " +
                               e.what());
    }
  });
  SweepMeta meta;
  meta.params = {{"omega", omega}, {"g", g}, {"t", t_fixed}};
  return SweepResult({{"n0", std::move(n0_values), true}, {"gamma", gamma_values}},
                     std::move(values), std::move(meta));
}

/// Strict local maximum (or plateau midpoint) of a sampled series.
struct Peak {
  double position;  ///< axis coordinate of the maximum
  double height;
  double width;     ///< full width at half of the local height
};

/// Local maxima above `height_floor`, widths by linear interpolation at half
/// height (clamped to the series ends when the trace never drops that far).
inline std::vector<Peak> find_peaks(std::span<const double> x,
                                    std::span<const double> y,
                                    double height_floor = 1e-3) {
  if (x.size() != y.size()) throw std::invalid_argument("x/y size mismatch");
  const std::size_t n = y.size();
  if (n < 3) throw std::invalid_argument("peak detection needs at least 3 samples");

  const auto half_crossing_left = [&](std::size_t i, double half) {
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] <= half)
        return x[k] + (half - y[k]) * (x[k + 1] - x[k]) / (y[k + 1] - y[k]);
    }
    return x[0];
  };
  const auto half_crossing_right = [&](std::size_t j, double half) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (y[k] <= half)
        return x[k - 1] + (y[k - 1] - half) * (x[k] - x[k - 1]) / (y[k - 1] - y[k]);
    }
    return x[n - 1];
  };

  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    std::size_t j = i;  // plateau end
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n || !(y[j + 1] < y[i])) continue;
    const double height = y[i];
    if (height > height_floor) {
      const double half = height / 2.0;
      peaks.push_back({(x[i] + x[j]) / 2.0, height,
                       half_crossing_right(j, half) - half_crossing_left(i, half)});
    }
    i = j;
  }
  return peaks;
}

/// find_peaks over a sweep with exactly one non-trivial axis.
inline std::vector<Peak> find_peaks(const SweepResult& series,
                                    double height_floor = 1e-3) {
  const SweepAxis* axis = nullptr;
  for (const SweepAxis& a : series.axes()) {
    if (a.values.size() > 1) {
      if (axis) throw std::invalid_argument("series must be one-dimensional");
      axis = &a;
    }
  }
  if (!axis) throw std::invalid_argument("series must be one-dimensional");
  return find_peaks(axis->values, series.values(), height_floor);
}

}  // namespace cds
