#include <doctest.h>

#include "cds/experiments.hpp"
#include "oracles.hpp"

using namespace cds;

namespace {

double max_value(const SweepResult& r) {
  return *std::max_element(r.values().begin(), r.values().end());
}

}  // namespace

TEST_CASE("time grid validation and spacing") {
  CHECK_THROWS_AS(TimeGrid(0.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(1.0, 0.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, std::numeric_limits<double>::infinity(), 5),
                  std::invalid_argument);

  const TimeGrid grid(0.0, 20.0, 2001);
  CHECK(grid.at(0) == 0.0);
  CHECK(grid.at(2000) == doctest::Approx(20.0));
  const double step = grid.at(1) - grid.at(0);
  for (int i = 1; i < 100; ++i)
    CHECK(grid.at(i) - grid.at(i - 1) == doctest::Approx(step).epsilon(1e-12));
}

TEST_CASE("doubling the sample count reproduces the coarse times bit for bit") {
  const TimeGrid coarse(0.0, 20.0, 2001);
  const TimeGrid fine(0.0, 20.0, 4001);
  for (int i = 0; i < coarse.samples; ++i) CHECK(fine.at(2 * i) == coarse.at(i));

  const TimeGrid coarse2(1.5, 7.25, 101);
  const TimeGrid fine2(1.5, 7.25, 201);
  for (int i = 0; i < coarse2.samples; ++i) CHECK(fine2.at(2 * i) == coarse2.at(i));
}

TEST_CASE("sweep result validation") {
  SweepMeta meta;
  CHECK_THROWS_AS(SweepResult({{"t", {0.0, 1.0}}}, {0.5}, meta), std::invalid_argument);
  CHECK_THROWS_AS(SweepResult({{"t", {0.0, 1.0}}}, {0.5, 1.5}, meta),
                  std::invalid_argument);
  CHECK_THROWS_AS(SweepResult({{"t", {}}}, {}, meta), std::invalid_argument);
  CHECK_NOTHROW(SweepResult({{"t", {0.0, 1.0}}}, {0.0, 1.0}, meta));
}

TEST_CASE("time sweep of the decoupled limits stays at zero") {
  const TimeGrid grid(0.0, 20.0, 401);
  SUBCASE("gamma = 0: the outer atom never couples") {
    const auto result = sweep_time(SystemParams<double>(1.0, 5.0, 0.0, 3), grid);
    CHECK(result.size() == 401);
    CHECK(max_value(result) <= 1e-10);
  }
  SUBCASE("g = 0: |g,g,n0> is stationary") {
    const auto result = sweep_time(SystemParams<double>(1.0, 0.0, 0.5, 3), grid);
    CHECK(max_value(result) <= 1e-10);
  }
}

TEST_CASE("time sweep is deterministic and thread-count independent") {
  const SystemParams<double> params(1.0, 5.0, 0.5, 3);
  const TimeGrid grid(0.0, 20.0, 501);
  const auto a = sweep_time(params, grid, 1);
  const auto b = sweep_time(params, grid, 1);
  const auto c = sweep_time(params, grid, 4);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.values()[i] == b.values()[i]);
    CHECK(a.values()[i] == c.values()[i]);
  }
  CHECK(a.at(0) == 0.0);  // product start has no entanglement
  for (double v : a.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(a.meta().version == std::string(kVersion));
}

TEST_CASE("doubling the sweep sample count reproduces the coarse values bit for bit") {
  const SystemParams<double> params(1.0, 5.0, 0.5, 3);
  const auto coarse = sweep_time(params, TimeGrid(0.0, 20.0, 101));
  const auto fine = sweep_time(params, TimeGrid(0.0, 20.0, 201));
  for (std::size_t i = 0; i < coarse.size(); ++i)
    CHECK(fine.values()[2 * i] == coarse.values()[i]);
}

TEST_CASE("strong dipole coupling trace peaks above the weak one") {
  const TimeGrid grid(0.0, 20.0, 2001);
  const auto strong = sweep_time(SystemParams<double>(1.0, 5.0, 0.5, 3), grid);
  const auto weak = sweep_time(SystemParams<double>(1.0, 5.0, 0.1, 3), grid);
  const auto peaks_strong = find_peaks(strong);
  const auto peaks_weak = find_peaks(weak);
  REQUIRE(peaks_strong.size() > 3);  // oscillating trace grouped in packets
  REQUIRE(!peaks_weak.empty());
  const auto by_height = [](const Peak& a, const Peak& b) { return a.height < b.height; };
  const double top_strong =
      std::max_element(peaks_strong.begin(), peaks_strong.end(), by_height)->height;
  const double top_weak =
      std::max_element(peaks_weak.begin(), peaks_weak.end(), by_height)->height;
  CHECK(top_strong > 0.3);
  CHECK(top_strong > top_weak);
}

TEST_CASE("concurrence traces are omega-independent") {
  const TimeGrid grid(0.0, 20.0, 257);
  const auto w0 = sweep_time(SystemParams<double>(0.0, 5.0, 0.5, 3), grid);
  const auto w1 = sweep_time(SystemParams<double>(1.0, 5.0, 0.5, 3), grid);
  for (std::size_t i = 0; i < w0.size(); ++i)
    CHECK(std::abs(w0.values()[i] - w1.values()[i]) <= 1e-10);
}

TEST_CASE("grid sweep layout and limits") {
  SUBCASE("row-major over (n0, gamma)") {
    const std::vector<double> gammas = {0.1, 0.2, 0.3};
    const auto result = sweep_grid(2, 3, gammas, 5.0, 1.0, 4.0);
    REQUIRE(result.size() == 6);
    CHECK(result.axes()[0].name == "n0");
    CHECK(result.axes()[0].integral);
    CHECK(result.axes()[1].name == "gamma");
    const SystemParams<double> point(1.0, 5.0, 0.3, 3);
    const double expected =
        concurrence(reduce_to_atoms(propagate(build_hamiltonian(point),
                                              initial_state(point), 4.0)))
            .value;
    CHECK(result.at(1, 2) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("vanishing gamma column is separable") {
    const auto result = sweep_grid(0, 10, {0.0, 0.4}, 1.0, 1.0, 4.0);
    for (std::size_t i = 0; i <= 10; ++i) CHECK(result.at(i, 0) <= 1e-10);
  }
  SUBCASE("1x1 grid equals the matching time-sweep sample") {
    const auto grid_point = sweep_grid(3, 3, {0.5}, 5.0, 1.0, 4.0);
    const auto trace =
        sweep_time(SystemParams<double>(1.0, 5.0, 0.5, 3), TimeGrid(4.0, 5.0, 2));
    CHECK(grid_point.at(0) == doctest::Approx(trace.at(0)).epsilon(1e-15));
  }
  SUBCASE("bad axes are rejected") {
    CHECK_THROWS_AS(sweep_grid(3, 2, {0.1}, 1.0, 1.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(sweep_grid(-1, 2, {0.1}, 1.0, 1.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(sweep_grid(0, 2, {}, 1.0, 1.0, 4.0), std::invalid_argument);
  }
}

TEST_CASE("stacked time traces share the grid and order") {
  const TimeGrid grid(0.0, 5.0, 51);
  const std::vector<SystemParams<double>> variants = {
      SystemParams<double>(1.0, 5.0, 0.5, 3), SystemParams<double>(1.0, 5.0, 0.1, 3)};
  const auto family = sweep_time_family("gamma", {0.5, 0.1}, variants, grid);
  REQUIRE(family.size() == 2 * 51);
  const auto solo0 = sweep_time(variants[0], grid);
  const auto solo1 = sweep_time(variants[1], grid);
  for (std::size_t i = 0; i < 51; ++i) {
    CHECK(family.at(0, i) == solo0.values()[i]);
    CHECK(family.at(1, i) == solo1.values()[i]);
  }
  CHECK_THROWS_AS(sweep_time_family("gamma", {0.5}, variants, grid),
                  std::invalid_argument);
}

TEST_CASE("peak detection") {
  const std::vector<double> x3 = {0.0, 1.0, 2.0};
  SUBCASE("single spike") {
    const std::vector<double> y = {0.0, 1.0, 0.0};
    const auto peaks = find_peaks(x3, y);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == 1.0);
    CHECK(peaks[0].height == 1.0);
    CHECK(peaks[0].width > 0.0);
  }
  SUBCASE("monotone series has no peaks") {
    CHECK(find_peaks(x3, std::vector<double>{0.0, 0.5, 1.0}).empty());
    CHECK(find_peaks(x3, std::vector<double>{1.0, 0.5, 0.0}).empty());
  }
  SUBCASE("plateau reports its midpoint") {
    const std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y = {0.0, 1.0, 1.0, 1.0, 0.0};
    const auto peaks = find_peaks(x, y);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == 2.0);
    CHECK(peaks[0].height == 1.0);
  }
  SUBCASE("triangle width interpolates at half height") {
    const std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y = {0.0, 0.5, 1.0, 0.5, 0.0};
    const auto peaks = find_peaks(x, y);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].width == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("width clamps at the series ends when the trace stays high") {
    const std::vector<double> y = {0.8, 1.0, 0.8};
    const auto peaks = find_peaks(x3, y);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].width == doctest::Approx(2.0));
  }
  SUBCASE("height floor suppresses ripple") {
    const std::vector<double> y = {0.0, 5e-4, 0.0};
    CHECK(find_peaks(x3, y).empty());
    CHECK(find_peaks(x3, y, 1e-5).size() == 1);
  }
  SUBCASE("too few samples") {
    CHECK_THROWS_AS(find_peaks(std::vector<double>{0.0, 1.0},
                               std::vector<double>{0.0, 1.0}),
                    std::invalid_argument);
  }
  SUBCASE("sweep overload needs exactly one non-trivial axis") {
    SweepMeta meta;
    const SweepResult ok({{"gamma", {0.4}}, {"n0", {0, 1, 2, 3}, true}},
                         {0.0, 0.7, 0.1, 0.4}, meta);
    const auto peaks = find_peaks(ok);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == 1.0);
    const SweepResult two_axes({{"a", {0.0, 1.0}}, {"b", {0.0, 1.0, 2.0}}},
                               std::vector<double>(6, 0.5), meta);
    CHECK_THROWS_AS(find_peaks(two_axes), std::invalid_argument);
  }
}

TEST_CASE("parallel map preserves order and propagates errors") {
  std::vector<std::size_t> squares(64);
  detail::parallel_for(64, 3, [&](std::size_t i) { squares[i] = i * i; });
  for (std::size_t i = 0; i < 64; ++i) CHECK(squares[i] == i * i);
  CHECK_THROWS_AS(detail::parallel_for(
                      8, 4,
                      [](std::size_t i) {
                        if (i == 5) throw std::runtime_error("boom");
                      }),
                  std::runtime_error);
}
