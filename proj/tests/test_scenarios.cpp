#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qheat/dynamics.hpp"
#include "qheat/scenarios.hpp"

using namespace qheat;

TEST_CASE("build_two_qubit_system") {
  const BipartiteSystem sys = build_two_qubit_system(TwoQubitParams{});
  CHECK(sys.dim() == 4);
  const ComplexMatrix& h = sys.h_total.matrix();
  CHECK(h(0, 0) == Complex(-100.0, 0.0));
  CHECK(h(3, 3) == Complex(100.0, 0.0));
  CHECK(h(1, 2) == Complex(5.0, 0.0));
  CHECK(sys.coupling_ratio == doctest::Approx(0.1).epsilon(1e-14));

  TwoQubitParams bad;
  bad.t_a = 0.0;
  CHECK_THROWS_AS(build_two_qubit_system(bad), std::invalid_argument);
  bad = TwoQubitParams{};
  bad.omega = -1.0;
  CHECK_THROWS_AS(build_two_qubit_system(bad), std::invalid_argument);
  bad = TwoQubitParams{};
  bad.gamma = -0.5;
  CHECK_THROWS_AS(build_two_qubit_system(bad), std::invalid_argument);
}

TEST_CASE("initial-state families") {
  const DensityMatrix prod = product_scenario(TwoQubitParams{});
  CHECK(prod.matrix()(0, 0).real() ==
        doctest::Approx(0.9986836435696457).epsilon(1e-14));
  CHECK(prod.matrix()(1, 1).real() ==
        doctest::Approx(4.534016727300437e-05).epsilon(1e-14));
  CHECK(prod.matrix()(2, 2).real() ==
        doctest::Approx(0.001270958561651928).epsilon(1e-14));
  CHECK(prod.matrix()(3, 3).real() ==
        doctest::Approx(5.77014294300263e-08).epsilon(1e-12));

  const DensityMatrix mid = zero_cc_scenario(TwoQubitParams{}, 0.5);
  CHECK(mid.matrix()(0, 0).real() ==
        doctest::Approx(0.9987062848025674).epsilon(1e-14));
  CHECK(mid.matrix()(3, 3).real() ==
        doctest::Approx(2.2698934351217197e-05).epsilon(1e-14));

  // Same marginals across all three families.
  for (const DensityMatrix& rho :
       {prod, mid, zero_cc_scenario(TwoQubitParams{}, 0.0)}) {
    const ComplexMatrix ma = partial_trace(rho.matrix(), 2, 2, Subsystem::A);
    CHECK(ma(0, 0).real() == doctest::Approx(0.9987289837369187).epsilon(1e-13));
    const ComplexMatrix mb = partial_trace(rho.matrix(), 2, 2, Subsystem::B);
    CHECK(mb(1, 1).real() ==
          doctest::Approx(4.5397868702434395e-05).epsilon(1e-13));
  }
}

TEST_CASE("heat flows from the hot qubit to the cold one") {
  const BipartiteSystem sys = build_two_qubit_system(TwoQubitParams{});
  EvolutionConfig cfg;
  const std::vector<TrajectoryRecord> traj =
      run_trajectory(sys, product_scenario(TwoQubitParams{}), cfg);

  // A sits at T = 15, B at T = 10: B can only gain along this trajectory
  // (the populations mix as sin^2, never overshooting the first swap).
  for (const TrajectoryRecord& rec : traj) CHECK(rec.de_cum >= -1e-12);
  CHECK(traj.back().de_cum > 1e-3);
  CHECK(traj.back().e_a < traj.front().e_a);
}

TEST_CASE("compare_scenarios grid") {
  const std::vector<ScenarioComparisonRow> rows = compare_scenarios(TwoQubitParams{});
  REQUIRE(rows.size() == 501);

  // t = 0: the product ratio is exactly 1 (f2 = g2 there), p = 0.5 gives the
  // pinned second-order value, and p = 0 is divergent with the value slot 0.
  const ScenarioComparisonRow& first = rows.front();
  CHECK(first.t == 0.0);
  CHECK(std::abs(first.ratio_product - 1.0) < 1e-9);
  CHECK(first.ratio_p05 == doctest::Approx(0.8318290105124632).epsilon(1e-6));
  CHECK(first.status_p0 == RatioStatus::kDivergentToZero);
  CHECK(first.ratio_p0 == 0.0);

  // Away from t = 0 all three are finite, first-order driven.
  const ScenarioComparisonRow& early = rows[1];
  CHECK(early.ratio_product == doctest::Approx(1.000000239).epsilon(1e-6));
  CHECK(early.ratio_p05 == doctest::Approx(0.831939758).epsilon(1e-6));
  CHECK(early.ratio_p0 == doctest::Approx(0.31449981924504555).epsilon(1e-6));
  CHECK(early.status_p0 == RatioStatus::kOk);

  const ScenarioComparisonRow& quarter = rows[250];
  CHECK(quarter.t == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(quarter.ratio_product == doctest::Approx(1.0003567844020844).epsilon(1e-9));
  CHECK(quarter.ratio_p05 == doctest::Approx(0.939158700).epsilon(1e-6));
  CHECK(quarter.ratio_p0 == doctest::Approx(0.8750350065457165).epsilon(1e-9));

  const ScenarioComparisonRow& last = rows.back();
  CHECK(last.t == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(last.ratio_product == doctest::Approx(1.000550969).epsilon(1e-6));
  CHECK(last.ratio_p05 == doctest::Approx(0.9643935760069349).epsilon(1e-9));
  CHECK(last.ratio_p0 == doctest::Approx(0.928072689).epsilon(1e-6));

  // The product column hugs 1 everywhere; the correlated families start far
  // below and climb toward it as coherence takes over.
  for (const ScenarioComparisonRow& row : rows) {
    CHECK(std::abs(row.ratio_product - 1.0) < 2e-3);
    if (row.t > 0.0) {
      CHECK(row.ratio_p05 > 0.8);
      CHECK(row.ratio_p05 < 1.0);
      CHECK(row.ratio_p0 < row.ratio_p05);
    }
  }
}

TEST_CASE("compare_scenarios respects custom grids") {
  const std::vector<ScenarioComparisonRow> rows =
      compare_scenarios(TwoQubitParams{}, 0.01, 5e-3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].t == doctest::Approx(5e-3).epsilon(1e-12));
  CHECK(rows[2].t == doctest::Approx(1e-2).epsilon(1e-12));
}
