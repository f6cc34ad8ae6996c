#include "erasim/sweep.hpp"

#include "doctest.h"
#include "erasim/error.hpp"

using namespace erasim;

TEST_CASE("budget sweep reproduces the exact worst-case transmissions") {
  Protocol pi = Protocol::string_exchange(100);
  Bits x(50, '1'), y(50, '0');
  auto rows = sweep_budget(SchemeId::basic4, pi, x, y, 10);
  REQUIRE(rows.size() == 11);
  for (int64_t t = 0; t <= 10; ++t) {
    CHECK(rows[static_cast<size_t>(t)].transmissions == 100 + 2 * t);
    CHECK(rows[static_cast<size_t>(t)].erasures_used == t);
  }
}

TEST_CASE("waste settles at four extra bits per erasure") {
  Protocol pi = Protocol::string_exchange(20);
  Bits x(10, '1'), y(10, '0');
  auto rows = sweep_budget(SchemeId::basic4, pi, x, y, 8);
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].waste_bits_per_erasure == doctest::Approx(4.0));
  }
}

TEST_CASE("delta sweep tracks the 1/2 - delta rate curve") {
  Protocol pi = Protocol::string_exchange(200);
  Bits x(100, '1'), y(100, '0');
  auto rows = sweep_delta(SchemeId::basic4, pi, x, y, {0.0, 0.1, 0.2, 0.3, 0.4});
  REQUIRE(rows.size() == 5);
  for (const SweepRow& r : rows) {
    CHECK(r.rate >= r.rate_analytic - 0.02);
    CHECK(r.rate <= 0.5);
  }
  CHECK(rows[0].rate == doctest::Approx(0.5));
  CHECK(rows[4].rate == doctest::Approx(0.1));
}

TEST_CASE("delta outside [0, 1/2) is rejected") {
  Protocol pi = Protocol::string_exchange(4);
  CHECK_THROWS_AS(sweep_delta(SchemeId::basic4, pi, "10", "01", {0.5}), Error);
  CHECK_THROWS_AS(sweep_delta(SchemeId::basic4, pi, "10", "01", {-0.1}), Error);
}

TEST_CASE("csv output carries the fixed headers") {
  Protocol pi = Protocol::string_exchange(4);
  auto rows = sweep_budget(SchemeId::ags4, pi, "10", "01", 2);
  std::string csv = sweep_to_csv(rows, false);
  CHECK(csv.rfind("T,erasures,transmissions,cc_bits,rc_timesteps,rate,"
                  "waste_bits_per_erasure,waste_analytic\n",
                  0) == 0);
  auto drows = sweep_delta(SchemeId::basic4, pi, "10", "01", {0.0});
  std::string dcsv = sweep_to_csv(drows, true);
  CHECK(dcsv.rfind("delta,T,", 0) == 0);
}

TEST_CASE("ags sweep stays within one symbol per erasure") {
  Protocol pi = Protocol::string_exchange(40);
  Bits x(20, '1'), y(20, '0');
  auto rows = sweep_budget(SchemeId::ags4, pi, x, y, 6);
  for (int64_t t = 0; t <= 6; ++t)
    CHECK(rows[static_cast<size_t>(t)].transmissions == 40 + t);
}
