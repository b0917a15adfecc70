#include <doctest.h>

#include <limits>

#include "qmeq/checker.hpp"
#include "qmeq/errors.hpp"
#include "qmeq/oracle.hpp"
#include "qmeq/walk.hpp"
#include "random_models.hpp"

using namespace qmeq;

TEST_CASE("tree node counts") {
  CHECK(tree_node_count(8, 0) == 1);
  CHECK(tree_node_count(8, 3) == 1 + 8 + 64 + 512);
  CHECK(tree_node_count(1, 10) == 11);
  CHECK(tree_node_count(0, 5) == 1);
  CHECK(tree_node_count(8, 100) == std::numeric_limits<std::size_t>::max());
}

TEST_CASE("length zero only compares traces") {
  const auto w = build_walk_machine(4, hadamard_coin());
  const auto r = k_equivalent_bruteforce(w.machine, w.machine, w.state("0c0p").density,
                                         w.state("0c2p").density, pure_state_basis(2), 0);
  CHECK(r.equivalent_up_to_k);
  CHECK(r.nodes_visited == 1);
}

TEST_CASE("walk case 1 is separated at length 3 by +00 / 000") {
  const auto w = build_walk_machine(4, hadamard_coin());
  const auto b = pure_state_basis(2);
  const auto& r1 = w.state("0c0p").density;
  const auto& r2 = w.state("0c2p").density;
  CHECK(k_equivalent_bruteforce(w.machine, w.machine, r1, r2, b, 2).equivalent_up_to_k);
  const auto r = k_equivalent_bruteforce(w.machine, w.machine, r1, r2, b, 3);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->trace.inputs == std::vector<std::size_t>{2, 0, 0});
  CHECK(r.witness->trace.outputs == std::vector<std::size_t>{0, 0, 0});
  CHECK(r.witness->p1 == doctest::Approx(0.5));

  // The checker's early-abort witness is the same least sequence.
  const auto c = check_equivalence(w.machine, w.machine, r1, r2, b);
  REQUIRE(c.witness.has_value());
  CHECK(c.witness->trace == r.witness->trace);
}

TEST_CASE("node cap is enforced before enumeration") {
  const auto w = build_walk_machine(4, hadamard_coin());
  const auto& rho = w.state("0c0p").density;
  CHECK_THROWS_AS(k_equivalent_bruteforce(w.machine, w.machine, rho, rho, pure_state_basis(2), 9),
                  ResourceError);
  CHECK_THROWS_AS(k_equivalent_bruteforce(w.machine, w.machine, rho, rho, pure_state_basis(2), 3,
                                          {.node_cap = 100}),
                  ResourceError);
}

TEST_CASE("K-equivalence is monotone in K") {
  testing::Rng rng(3);
  const auto b = pure_state_basis(2);
  for (int t = 0; t < 15; ++t) {
    const auto meas = testing::random_projective_measurement(2, rng);
    const auto m1 = testing::random_machine(2, 2, meas, rng);
    const auto m2 = testing::random_machine(2, 2, meas, rng);
    const auto r1 = testing::random_density(2, 1, rng);
    const auto r2 = testing::random_density(2, 1, rng);
    bool previous = true;
    for (std::size_t k = 0; k <= 3; ++k) {
      const bool eq = k_equivalent_bruteforce(m1, m2, r1, r2, b, k).equivalent_up_to_k;
      if (!previous) CHECK_FALSE(eq);
      previous = eq;
    }
  }
}

TEST_CASE("checker agrees with exhaustive search at K = d1^2 + d2^2 - 1") {
  testing::Rng rng(8);
  const auto b = pure_state_basis(2);
  for (int t = 0; t < 24; ++t) {
    const auto meas = testing::random_projective_measurement(2, rng);
    const auto m1 = testing::random_machine(2, 1, meas, rng);
    // Alternate between unrelated machines and padded copies of m1.
    const bool padded = t % 2 == 0;
    const auto m2 = padded ? testing::padded_machine(m1, 1, rng) : testing::random_machine(2, 1 + t % 2, meas, rng);
    const auto r1 = testing::random_density(1, 1, rng);
    const auto r2 = padded ? testing::pad_state(r1, 1) : testing::random_density(m2.state_dim(), 1, rng);
    const std::size_t k = 1 + m2.state_dim() * m2.state_dim() - 1;

    const auto oracle = k_equivalent_bruteforce(m1, m2, r1, r2, b, k);
    const auto check = check_equivalence(m1, m2, r1, r2, b);
    CHECK(oracle.equivalent_up_to_k == (check.verdict == Verdict::kEquivalent));
    if (padded) CHECK(oracle.equivalent_up_to_k);
  }
}

TEST_CASE("span dimension freezes once it stops growing") {
  testing::Rng rng(13);
  const auto b = pure_state_basis(2);
  for (int t = 0; t < 12; ++t) {
    const auto meas = testing::random_projective_measurement(2, rng);
    const std::size_t d1 = 1 + t % 2;
    const auto m1 = testing::random_machine(2, d1, meas, rng);
    const auto m2 = t % 3 == 0 ? testing::padded_machine(m1, 1, rng) : testing::random_machine(2, 1, meas, rng);
    const auto r1 = testing::random_density(d1, 1, rng);
    const auto r2 = t % 3 == 0 ? testing::pad_state(r1, 1) : testing::random_density(1, 1, rng);
    const MachineSum sum(m1, m2);
    const std::size_t k = std::min<std::size_t>(5, sum.ambient_dimension());
    const auto profile = span_dimension_profile(sum, r1, r2, b, k);
    REQUIRE(profile.size() == k + 1);
    CHECK(profile[0] <= 1);
    for (std::size_t m = 1; m < profile.size(); ++m) {
      CHECK(profile[m] >= profile[m - 1]);
      CHECK(profile[m] <= sum.ambient_dimension());
      if (profile[m] == profile[m - 1])
        for (std::size_t later = m; later < profile.size(); ++later) CHECK(profile[later] == profile[m]);
    }
    // A frozen profile spans exactly what the checker keeps.
    if (profile[k] == profile[k - 1]) {
      const auto full = check_equivalence(sum, r1, r2, b, {.early_abort = false});
      CHECK(full.basis_size == profile[k]);
    }
  }
}
