#include <cmath>

#include "doctest.h"
#include "orthosim/adversary.hpp"
#include "orthosim/protocol.hpp"

using namespace orthosim;

namespace {

Eigen::MatrixXcd pauli_x() {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

// rotation with <0|R|0> = cos(theta/2)
Eigen::MatrixXcd rotation_y(double theta) {
  Eigen::MatrixXcd r(2, 2);
  r << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2),
      std::cos(theta / 2);
  return r;
}

}  // namespace

TEST_CASE("apply_attack none leaves amplitudes bit-identical") {
  Rng rng(1);
  Ledger ledger;
  const auto ids = ledger.create_block(BasisSet::bell().vectors[2]);
  const Eigen::VectorXcd before = ledger.block_of(ids[0]).state.amps;
  ledger.transfer(ids, Holder::in_transit);
  apply_attack(AttackModel::none_attack(), ledger, ids, rng);
  const Eigen::VectorXcd after = ledger.block_of(ids[0]).state.amps;
  REQUIRE(before.size() == after.size());
  for (int i = 0; i < before.size(); ++i) CHECK(before(i) == after(i));
}

TEST_CASE("fixed-Z interception forwards a computational eigenstate") {
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    Ledger ledger;
    const auto ids = ledger.create_block(StateVec::plus());
    ledger.transfer(ids, Holder::in_transit);
    apply_attack(AttackModel::intercept(BasisPolicy::fixed_z), ledger, ids, rng);
    const StateVec& fwd = ledger.block_of(ids[0]).state;
    CHECK((fwd.approx_equal(StateVec::basis_state(1, 0)) ||
           fwd.approx_equal(StateVec::basis_state(1, 1))));
  }
}

TEST_CASE("attacks require the in-transit tag") {
  Rng rng(3);
  Ledger ledger;
  const auto ids = ledger.create_block(StateVec::plus());
  CHECK_THROWS_AS(
      apply_attack(AttackModel::intercept(BasisPolicy::fixed_z), ledger, ids, rng),
      NotInTransit);
}

TEST_CASE("a trivial entangling probe is invisible to the decoy check") {
  Rng rng(4);
  const auto identity2 = Eigen::MatrixXcd::Identity(2, 2);
  const AttackModel trivial = AttackModel::probe({identity2, identity2});
  const ProtocolConfig cfg = ProtocolConfig::make(
      1, 10, Variant::dsqc, BasisSet::computational(1), 0, Permutation{}, 0.0, 0);
  for (int t = 0; t < 10; ++t) {
    std::vector<int> message(10);
    for (auto& bit : message) bit = static_cast<int>(rng() & 1);
    const RunReport report = run_dsqc(cfg, message, trivial, rng);
    CHECK_FALSE(report.aborted);
    CHECK(report.decoy_error_rate == 0.0);
    CHECK(*report.decoded_bits == message);
  }
}

TEST_CASE("probe_interaction with identity ops is a product with the probe") {
  const auto identity2 = Eigen::MatrixXcd::Identity(2, 2);
  const StateVec joint = probe_interaction(StateVec::plus(), {identity2, identity2}, 2);
  CHECK(joint.approx_equal(tensor(StateVec::plus(), StateVec::basis_state(1, 0))));
  const DensityMatrix bob = reduced_density(joint, {0});
  CHECK(std::abs(bob.entries(0, 1) - cx(0.5, 0)) < 1e-12);
}

TEST_CASE("probe_interaction with a CNOT-style probe maximally entangles") {
  const StateVec joint = probe_interaction(
      StateVec::plus(), {Eigen::MatrixXcd::Identity(2, 2), pauli_x()}, 2);
  CHECK(joint.approx_equal(BasisSet::bell().vectors[0]));
  const DensityMatrix bob = reduced_density(joint, {0});
  CHECK((bob.entries - Eigen::MatrixXcd::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("probe rotation scales Bob's off-diagonal by the probe overlap") {
  for (double theta : {0.3, 1.1, 2.5}) {
    const StateVec joint = probe_interaction(
        StateVec::plus(), {Eigen::MatrixXcd::Identity(2, 2), rotation_y(theta)}, 2);
    const DensityMatrix bob = reduced_density(joint, {0});
    CHECK(std::abs(std::abs(bob.entries(0, 1)) - std::abs(std::cos(theta / 2)) / 2) <
          1e-10);
  }
}

TEST_CASE("probe_interaction preserves norm and joint unitarity") {
  Rng rng(5);
  const std::vector<Eigen::MatrixXcd> ops{random_unitary(2, rng),
                                          random_unitary(2, rng)};
  std::vector<StateVec> images;
  for (int i = 0; i < 2; ++i)
    images.push_back(probe_interaction(StateVec::basis_state(1, i), ops, 2));
  for (const auto& img : images)
    CHECK(std::abs(img.amps.norm() - 1.0) < 1e-12);
  CHECK(std::abs(images[0].amps.dot(images[1].amps)) < 1e-12);
}

TEST_CASE("probe_interaction rejects a non-unitary op") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(
      probe_interaction(StateVec::plus(), {Eigen::MatrixXcd::Identity(2, 2), bad}, 2),
      NonUnitaryProbe);
}

TEST_CASE("duality limits: identical and orthogonal probe responses") {
  const auto identity2 = Eigen::MatrixXcd::Identity(2, 2);
  const DualityReport same = duality_tradeoff({identity2, identity2});
  CHECK(same.distinguishability == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same.coherence == doctest::Approx(1.0).epsilon(1e-12));

  const DualityReport full = duality_tradeoff({identity2, pauli_x()});
  CHECK(full.distinguishability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.coherence == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("duality at probe overlap 1/sqrt2 balances D and C") {
  const double inv = 1.0 / std::sqrt(2.0);
  const DualityReport r = duality_tradeoff(
      {Eigen::MatrixXcd::Identity(2, 2), rotation_y(M_PI / 2)});
  CHECK(r.distinguishability == doctest::Approx(inv).epsilon(1e-10));
  CHECK(r.coherence == doctest::Approx(inv).epsilon(1e-10));
  CHECK(r.sum_check == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pure probes satisfy the quadratic duality identity") {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    const DualityReport r =
        duality_tradeoff({random_unitary(2, rng), random_unitary(2, rng)});
    CHECK(std::abs(r.sum_check - 1.0) < 1e-9);
    CHECK(r.sum_linear <= std::sqrt(2.0) + 1e-9);
  }
}

TEST_CASE("monogamy accounting for GHZ, product and W states") {
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  const MonogamyReport g = ckw_monogamy(StateVec(std::move(ghz)));
  CHECK(g.e_ac == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(g.e_bc == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(g.e_ab_c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.slack == doctest::Approx(1.0).epsilon(1e-9));

  const MonogamyReport p = ckw_monogamy(StateVec::basis_state(3, 0));
  CHECK(p.e_ac == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.e_bc == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.e_ab_c == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(8);
  w(1) = w(2) = w(4) = 1.0 / std::sqrt(3.0);
  const MonogamyReport wr = ckw_monogamy(StateVec(std::move(w)));
  CHECK(wr.e_ac == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
  CHECK(wr.e_bc == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
  CHECK(wr.e_ab_c == doctest::Approx(8.0 / 9.0).epsilon(1e-9));
  CHECK(std::abs(wr.slack) < 1e-9);
}

TEST_CASE("monogamy slack is nonnegative on random pure states") {
  Rng rng(7);
  for (int t = 0; t < 1000; ++t)
    CHECK(ckw_monogamy(random_state(3, rng)).slack >= -1e-9);
}

TEST_CASE("eve_leakage separates entangled from product code bases") {
  const ProtocolConfig bell = ProtocolConfig::make(
      2, 1, Variant::qsdc, BasisSet::bell(), 0, Permutation{}, 0.0, 0);
  CHECK(eve_leakage(bell, {0}) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(eve_leakage(bell, {1}) == doctest::Approx(0.0).epsilon(1e-9));

  const ProtocolConfig comp1 = ProtocolConfig::make(
      1, 1, Variant::dsqc, BasisSet::computational(1), 0, Permutation{}, 0.0, 0);
  CHECK(eve_leakage(comp1, {0}) == doctest::Approx(1.0).epsilon(1e-9));

  const ProtocolConfig comp2 = ProtocolConfig::make(
      2, 1, Variant::dsqc, BasisSet::computational(2), 0, Permutation{}, 0.0, 0);
  CHECK(eve_leakage(comp2, {0}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eve_leakage grows monotonically with Eve's subsystem") {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const ProtocolConfig cfg = ProtocolConfig::make(
        2, 1, Variant::dsqc, random_basis(2, rng), 0, Permutation{}, 0.0, 0);
    const double one = eve_leakage(cfg, {0});
    const double both = eve_leakage(cfg, {0, 1});
    CHECK(both >= one - 1e-9);
    CHECK(both == doctest::Approx(2.0).epsilon(1e-9));  // whole block leaks fully
  }
}

TEST_CASE("code-basis interception under PoP yields a computed, reported leak") {
  // Eve measures consecutive received pairs in the code basis, but the order
  // is permuted; her record is a scrambled ensemble. The leak is computed and
  // reported rather than asserted zero.
  Rng rng(9);
  const ProtocolConfig cfg = ProtocolConfig::make(
      2, 4, Variant::dsqc, BasisSet::bell(), 0, Permutation{}, 0.0, 0);
  std::vector<int> message(8);
  for (auto& bit : message) bit = static_cast<int>(rng() & 1);
  const RunReport report =
      run_dsqc(cfg, message, AttackModel::intercept(BasisPolicy::code_basis), rng);
  // the single-qubit marginal Eve can address is uniform for Bell code states
  const double chi = eve_leakage(cfg, {0});
  CHECK(chi == doctest::Approx(0.0).epsilon(1e-9));
  CHECK((report.aborted || report.decoded_bits.has_value()));
}

TEST_CASE("attack JSON and preset parsing") {
  const AttackModel a = AttackModel::from_json(
      nlohmann::json{{"kind", "intercept_resend"}, {"basis", "random_zx"}});
  CHECK(a.kind == AttackKind::intercept_resend);
  CHECK(a.policy == BasisPolicy::random_zx);
  CHECK(a.label() == "intercept_zx");

  CHECK(AttackModel::preset("none").kind == AttackKind::none);
  CHECK(AttackModel::preset("measure_all").kind == AttackKind::measure_all);
  CHECK_THROWS_AS(AttackModel::preset("bogus"), ConfigInvalid);

  nlohmann::json probe;
  probe["kind"] = "entangling_probe";
  probe["probe_ops"] = {
      {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.0, 0.0}}},
      {{{0.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}, {0.0, 0.0}}}};
  const AttackModel b = AttackModel::from_json(probe);
  CHECK(b.kind == AttackKind::entangling_probe);
  CHECK(b.probe_ops.size() == 2);
}
