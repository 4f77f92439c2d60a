#ifndef ORTHOSIM_ADVERSARY_HPP
#define ORTHOSIM_ADVERSARY_HPP

#include <optional>
#include <string>
#include <vector>

#include "orthosim/qlinalg.hpp"
#include "orthosim/registry.hpp"

namespace orthosim {

struct ProtocolConfig;  // protocol.hpp

enum class AttackKind { none, intercept_resend, measure_all, entangling_probe };
enum class BasisPolicy { fixed_z, fixed_x, random_zx, code_basis };

/// Eve's strategy against in-transit particles.
struct AttackModel {
  AttackKind kind = AttackKind::none;
  BasisPolicy policy = BasisPolicy::fixed_z;
  // entangling_probe: controlled operations on the probe, one per basis state
  // of the attacked qubit. Probe starts in |0...0>.
  std::vector<Eigen::MatrixXcd> probe_ops;
  // QSDC round filter: -1 attacks every round, otherwise only the given
  // 1-based round.
  int only_round = -1;

  static AttackModel none_attack() { return {}; }
  static AttackModel intercept(BasisPolicy p);
  static AttackModel measure_all_attack();
  static AttackModel probe(std::vector<Eigen::MatrixXcd> ops);

  static AttackModel preset(const std::string& name);
  static AttackModel from_json(const nlohmann::json& doc);
  std::string label() const;
};

struct EveRecord {
  std::vector<std::pair<ParticleId, int>> outcomes;
};

/// Applies the attack to the in-transit sequence. All targeted particles must
/// be tagged in_transit. code_basis interception groups consecutive particles
/// of the received sequence into blocks of the code basis' qubit count.
void apply_attack(const AttackModel& attack, Ledger& ledger,
                  const TransportSequence& targets, Rng& rng,
                  const BasisSet* code_basis = nullptr, EveRecord* record = nullptr);

/// |alpha>|probe> -> |alpha> C_alpha |probe> on the chosen qubit of the block
/// state, with the probe register appended after the block's qubits.
StateVec probe_interaction(const StateVec& block_state,
                           const std::vector<Eigen::MatrixXcd>& probe_ops,
                           int probe_dim, int control_qubit = 0);

/// Which-way information vs coherence for a probe attack on |+>.
struct DualityReport {
  double distinguishability = 0.0;  // D: trace distance of conditional probe states
  double coherence = 0.0;           // C: doubled off-diagonal of Bob's marginal
  double sum_check = 0.0;           // D^2 + C^2
  double sum_linear = 0.0;          // D + C
};

DualityReport duality_tradeoff(const std::vector<Eigen::MatrixXcd>& probe_ops);

/// Squared-concurrence monogamy accounting for a pure 3-qubit state
/// (parties A, B, C = qubits 0, 1, 2).
struct MonogamyReport {
  double e_ac = 0.0;
  double e_bc = 0.0;
  double e_ab_c = 0.0;  // tangle of the AB:C cut, 4 det rho_C
  double slack = 0.0;   // e_ab_c - e_ac - e_bc
};

MonogamyReport ckw_monogamy(const StateVec& state);

/// Holevo bound on what Eve learns from holding the listed qubit positions of
/// one encoded block, over the uniform ensemble of all M messages. Exact
/// enumeration; M capped at kMaxDim.
double eve_leakage(const ProtocolConfig& config, const std::vector<int>& eve_positions);

}  // namespace orthosim

#endif
