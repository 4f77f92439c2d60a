#include "orthosim/adversary.hpp"

#include <cmath>

#include "orthosim/protocol.hpp"

namespace orthosim {

namespace {

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& rows) {
  const int dim = static_cast<int>(rows.size());
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != dim)
      throw ConfigInvalid("probe op is not square");
    for (int j = 0; j < dim; ++j)
      m(i, j) = cx(rows[static_cast<size_t>(i)][static_cast<size_t>(j)][0].get<double>(),
                   rows[static_cast<size_t>(i)][static_cast<size_t>(j)][1].get<double>());
  }
  return m;
}

void validate_probe_ops(const std::vector<Eigen::MatrixXcd>& ops) {
  if (ops.size() != 2)
    throw DimensionMismatch("expected one probe op per basis state of the attacked qubit");
  const int dim = static_cast<int>(ops[0].rows());
  for (const auto& op : ops) {
    if (op.rows() != dim || op.cols() != dim)
      throw DimensionMismatch("probe ops must share one dimension");
    if (!is_unitary(op)) throw NonUnitaryProbe("probe op is not unitary");
  }
  int d = dim;
  while (d > 1) {
    if (d % 2 != 0) throw DimensionMismatch("probe dimension must be a power of two");
    d /= 2;
  }
}

}  // namespace

AttackModel AttackModel::intercept(BasisPolicy p) {
  AttackModel a;
  a.kind = AttackKind::intercept_resend;
  a.policy = p;
  return a;
}

AttackModel AttackModel::measure_all_attack() {
  AttackModel a;
  a.kind = AttackKind::measure_all;
  return a;
}

AttackModel AttackModel::probe(std::vector<Eigen::MatrixXcd> ops) {
  validate_probe_ops(ops);
  AttackModel a;
  a.kind = AttackKind::entangling_probe;
  a.probe_ops = std::move(ops);
  return a;
}

AttackModel AttackModel::preset(const std::string& name) {
  if (name == "none") return none_attack();
  if (name == "intercept_z") return intercept(BasisPolicy::fixed_z);
  if (name == "intercept_x") return intercept(BasisPolicy::fixed_x);
  if (name == "intercept_zx") return intercept(BasisPolicy::random_zx);
  if (name == "intercept_code") return intercept(BasisPolicy::code_basis);
  if (name == "measure_all") return measure_all_attack();
  throw ConfigInvalid("unknown attack preset: " + name);
}

AttackModel AttackModel::from_json(const nlohmann::json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  AttackModel a;
  if (kind == "none") {
    a = none_attack();
  } else if (kind == "intercept_resend") {
    const std::string basis = doc.value("basis", std::string("fixed_z"));
    BasisPolicy p;
    if (basis == "fixed_z") p = BasisPolicy::fixed_z;
    else if (basis == "fixed_x") p = BasisPolicy::fixed_x;
    else if (basis == "random_zx") p = BasisPolicy::random_zx;
    else if (basis == "code_basis") p = BasisPolicy::code_basis;
    else throw ConfigInvalid("unknown basis policy: " + basis);
    a = intercept(p);
  } else if (kind == "measure_all") {
    a = measure_all_attack();
  } else if (kind == "entangling_probe") {
    std::vector<Eigen::MatrixXcd> ops;
    for (const auto& rows : doc.at("probe_ops")) ops.push_back(matrix_from_json(rows));
    a = probe(std::move(ops));
  } else {
    throw ConfigInvalid("unknown attack kind: " + kind);
  }
  a.only_round = doc.value("only_round", -1);
  return a;
}

std::string AttackModel::label() const {
  switch (kind) {
    case AttackKind::none: return "none";
    case AttackKind::measure_all: return "measure_all";
    case AttackKind::entangling_probe: return "entangling_probe";
    case AttackKind::intercept_resend:
      switch (policy) {
        case BasisPolicy::fixed_z: return "intercept_z";
        case BasisPolicy::fixed_x: return "intercept_x";
        case BasisPolicy::random_zx: return "intercept_zx";
        case BasisPolicy::code_basis: return "intercept_code";
      }
  }
  return "?";
}

void apply_attack(const AttackModel& attack, Ledger& ledger,
                  const TransportSequence& targets, Rng& rng,
                  const BasisSet* code_basis, EveRecord* record) {
  if (attack.kind == AttackKind::none) return;
  for (ParticleId id : targets)
    if (ledger.owner(id) != Holder::in_transit)
      throw NotInTransit("attack target is not in transit");

  auto note = [&](ParticleId id, int outcome) {
    if (record) record->outcomes.emplace_back(id, outcome);
  };

  switch (attack.kind) {
    case AttackKind::none:
      return;
    case AttackKind::measure_all:
      for (ParticleId id : targets)
        note(id, ledger.measure_particles({id}, BasisSet::zbasis(), rng));
      return;
    case AttackKind::intercept_resend: {
      if (attack.policy == BasisPolicy::code_basis) {
        if (!code_basis)
          throw ConfigInvalid("code_basis interception requires the code basis");
        const int n = code_basis->qubit_count();
        std::size_t i = 0;
        for (; i + static_cast<std::size_t>(n) <= targets.size(); i += static_cast<std::size_t>(n)) {
          std::vector<ParticleId> group(targets.begin() + static_cast<std::ptrdiff_t>(i),
                                        targets.begin() + static_cast<std::ptrdiff_t>(i) + n);
          const int outcome = ledger.measure_particles(group, *code_basis, rng);
          for (ParticleId id : group) note(id, outcome);
        }
        for (; i < targets.size(); ++i)
          note(targets[i], ledger.measure_particles({targets[i]}, BasisSet::zbasis(), rng));
        return;
      }
      for (ParticleId id : targets) {
        bool use_x = attack.policy == BasisPolicy::fixed_x;
        if (attack.policy == BasisPolicy::random_zx) use_x = (rng() & 1) != 0;
        const BasisSet basis = use_x ? BasisSet::xbasis() : BasisSet::zbasis();
        // Measurement collapse doubles as the resent eigenstate.
        note(id, ledger.measure_particles({id}, basis, rng));
      }
      return;
    }
    case AttackKind::entangling_probe: {
      validate_probe_ops(attack.probe_ops);
      const int probe_dim = static_cast<int>(attack.probe_ops[0].rows());
      Eigen::MatrixXcd controlled = Eigen::MatrixXcd::Zero(2 * probe_dim, 2 * probe_dim);
      controlled.topLeftCorner(probe_dim, probe_dim) = attack.probe_ops[0];
      controlled.bottomRightCorner(probe_dim, probe_dim) = attack.probe_ops[1];
      int probe_qubits = 0;
      while ((1 << probe_qubits) < probe_dim) ++probe_qubits;
      for (ParticleId id : targets) {
        const auto probe_ids =
            ledger.create_block(StateVec::basis_state(probe_qubits, 0), Holder::eve);
        std::vector<ParticleId> joint{id};
        joint.insert(joint.end(), probe_ids.begin(), probe_ids.end());
        ledger.apply_joint_unitary(joint, controlled);
      }
      return;
    }
  }
}

StateVec probe_interaction(const StateVec& block_state,
                           const std::vector<Eigen::MatrixXcd>& probe_ops,
                           int probe_dim, int control_qubit) {
  validate_probe_ops(probe_ops);
  if (static_cast<int>(probe_ops[0].rows()) != probe_dim)
    throw DimensionMismatch("probe_dim does not match the probe ops");
  if (control_qubit < 0 || control_qubit >= block_state.qubit_count)
    throw DimensionMismatch("control qubit out of range");

  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(probe_dim);
  e0(0) = 1.0;
  const Eigen::VectorXcd beta0 = probe_ops[0] * e0;
  const Eigen::VectorXcd beta1 = probe_ops[1] * e0;

  const int k = block_state.qubit_count;
  Eigen::VectorXcd out(block_state.dim() * probe_dim);
  for (int i = 0; i < block_state.dim(); ++i) {
    const int bit = (i >> (k - 1 - control_qubit)) & 1;
    const Eigen::VectorXcd& beta = bit == 0 ? beta0 : beta1;
    for (int e = 0; e < probe_dim; ++e)
      out(i * probe_dim + e) = block_state.amps(i) * beta(e);
  }
  return StateVec(std::move(out));
}

DualityReport duality_tradeoff(const std::vector<Eigen::MatrixXcd>& probe_ops) {
  validate_probe_ops(probe_ops);
  const int probe_dim = static_cast<int>(probe_ops[0].rows());

  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(probe_dim);
  e0(0) = 1.0;
  const DensityMatrix cond0{Eigen::MatrixXcd((probe_ops[0] * e0) * (probe_ops[0] * e0).adjoint())};
  const DensityMatrix cond1{Eigen::MatrixXcd((probe_ops[1] * e0) * (probe_ops[1] * e0).adjoint())};

  const StateVec joint = probe_interaction(StateVec::plus(), probe_ops, probe_dim);
  const DensityMatrix bob = reduced_density(joint, {0});

  DualityReport report;
  report.distinguishability = trace_distance(cond0, cond1);
  report.coherence = 2.0 * std::abs(bob.entries(0, 1));
  report.sum_check = report.distinguishability * report.distinguishability +
                     report.coherence * report.coherence;
  report.sum_linear = report.distinguishability + report.coherence;
  return report;
}

MonogamyReport ckw_monogamy(const StateVec& state) {
  if (state.qubit_count != 3)
    throw DimensionMismatch("monogamy accounting requires a 3-qubit pure state");
  MonogamyReport report;
  const double c_ac = concurrence(reduced_density(state, {0, 2}));
  const double c_bc = concurrence(reduced_density(state, {1, 2}));
  report.e_ac = c_ac * c_ac;
  report.e_bc = c_bc * c_bc;
  const DensityMatrix rho_c = reduced_density(state, {2});
  report.e_ab_c = 4.0 * rho_c.entries.determinant().real();
  report.slack = report.e_ab_c - report.e_ac - report.e_bc;
  return report;
}

double eve_leakage(const ProtocolConfig& config, const std::vector<int>& eve_positions) {
  const int m = config.m();
  if (m > kMaxDim) throw TooLarge("message enumeration exceeds the dense cap");
  for (int p : eve_positions)
    if (p < 0 || p >= config.n)
      throw DimensionMismatch("eve position out of range");

  std::vector<std::pair<double, DensityMatrix>> ensemble;
  ensemble.reserve(static_cast<size_t>(m));
  const Eigen::VectorXcd& anchor = config.basis.vectors[static_cast<size_t>(config.anchor)].amps;
  for (int v = 0; v < m; ++v) {
    const StateVec code{Eigen::VectorXcd(config.family.ops[static_cast<size_t>(v)] * anchor)};
    ensemble.emplace_back(1.0 / m, reduced_density(code, eve_positions));
  }
  return holevo_bound(ensemble);
}

}  // namespace orthosim
