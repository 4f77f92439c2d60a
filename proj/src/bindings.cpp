#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orthosim/harness.hpp"

namespace py = pybind11;
using namespace orthosim;

namespace {

py::object to_py(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

BasisSet basis_from_vectors(const std::vector<Eigen::VectorXcd>& vectors) {
  std::vector<StateVec> states;
  for (const auto& v : vectors) states.emplace_back(v);
  return BasisSet(std::move(states));
}

BasisSet named_basis(const std::string& name, int n) {
  if (name == "computational") return BasisSet::computational(n);
  if (name == "bell") return BasisSet::bell();
  if (name == "x") return BasisSet::xbasis();
  throw ConfigInvalid("unknown basis name: " + name);
}

ProtocolConfig make_config(const std::string& variant, int n, int copies,
                           const std::string& basis, double delta,
                           std::uint64_t seed) {
  return ProtocolConfig::make(n, copies, variant_from_name(variant),
                              named_basis(basis, n), 0, Permutation{}, delta, seed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "simulator core for orthogonal-state secure communication protocols";

  m.def(
      "gram_schmidt",
      [](const std::vector<Eigen::VectorXcd>& vectors) {
        std::vector<Eigen::VectorXcd> out;
        for (const auto& s : gram_schmidt(vectors).vectors) out.push_back(s.amps);
        return out;
      },
      py::arg("vectors"), "Orthonormalize a linearly independent set.");

  m.def(
      "hermitian_family",
      [](const std::vector<Eigen::VectorXcd>& basis, int anchor) {
        return hermitian_family(basis_from_vectors(basis), anchor).ops;
      },
      py::arg("basis"), py::arg("anchor") = 0,
      "Hermitian unitary encoding family anchored at basis[anchor].");

  m.def(
      "verify_orthogonal_family",
      [](const std::vector<Eigen::MatrixXcd>& ops,
         const std::vector<Eigen::VectorXcd>& basis, int anchor) {
        UnitaryFamily fam;
        fam.dim = static_cast<int>(ops.size());
        fam.ops = ops;
        fam.anchor_index = anchor;
        return verify_orthogonal_family(fam, basis_from_vectors(basis));
      },
      py::arg("ops"), py::arg("basis"), py::arg("anchor") = 0);

  m.def(
      "von_neumann_entropy",
      [](const Eigen::MatrixXcd& rho) {
        return von_neumann_entropy(DensityMatrix(rho));
      },
      py::arg("rho"));
  m.def(
      "concurrence",
      [](const Eigen::MatrixXcd& rho) { return concurrence(DensityMatrix(rho)); },
      py::arg("rho"));
  m.def(
      "trace_distance",
      [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        return trace_distance(DensityMatrix(a), DensityMatrix(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "holevo_bound",
      [](const std::vector<Eigen::MatrixXcd>& states, std::vector<double> probs) {
        if (probs.empty())
          probs.assign(states.size(), 1.0 / static_cast<double>(states.size()));
        if (probs.size() != states.size())
          throw ConfigInvalid("one probability per state required");
        std::vector<std::pair<double, DensityMatrix>> ensemble;
        for (std::size_t i = 0; i < states.size(); ++i)
          ensemble.emplace_back(probs[i], DensityMatrix(states[i]));
        return holevo_bound(ensemble);
      },
      py::arg("states"), py::arg("probs") = std::vector<double>{});

  m.def(
      "run",
      [](const std::string& variant, int n, int copies,
         const std::vector<int>& message, const std::string& basis,
         const std::string& attack, double delta, std::uint64_t seed) {
        const ProtocolConfig cfg =
            make_config(variant, n, copies, basis, delta, seed);
        Rng rng(seed);
        RunReport r =
            run_protocol(cfg, message, AttackModel::preset(attack), rng);
        return to_py(r.to_json());
      },
      py::arg("variant"), py::arg("n"), py::arg("copies"), py::arg("message"),
      py::arg("basis") = "computational", py::arg("attack") = "none",
      py::arg("delta") = 0.0, py::arg("seed") = 0,
      "Run one protocol instance and return the report as a dict.");

  m.def(
      "run_experiment",
      [](const std::string& variant, int n, int copies, int trials,
         const std::string& basis, const std::string& attack, double delta,
         std::uint64_t seed) {
        ExperimentSpec spec;
        spec.config = make_config(variant, n, copies, basis, delta, seed);
        spec.attack = AttackModel::preset(attack);
        spec.trials = trials;
        return to_py(run_experiment(spec).to_json());
      },
      py::arg("variant"), py::arg("n"), py::arg("copies"), py::arg("trials"),
      py::arg("basis") = "computational", py::arg("attack") = "none",
      py::arg("delta") = 0.0, py::arg("seed") = 0,
      "Run repeated trials with random messages; returns aggregate stats.");

  m.def(
      "efficiency",
      [](const std::string& variant, int n) {
        const bool qsdc = variant_from_name(variant) == Variant::qsdc ||
                          variant_from_name(variant) == Variant::qsdc_gv;
        const int c = n, q = 2 * n, b = qsdc ? 0 : n;
        py::dict out;
        out["c"] = c;
        out["q"] = q;
        out["b"] = b;
        out["eta1"] = eta1(c, q).str();
        out["eta2"] = eta2(c, q, b).str();
        return out;
      },
      py::arg("variant"), py::arg("n"),
      "Exact per-block qubit/bit accounting and efficiency ratios.");

  m.def(
      "duality_tradeoff",
      [](const std::vector<Eigen::MatrixXcd>& probe_ops) {
        const DualityReport r = duality_tradeoff(probe_ops);
        py::dict out;
        out["distinguishability"] = r.distinguishability;
        out["coherence"] = r.coherence;
        out["sum_check"] = r.sum_check;
        return out;
      },
      py::arg("probe_ops"),
      "Which-way information vs fringe visibility for a probe attack.");

  m.def(
      "ckw_monogamy",
      [](const Eigen::VectorXcd& state) {
        const MonogamyReport r = ckw_monogamy(StateVec(state));
        py::dict out;
        out["e_ac"] = r.e_ac;
        out["e_bc"] = r.e_bc;
        out["e_ab_c"] = r.e_ab_c;
        out["slack"] = r.slack;
        return out;
      },
      py::arg("state"), "CKW monogamy accounting for a three-qubit pure state.");

  m.def(
      "eve_leakage",
      [](const std::string& variant, int n, const std::string& basis,
         const std::vector<int>& positions) {
        return eve_leakage(make_config(variant, n, 1, basis, 0.0, 0), positions);
      },
      py::arg("variant") = "dsqc", py::arg("n") = 1,
      py::arg("basis") = "computational", py::arg("positions") = std::vector<int>{0},
      "Holevo bound on what an order-ignorant Eve learns from a subset.");
}
