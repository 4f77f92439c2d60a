#ifndef ORTHOSIM_QLINALG_HPP
#define ORTHOSIM_QLINALG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace orthosim {

using cx = std::complex<double>;
using Rng = std::mt19937_64;

// Absolute tolerance for orthonormality, unitarity and density-matrix checks.
inline constexpr double kTol = 1e-10;
// Residual-norm threshold below which Gram-Schmidt rejects the input set.
inline constexpr double kLinDepTol = 1e-8;
// Hard cap on Hilbert-space dimension for dense enumeration.
inline constexpr int kMaxDim = 256;

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : SimError { using SimError::SimError; };
struct LinearDependence : SimError { using SimError::SimError; };
struct IndexOutOfRange : SimError { using SimError::SimError; };
struct EmptySubset : SimError { using SimError::SimError; };
struct InvalidDensityMatrix : SimError { using SimError::SimError; };
struct ProbabilityNotNormalized : SimError { using SimError::SimError; };
struct NonUnitaryProbe : SimError { using SimError::SimError; };
struct UnknownParticle : SimError { using SimError::SimError; };
struct NotInTransit : SimError { using SimError::SimError; };
struct ConfigInvalid : SimError { using SimError::SimError; };
struct TooLarge : SimError { using SimError::SimError; };

// Uniform double in [0,1) drawn from the top 53 bits of the generator,
// so sampling does not depend on the library's distribution internals.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Normalized complex amplitude vector over labeled qubits.
/// Qubit 0 is the most significant bit of the amplitude index:
/// |q0 q1 ... q_{k-1}> sits at index q0*2^{k-1} + ... + q_{k-1}.
struct StateVec {
  Eigen::VectorXcd amps;
  int qubit_count = 0;

  StateVec() = default;
  explicit StateVec(Eigen::VectorXcd a);

  int dim() const { return static_cast<int>(amps.size()); }

  static StateVec basis_state(int qubits, int index);
  static StateVec plus();   // (|0>+|1>)/sqrt(2)
  static StateVec minus();  // (|0>-|1>)/sqrt(2)

  // Equality up to global phase: |<phi|psi>| == 1 within tol.
  bool approx_equal(const StateVec& other, double tol = 1e-9) const;
};

StateVec tensor(const StateVec& a, const StateVec& b);

/// Hermitian, unit-trace, positive semidefinite matrix over k qubits.
struct DensityMatrix {
  Eigen::MatrixXcd entries;
  int qubit_count = 0;

  DensityMatrix() = default;
  explicit DensityMatrix(Eigen::MatrixXcd m);

  int dim() const { return static_cast<int>(entries.rows()); }
  static DensityMatrix from_pure(const StateVec& psi);
  static DensityMatrix maximally_mixed(int qubits);
};

/// M = 2^n mutually orthonormal n-qubit states.
struct BasisSet {
  int dim = 0;  // M
  std::vector<StateVec> vectors;

  BasisSet() = default;
  explicit BasisSet(std::vector<StateVec> vecs);

  int qubit_count() const { return vectors.empty() ? 0 : vectors[0].qubit_count; }

  static BasisSet computational(int n);
  static BasisSet zbasis() { return computational(1); }
  static BasisSet xbasis();  // {|+>, |->}
  // Bell basis ordered so index 0 is (|00>+|11>)/sqrt(2).
  static BasisSet bell();
};

/// Bijection on {0, ..., L-1}.
struct Permutation {
  std::vector<int> map;

  Permutation() = default;
  explicit Permutation(std::vector<int> m);

  int size() const { return static_cast<int>(map.size()); }
  int operator()(int i) const { return map.at(static_cast<size_t>(i)); }

  Permutation inverse() const;
  // (this o other)(i) = this(other(i))
  Permutation compose(const Permutation& other) const;

  static Permutation identity(int n);
  static Permutation random(int n, Rng& rng);  // Fisher-Yates
};

/// M encoding unitaries anchored at basis index anchor_index.
struct UnitaryFamily {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> ops;
  int anchor_index = 0;
};

bool is_unitary(const Eigen::MatrixXcd& u, double tol = kTol);

/// Orthonormalizes linearly independent vectors; the first output equals
/// input[0] normalized. Two projection passes per vector.
BasisSet gram_schmidt(const std::vector<Eigen::VectorXcd>& vectors);

/// U = sum_j |a_{perm(j)}><a_j| in the computational coordinates.
Eigen::MatrixXcd permutation_unitary(const BasisSet& basis, const Permutation& perm);

/// The symmetric encoding family: ops[anchor] = I and
/// ops[j] = |a_i><a_j| + |a_j><a_i| + sum_{k != i,j} |a_k><a_k|.
UnitaryFamily hermitian_family(const BasisSet& basis, int anchor);

/// True iff |<a_i|U_j^dag U_k|a_i>| < kTol for all j != k.
bool verify_orthogonal_family(const UnitaryFamily& family, const BasisSet& basis);

/// Born-rule measurement in a full basis; collapses to the outcome vector.
std::pair<int, StateVec> measure(const StateVec& state, const BasisSet& basis, Rng& rng);

/// Measures the joint basis on the given qubit positions (position order
/// defines the subset's qubit order). Returns the outcome index and the full
/// collapsed state over all qubits.
std::pair<int, StateVec> measure_subset(const StateVec& state,
                                        const std::vector<int>& positions,
                                        const BasisSet& subset_basis, Rng& rng);

/// Partial trace keeping the listed positions (in the listed order).
DensityMatrix reduced_density(const StateVec& state, const std::vector<int>& keep);

/// -sum lambda log2 lambda over the spectrum, in bits.
double von_neumann_entropy(const DensityMatrix& rho);

/// chi = S(sum p_x rho_x) - sum p_x S(rho_x), in bits.
double holevo_bound(const std::vector<std::pair<double, DensityMatrix>>& ensemble);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const DensityMatrix& rho);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Haar-style sampling: normalized complex-Gaussian amplitudes, and unitaries
// via orthonormalization of complex-Gaussian matrices.
StateVec random_state(int qubits, Rng& rng);
Eigen::MatrixXcd random_unitary(int dim, Rng& rng);
BasisSet random_basis(int n, Rng& rng);

// JSON import/export: {"n": int, "orthonormal": bool, "vectors": [[[re,im],...],...]}.
// A set declared non-orthonormal is passed through gram_schmidt.
BasisSet basis_from_json(const nlohmann::json& doc);
nlohmann::json basis_to_json(const BasisSet& basis, bool orthonormal = true);

}  // namespace orthosim

#endif
