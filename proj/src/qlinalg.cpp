#include "orthosim/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace orthosim {

namespace {

int log2_exact(int dim) {
  if (dim <= 0) throw DimensionMismatch("dimension must be positive");
  int k = 0;
  int d = dim;
  while (d > 1) {
    if (d % 2 != 0) throw DimensionMismatch("dimension is not a power of two");
    d /= 2;
    ++k;
  }
  return k;
}

// Position `pos` (0 = MSB) of a k-qubit amplitude index.
inline int bit_of(int index, int pos, int k) { return (index >> (k - 1 - pos)) & 1; }

}  // namespace

StateVec::StateVec(Eigen::VectorXcd a) : amps(std::move(a)) {
  qubit_count = log2_exact(static_cast<int>(amps.size()));
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    if (std::abs(norm - 1.0) > 1e-6)
      throw DimensionMismatch("state vector is not normalized");
    amps /= norm;
  }
}

StateVec StateVec::basis_state(int qubits, int index) {
  const int dim = 1 << qubits;
  if (index < 0 || index >= dim) throw IndexOutOfRange("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(index) = 1.0;
  return StateVec(std::move(v));
}

StateVec StateVec::plus() {
  Eigen::VectorXcd v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return StateVec(std::move(v));
}

StateVec StateVec::minus() {
  Eigen::VectorXcd v(2);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return StateVec(std::move(v));
}

bool StateVec::approx_equal(const StateVec& other, double tol) const {
  if (dim() != other.dim()) return false;
  const double overlap = std::abs(amps.dot(other.amps));
  return std::abs(overlap - 1.0) < tol;
}

StateVec tensor(const StateVec& a, const StateVec& b) {
  Eigen::VectorXcd out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out(i * b.dim() + j) = a.amps(i) * b.amps(j);
  return StateVec(std::move(out));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m) : entries(std::move(m)) {
  if (entries.rows() != entries.cols())
    throw InvalidDensityMatrix("density matrix must be square");
  qubit_count = log2_exact(static_cast<int>(entries.rows()));
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > kTol)
    throw InvalidDensityMatrix("density matrix is not Hermitian");
  if (std::abs(entries.trace().real() - 1.0) > 1e-9 ||
      std::abs(entries.trace().imag()) > kTol)
    throw InvalidDensityMatrix("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw InvalidDensityMatrix("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const StateVec& psi) {
  return DensityMatrix(psi.amps * psi.amps.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int qubits) {
  const int dim = 1 << qubits;
  return DensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) / double(dim));
}

BasisSet::BasisSet(std::vector<StateVec> vecs) : vectors(std::move(vecs)) {
  dim = static_cast<int>(vectors.size());
  if (dim == 0) throw DimensionMismatch("empty basis");
  for (const auto& v : vectors)
    if (v.dim() != dim)
      throw DimensionMismatch("basis vector dimension does not match set size");
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (std::abs(vectors[i].amps.dot(vectors[j].amps)) > 1e-9)
        throw DimensionMismatch("basis vectors are not pairwise orthogonal");
}

BasisSet BasisSet::computational(int n) {
  const int dim = 1 << n;
  std::vector<StateVec> vecs;
  vecs.reserve(dim);
  for (int i = 0; i < dim; ++i) vecs.push_back(StateVec::basis_state(n, i));
  return BasisSet(std::move(vecs));
}

BasisSet BasisSet::xbasis() {
  return BasisSet({StateVec::plus(), StateVec::minus()});
}

BasisSet BasisSet::bell() {
  const double s = 1.0 / std::sqrt(2.0);
  auto mk = [](cx a0, cx a1, cx a2, cx a3) {
    Eigen::VectorXcd v(4);
    v << a0, a1, a2, a3;
    return StateVec(std::move(v));
  };
  return BasisSet({mk(s, 0, 0, s), mk(s, 0, 0, -s), mk(0, s, s, 0), mk(0, s, -s, 0)});
}

Permutation::Permutation(std::vector<int> m) : map(std::move(m)) {
  std::vector<bool> seen(map.size(), false);
  for (int v : map) {
    if (v < 0 || v >= static_cast<int>(map.size()) || seen[static_cast<size_t>(v)])
      throw IndexOutOfRange("permutation map is not a bijection");
    seen[static_cast<size_t>(v)] = true;
  }
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map.size());
  for (int i = 0; i < size(); ++i) inv[static_cast<size_t>(map[static_cast<size_t>(i)])] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (size() != other.size()) throw DimensionMismatch("permutation sizes differ");
  std::vector<int> out(map.size());
  for (int i = 0; i < size(); ++i) out[static_cast<size_t>(i)] = (*this)(other(i));
  return Permutation(std::move(out));
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(static_cast<size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation Permutation::random(int n, Rng& rng) {
  std::vector<int> m(static_cast<size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(m[static_cast<size_t>(i)], m[static_cast<size_t>(j)]);
  }
  return Permutation(std::move(m));
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Eigen::MatrixXcd diff =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return diff.cwiseAbs().maxCoeff() < tol;
}

BasisSet gram_schmidt(const std::vector<Eigen::VectorXcd>& vectors) {
  const int m = static_cast<int>(vectors.size());
  if (m == 0) throw DimensionMismatch("empty input set");
  for (const auto& v : vectors)
    if (v.size() != m)
      throw DimensionMismatch("vector dimension must equal the set size");
  if (m > kMaxDim) throw TooLarge("dimension exceeds the dense cap");

  std::vector<Eigen::VectorXcd> out;
  out.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXcd v = vectors[static_cast<size_t>(i)];
    // Two projection passes for numerical stability.
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) v -= out[static_cast<size_t>(j)].dot(v) * out[static_cast<size_t>(j)];
    const double norm = v.norm();
    if (norm < kLinDepTol)
      throw LinearDependence("input vectors are linearly dependent");
    out.push_back(v / norm);
  }

  std::vector<StateVec> states;
  states.reserve(out.size());
  for (auto& v : out) states.emplace_back(std::move(v));
  return BasisSet(std::move(states));
}

Eigen::MatrixXcd permutation_unitary(const BasisSet& basis, const Permutation& perm) {
  if (perm.size() != basis.dim)
    throw DimensionMismatch("permutation length must equal the basis dimension");
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(basis.dim, basis.dim);
  for (int j = 0; j < basis.dim; ++j)
    u += basis.vectors[static_cast<size_t>(perm(j))].amps *
         basis.vectors[static_cast<size_t>(j)].amps.adjoint();
  return u;
}

UnitaryFamily hermitian_family(const BasisSet& basis, int anchor) {
  const int m = basis.dim;
  if (anchor < 0 || anchor >= m) throw IndexOutOfRange("anchor index out of range");
  UnitaryFamily fam;
  fam.dim = m;
  fam.anchor_index = anchor;
  const auto& a = basis.vectors;
  for (int j = 0; j < m; ++j) {
    if (j == anchor) {
      fam.ops.push_back(Eigen::MatrixXcd::Identity(m, m));
      continue;
    }
    Eigen::MatrixXcd u = a[static_cast<size_t>(anchor)].amps * a[static_cast<size_t>(j)].amps.adjoint() +
                         a[static_cast<size_t>(j)].amps * a[static_cast<size_t>(anchor)].amps.adjoint();
    for (int k = 0; k < m; ++k)
      if (k != anchor && k != j)
        u += a[static_cast<size_t>(k)].amps * a[static_cast<size_t>(k)].amps.adjoint();
    fam.ops.push_back(std::move(u));
  }
  return fam;
}

bool verify_orthogonal_family(const UnitaryFamily& family, const BasisSet& basis) {
  if (family.dim != basis.dim) throw DimensionMismatch("family/basis dimension mismatch");
  const Eigen::VectorXcd& ai = basis.vectors[static_cast<size_t>(family.anchor_index)].amps;
  for (int j = 0; j < family.dim; ++j)
    for (int k = 0; k < family.dim; ++k) {
      if (j == k) continue;
      const cx ip = (family.ops[static_cast<size_t>(j)] * ai).dot(family.ops[static_cast<size_t>(k)] * ai);
      if (std::abs(ip) >= kTol) return false;
    }
  return true;
}

std::pair<int, StateVec> measure(const StateVec& state, const BasisSet& basis, Rng& rng) {
  if (basis.dim != state.dim())
    throw DimensionMismatch("basis dimension must equal the state dimension");
  std::vector<double> probs(static_cast<size_t>(basis.dim));
  double total = 0.0;
  for (int j = 0; j < basis.dim; ++j) {
    const double p = std::norm(basis.vectors[static_cast<size_t>(j)].amps.dot(state.amps));
    probs[static_cast<size_t>(j)] = p;
    total += p;
  }
  const double r = uniform01(rng) * total;
  double acc = 0.0;
  int outcome = basis.dim - 1;
  for (int j = 0; j < basis.dim; ++j) {
    acc += probs[static_cast<size_t>(j)];
    if (r < acc) {
      outcome = j;
      break;
    }
  }
  return {outcome, basis.vectors[static_cast<size_t>(outcome)]};
}

std::pair<int, StateVec> measure_subset(const StateVec& state,
                                        const std::vector<int>& positions,
                                        const BasisSet& subset_basis, Rng& rng) {
  const int k = state.qubit_count;
  const int m = static_cast<int>(positions.size());
  if (m == 0) throw EmptySubset("measurement subset is empty");
  std::vector<bool> used(static_cast<size_t>(k), false);
  for (int p : positions) {
    if (p < 0 || p >= k) throw DimensionMismatch("qubit position out of range");
    if (used[static_cast<size_t>(p)]) throw DimensionMismatch("duplicate qubit position");
    used[static_cast<size_t>(p)] = true;
  }
  if (subset_basis.dim != (1 << m))
    throw DimensionMismatch("subset basis dimension mismatch");

  std::vector<int> rest;
  for (int q = 0; q < k; ++q)
    if (!used[static_cast<size_t>(q)]) rest.push_back(q);
  const int rest_dim = 1 << (k - m);

  // full amplitude index from (subset index s, rest index r)
  auto full_index = [&](int s, int r) {
    int idx = 0;
    for (int t = 0; t < m; ++t)
      idx |= bit_of(s, t, m) << (k - 1 - positions[static_cast<size_t>(t)]);
    for (int t = 0; t < k - m; ++t)
      idx |= bit_of(r, t, k - m) << (k - 1 - rest[static_cast<size_t>(t)]);
    return idx;
  };

  // coeff(j, r) = <b_j (x) r | psi>
  Eigen::MatrixXcd coeff(subset_basis.dim, rest_dim);
  for (int j = 0; j < subset_basis.dim; ++j) {
    const auto& b = subset_basis.vectors[static_cast<size_t>(j)].amps;
    for (int r = 0; r < rest_dim; ++r) {
      cx c = 0.0;
      for (int s = 0; s < subset_basis.dim; ++s)
        c += std::conj(b(s)) * state.amps(full_index(s, r));
      coeff(j, r) = c;
    }
  }

  std::vector<double> probs(static_cast<size_t>(subset_basis.dim));
  double total = 0.0;
  for (int j = 0; j < subset_basis.dim; ++j) {
    probs[static_cast<size_t>(j)] = coeff.row(j).squaredNorm();
    total += probs[static_cast<size_t>(j)];
  }
  const double r01 = uniform01(rng) * total;
  double acc = 0.0;
  int outcome = subset_basis.dim - 1;
  for (int j = 0; j < subset_basis.dim; ++j) {
    acc += probs[static_cast<size_t>(j)];
    if (r01 < acc) {
      outcome = j;
      break;
    }
  }

  const double amp_norm = std::sqrt(probs[static_cast<size_t>(outcome)]);
  Eigen::VectorXcd post = Eigen::VectorXcd::Zero(state.dim());
  const auto& b = subset_basis.vectors[static_cast<size_t>(outcome)].amps;
  for (int s = 0; s < subset_basis.dim; ++s)
    for (int r = 0; r < rest_dim; ++r)
      post(full_index(s, r)) = b(s) * coeff(outcome, r) / amp_norm;
  return {outcome, StateVec(std::move(post))};
}

DensityMatrix reduced_density(const StateVec& state, const std::vector<int>& keep) {
  const int k = state.qubit_count;
  const int m = static_cast<int>(keep.size());
  if (m == 0) throw EmptySubset("keep set is empty");
  std::vector<bool> used(static_cast<size_t>(k), false);
  for (int p : keep) {
    if (p < 0 || p >= k) throw DimensionMismatch("qubit position out of range");
    if (used[static_cast<size_t>(p)]) throw DimensionMismatch("duplicate qubit position");
    used[static_cast<size_t>(p)] = true;
  }
  std::vector<int> rest;
  for (int q = 0; q < k; ++q)
    if (!used[static_cast<size_t>(q)]) rest.push_back(q);
  const int keep_dim = 1 << m;
  const int rest_dim = 1 << (k - m);

  auto full_index = [&](int s, int r) {
    int idx = 0;
    for (int t = 0; t < m; ++t)
      idx |= bit_of(s, t, m) << (k - 1 - keep[static_cast<size_t>(t)]);
    for (int t = 0; t < k - m; ++t)
      idx |= bit_of(r, t, k - m) << (k - 1 - rest[static_cast<size_t>(t)]);
    return idx;
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(keep_dim, keep_dim);
  for (int i = 0; i < keep_dim; ++i)
    for (int j = 0; j < keep_dim; ++j) {
      cx sum = 0.0;
      for (int r = 0; r < rest_dim; ++r)
        sum += state.amps(full_index(i, r)) * std::conj(state.amps(full_index(j, r)));
      rho(i, j) = sum;
    }
  // Clean up Hermiticity drift before validation.
  rho = (rho + rho.adjoint().eval()) / 2.0;
  return DensityMatrix(std::move(rho));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries,
                                                     Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-14) s -= lam * std::log2(lam);
  }
  return std::max(0.0, s);
}

double holevo_bound(const std::vector<std::pair<double, DensityMatrix>>& ensemble) {
  if (ensemble.empty()) throw ProbabilityNotNormalized("empty ensemble");
  double psum = 0.0;
  const int dim = ensemble.front().second.dim();
  for (const auto& [p, rho] : ensemble) {
    if (p < -kTol) throw ProbabilityNotNormalized("negative probability");
    if (rho.dim() != dim) throw DimensionMismatch("ensemble dimension mismatch");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-10)
    throw ProbabilityNotNormalized("probabilities do not sum to 1");

  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
  double mean_entropy = 0.0;
  for (const auto& [p, rho] : ensemble) {
    if (p <= 0.0) continue;
    avg += p * rho.entries;
    mean_entropy += p * von_neumann_entropy(rho);
  }
  const double chi = von_neumann_entropy(DensityMatrix(std::move(avg))) - mean_entropy;
  return std::max(0.0, chi);
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw DimensionMismatch("concurrence requires a 4x4 density matrix");
  Eigen::MatrixXcd yy = Eigen::MatrixXcd::Zero(4, 4);
  // sigma_y (x) sigma_y
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::MatrixXcd rho_tilde = yy * rho.entries.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(rho.entries * rho_tilde, false);
  std::vector<double> lams;
  for (int i = 0; i < 4; ++i)
    lams.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(lams.begin(), lams.end(), std::greater<>());
  return std::max(0.0, lams[0] - lams[1] - lams[2] - lams[3]);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("trace distance dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries - sigma.entries,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum() / 2.0;
}

StateVec random_state(int qubits, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(1 << qubits);
  for (int i = 0; i < v.size(); ++i) v(i) = cx(gauss(rng), gauss(rng));
  v /= v.norm();
  return StateVec(std::move(v));
}

Eigen::MatrixXcd random_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXcd> cols;
  cols.reserve(static_cast<size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cx(gauss(rng), gauss(rng));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& c : cols) v -= c.dot(v) * c;
    cols.push_back(v / v.norm());
  }
  Eigen::MatrixXcd u(dim, dim);
  for (int j = 0; j < dim; ++j) u.col(j) = cols[static_cast<size_t>(j)];
  return u;
}

BasisSet random_basis(int n, Rng& rng) {
  const int dim = 1 << n;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXcd> vecs;
  vecs.reserve(static_cast<size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cx(gauss(rng), gauss(rng));
    vecs.push_back(std::move(v));
  }
  return gram_schmidt(vecs);
}

BasisSet basis_from_json(const nlohmann::json& doc) {
  const int n = doc.at("n").get<int>();
  if (n < 1 || (1 << n) > kMaxDim) throw ConfigInvalid("basis qubit count out of range");
  const int dim = 1 << n;
  const auto& rows = doc.at("vectors");
  if (static_cast<int>(rows.size()) != dim)
    throw ConfigInvalid("basis vector count must equal 2^n");
  std::vector<Eigen::VectorXcd> vecs;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim)
      throw ConfigInvalid("basis vector has wrong dimension");
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i)
      v(i) = cx(row[static_cast<size_t>(i)][0].get<double>(), row[static_cast<size_t>(i)][1].get<double>());
    vecs.push_back(std::move(v));
  }
  const bool orthonormal = doc.value("orthonormal", true);
  if (!orthonormal) return gram_schmidt(vecs);
  std::vector<StateVec> states;
  for (auto& v : vecs) states.emplace_back(std::move(v));
  return BasisSet(std::move(states));
}

nlohmann::json basis_to_json(const BasisSet& basis, bool orthonormal) {
  nlohmann::json doc;
  doc["n"] = basis.qubit_count();
  doc["orthonormal"] = orthonormal;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& v : basis.vectors) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < v.dim(); ++i)
      row.push_back({v.amps(i).real(), v.amps(i).imag()});
    rows.push_back(std::move(row));
  }
  doc["vectors"] = std::move(rows);
  return doc;
}

}  // namespace orthosim
