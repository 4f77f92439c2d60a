#include "orthosim/registry.hpp"

#include <algorithm>

namespace orthosim {

namespace {

inline int bit_of(int index, int pos, int k) { return (index >> (k - 1 - pos)) & 1; }

// Applies a unitary on the given qubit positions of a state.
StateVec apply_on_positions(const StateVec& state, const std::vector<int>& positions,
                            const Eigen::MatrixXcd& u) {
  const int k = state.qubit_count;
  const int m = static_cast<int>(positions.size());
  const int sub_dim = 1 << m;
  if (u.rows() != sub_dim || u.cols() != sub_dim)
    throw DimensionMismatch("unitary dimension does not match the target qubits");
  std::vector<bool> used(static_cast<size_t>(k), false);
  for (int p : positions) used[static_cast<size_t>(p)] = true;
  std::vector<int> rest;
  for (int q = 0; q < k; ++q)
    if (!used[static_cast<size_t>(q)]) rest.push_back(q);
  const int rest_dim = 1 << (k - m);

  auto full_index = [&](int s, int r) {
    int idx = 0;
    for (int t = 0; t < m; ++t)
      idx |= bit_of(s, t, m) << (k - 1 - positions[static_cast<size_t>(t)]);
    for (int t = 0; t < k - m; ++t)
      idx |= bit_of(r, t, k - m) << (k - 1 - rest[static_cast<size_t>(t)]);
    return idx;
  };

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.dim());
  Eigen::VectorXcd sub(sub_dim);
  for (int r = 0; r < rest_dim; ++r) {
    for (int s = 0; s < sub_dim; ++s) sub(s) = state.amps(full_index(s, r));
    const Eigen::VectorXcd mapped = u * sub;
    for (int s = 0; s < sub_dim; ++s) out(full_index(s, r)) = mapped(s);
  }
  return StateVec(std::move(out));
}

}  // namespace

const char* holder_name(Holder h) {
  switch (h) {
    case Holder::alice: return "alice";
    case Holder::in_transit: return "in_transit";
    case Holder::bob: return "bob";
    case Holder::eve: return "eve";
  }
  return "?";
}

std::vector<ParticleId> Ledger::create_block(const StateVec& state, Holder owner) {
  Block blk;
  blk.state = state;
  for (int i = 0; i < state.qubit_count; ++i) {
    const ParticleId id = next_id_++;
    blk.particles.push_back(id);
    owner_[id] = owner;
    block_index_[id] = blocks_.size();
  }
  std::vector<ParticleId> ids = blk.particles;
  blocks_.push_back(std::move(blk));
  return ids;
}

void Ledger::transfer(const std::vector<ParticleId>& ids, Holder to) {
  for (ParticleId id : ids)
    if (!owner_.count(id)) throw UnknownParticle("unknown particle id");
  for (ParticleId id : ids) owner_[id] = to;
}

Holder Ledger::owner(ParticleId id) const {
  auto it = owner_.find(id);
  if (it == owner_.end()) throw UnknownParticle("unknown particle id");
  return it->second;
}

const Block& Ledger::block_of(ParticleId id) const {
  auto it = block_index_.find(id);
  if (it == block_index_.end()) throw UnknownParticle("unknown particle id");
  return blocks_[it->second];
}

std::vector<ParticleId> Ledger::all_particles() const {
  std::vector<ParticleId> ids;
  for (const auto& blk : blocks_)
    ids.insert(ids.end(), blk.particles.begin(), blk.particles.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

void Ledger::reindex() {
  block_index_.clear();
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (ParticleId id : blocks_[b].particles) block_index_[id] = b;
}

std::pair<std::size_t, std::vector<int>> Ledger::merge_for(
    const std::vector<ParticleId>& ids) {
  std::vector<std::size_t> involved;
  for (ParticleId id : ids) {
    auto it = block_index_.find(id);
    if (it == block_index_.end()) throw UnknownParticle("unknown particle id");
    if (std::find(involved.begin(), involved.end(), it->second) == involved.end())
      involved.push_back(it->second);
  }
  std::sort(involved.begin(), involved.end());

  std::size_t target = involved.front();
  if (involved.size() > 1) {
    Block merged = blocks_[target];
    for (std::size_t i = 1; i < involved.size(); ++i) {
      const Block& other = blocks_[involved[i]];
      merged.state = tensor(merged.state, other.state);
      merged.particles.insert(merged.particles.end(), other.particles.begin(),
                              other.particles.end());
    }
    // Remove the absorbed blocks (highest index first).
    for (std::size_t i = involved.size(); i-- > 1;)
      blocks_.erase(blocks_.begin() + static_cast<std::ptrdiff_t>(involved[i]));
    blocks_[target] = std::move(merged);
    reindex();
  }

  const Block& blk = blocks_[target];
  std::vector<int> positions;
  for (ParticleId id : ids) {
    const auto it = std::find(blk.particles.begin(), blk.particles.end(), id);
    positions.push_back(static_cast<int>(it - blk.particles.begin()));
  }
  return {target, positions};
}

void Ledger::resplit(std::size_t block_index) {
  // Greedy prefix factorization in particle order.
  bool changed = true;
  while (changed) {
    changed = false;
    Block& blk = blocks_[block_index];
    const int k = blk.state.qubit_count;
    if (k <= 1) break;
    for (int len = 1; len < k && !changed; ++len) {
      const int rows = 1 << len;
      const int cols = 1 << (k - len);
      Eigen::MatrixXcd a(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = blk.state.amps(i * cols + j);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv.size() < 2 || sv(1) < 1e-10) {
        // rank one: a = s0 * u v^H
        StateVec prefix{Eigen::VectorXcd(svd.matrixU().col(0))};
        StateVec suffix{Eigen::VectorXcd(sv(0) * svd.matrixV().col(0).conjugate())};
        Block head;
        head.particles.assign(blk.particles.begin(), blk.particles.begin() + len);
        head.state = std::move(prefix);
        Block tail;
        tail.particles.assign(blk.particles.begin() + len, blk.particles.end());
        tail.state = std::move(suffix);
        blocks_[block_index] = std::move(tail);
        blocks_.push_back(std::move(head));
        reindex();
        changed = true;
      }
    }
  }
}

int Ledger::measure_particles(const std::vector<ParticleId>& ids, const BasisSet& basis,
                              Rng& rng) {
  auto [bidx, positions] = merge_for(ids);
  auto [outcome, post] = measure_subset(blocks_[bidx].state, positions, basis, rng);
  blocks_[bidx].state = std::move(post);
  resplit(bidx);
  return outcome;
}

void Ledger::apply_joint_unitary(const std::vector<ParticleId>& ids,
                                 const Eigen::MatrixXcd& u) {
  auto [bidx, positions] = merge_for(ids);
  blocks_[bidx].state = apply_on_positions(blocks_[bidx].state, positions, u);
}

DensityMatrix Ledger::marginal(const std::vector<ParticleId>& ids) const {
  // Work on a copy so the merge does not disturb the ledger.
  Ledger scratch = *this;
  auto [bidx, positions] = scratch.merge_for(ids);
  return reduced_density(scratch.blocks_[bidx].state, positions);
}

nlohmann::json Ledger::snapshot() const {
  nlohmann::json doc;
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& blk : blocks_) {
    nlohmann::json b;
    b["particles"] = blk.particles;
    nlohmann::json amps = nlohmann::json::array();
    for (int i = 0; i < blk.state.dim(); ++i)
      amps.push_back({blk.state.amps(i).real(), blk.state.amps(i).imag()});
    b["amplitudes"] = std::move(amps);
    blocks.push_back(std::move(b));
  }
  doc["blocks"] = std::move(blocks);
  nlohmann::json owners;
  for (ParticleId id : all_particles())
    owners[std::to_string(id)] = holder_name(owner(id));
  doc["ownership"] = std::move(owners);
  return doc;
}

TransportSequence permute_transport(const TransportSequence& seq,
                                    const Permutation& perm) {
  if (perm.size() != static_cast<int>(seq.size()))
    throw DimensionMismatch("permutation length must equal the sequence length");
  TransportSequence out(seq.size());
  for (int i = 0; i < perm.size(); ++i) out[static_cast<size_t>(perm(i))] = seq[static_cast<size_t>(i)];
  return out;
}

}  // namespace orthosim
