#ifndef ORTHOSIM_REGISTRY_HPP
#define ORTHOSIM_REGISTRY_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "orthosim/qlinalg.hpp"

namespace orthosim {

using ParticleId = std::uint64_t;
using TransportSequence = std::vector<ParticleId>;

enum class Holder { alice, in_transit, bob, eve };

const char* holder_name(Holder h);

/// A group of particles carrying one joint pure state. The i-th particle is
/// qubit i of the state (qubit 0 = MSB of the amplitude index).
struct Block {
  std::vector<ParticleId> particles;
  StateVec state;
};

/// Global registry of particles in flight. Every particle belongs to exactly
/// one block; ownership tags are classical bookkeeping for attack windows.
class Ledger {
 public:
  /// Adds a block; returns fresh ids in qubit order.
  std::vector<ParticleId> create_block(const StateVec& state,
                                       Holder owner = Holder::alice);

  void transfer(const std::vector<ParticleId>& ids, Holder to);
  Holder owner(ParticleId id) const;

  /// Joint measurement of the listed particles in the given basis. Blocks are
  /// merged as needed; the residual is re-split into maximal product blocks
  /// (prefix bipartitions in particle order, Schmidt threshold 1e-10).
  int measure_particles(const std::vector<ParticleId>& ids, const BasisSet& basis,
                        Rng& rng);

  /// Applies a joint unitary to the listed particles (merging blocks first).
  void apply_joint_unitary(const std::vector<ParticleId>& ids,
                           const Eigen::MatrixXcd& u);

  /// Reduced density matrix of the listed particles.
  DensityMatrix marginal(const std::vector<ParticleId>& ids) const;

  const Block& block_of(ParticleId id) const;
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t particle_count() const { return owner_.size(); }
  std::vector<ParticleId> all_particles() const;

  /// Debug snapshot; not a stability-guaranteed format.
  nlohmann::json snapshot() const;

 private:
  std::vector<Block> blocks_;
  std::unordered_map<ParticleId, Holder> owner_;
  std::unordered_map<ParticleId, std::size_t> block_index_;
  ParticleId next_id_ = 1;

  // Merges all blocks containing any of ids into one; returns its index and
  // the qubit positions of ids within it (in the order requested).
  std::pair<std::size_t, std::vector<int>> merge_for(const std::vector<ParticleId>& ids);
  void resplit(std::size_t block_index);
  void reindex();
};

/// Physical send-order reshuffle: output[perm(i)] = input[i]. Pure classical
/// relabeling; quantum states are untouched.
TransportSequence permute_transport(const TransportSequence& seq,
                                    const Permutation& perm);

}  // namespace orthosim

#endif
