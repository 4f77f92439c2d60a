#ifndef ORTHOSIM_PROTOCOL_HPP
#define ORTHOSIM_PROTOCOL_HPP

#include <optional>
#include <string>
#include <vector>

#include "orthosim/adversary.hpp"
#include "orthosim/qlinalg.hpp"
#include "orthosim/registry.hpp"

namespace orthosim {

enum class Variant { dsqc, qsdc, dsqc_gv, qsdc_gv };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

enum class DecoyKind { mub_singles, bell_pairs };

struct DecoySpec {
  DecoyKind kind = DecoyKind::mub_singles;
  int count = 0;
};

/// Everything one protocol run needs: the code basis, the anchor state, the
/// output relabeling and the encoding family built from them.
struct ProtocolConfig {
  int n = 1;       // qubits per code block
  int copies = 1;  // N; message length is copies * n bits
  Variant variant = Variant::dsqc;
  BasisSet basis;
  int anchor = 0;
  Permutation output_perm;  // on M letters; defines |b_j> = |a_{perm(j)}>
  UnitaryFamily family;     // encoding unitaries, anchored at `anchor`
  double delta = 0.0;       // max tolerated decoy error fraction
  std::uint64_t seed = 0;

  int m() const { return 1 << n; }
  bool is_gv() const { return variant == Variant::dsqc_gv || variant == Variant::qsdc_gv; }
  bool is_qsdc() const { return variant == Variant::qsdc || variant == Variant::qsdc_gv; }
  DecoyKind decoy_kind() const {
    return is_gv() ? DecoyKind::bell_pairs : DecoyKind::mub_singles;
  }

  /// Builds the family as U_j = P_perm * H_j with H the symmetric family, so
  /// U_j|a_anchor> = |a_{perm(j)}>, and validates the whole configuration.
  static ProtocolConfig make(int n, int copies, Variant variant, BasisSet basis,
                             int anchor, Permutation output_perm, double delta,
                             std::uint64_t seed);
  static ProtocolConfig from_json(const nlohmann::json& doc);
};

struct TranscriptEntry {
  std::string sender;
  std::string purpose;  // decoy_coordinates | order_disclosure | acknowledgment | eavesdrop_check
  long long bits = 0;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;
  void add(std::string sender, std::string purpose, long long bits);
  /// Classical bits that count toward b (order disclosure only).
  long long decoding_bits() const;
};

struct RunReport {
  std::optional<std::vector<int>> decoded_bits;
  bool aborted = false;
  double decoy_error_rate = 0.0;
  int rounds = 0;
  long long c = 0;  // message bits delivered
  long long q = 0;  // qubits transmitted (message + decoy)
  long long b = 0;  // classical bits needed for decoding
  std::optional<double> eve_leakage_bits;
  Transcript transcript;

  nlohmann::json to_json() const;
};

/// Returns U_j|a_anchor> where j is the integer value of the bit string
/// (MSB first) under the all-zeros = U_1 assignment.
StateVec encode_block(const std::vector<int>& bits, const ProtocolConfig& config);

/// Inverse of the encoding map composed with the output relabeling: given the
/// outcome index of a measurement in the *code* basis {|a_m>}, returns the
/// encoded bits.
std::vector<int> decode_block(int outcome, const ProtocolConfig& config);

/// One prepared decoy qubit record (mub_singles): basis 0 = Z, 1 = X.
struct DecoyPrep {
  ParticleId id = 0;
  int basis = 0;
  int value = 0;
};

struct DressResult {
  TransportSequence sequence;   // P_B''
  Permutation hidden;           // known to Alice only
  std::vector<int> decoy_positions;  // positions of decoys within sequence
  std::vector<DecoyPrep> mub_preps;
  std::vector<std::pair<ParticleId, ParticleId>> bell_pairs;
};

/// DSQC3 / DSQC-GV3: prepares `spec.count` decoy qubits, concatenates them
/// after the message sequence and applies a fresh random permutation. For
/// bell_pairs with an odd count the last decoy is a mub single.
DressResult dress_with_decoys(const TransportSequence& message_seq,
                              const DecoySpec& spec, Rng& rng, Ledger& ledger);

double bb84_decoy_check(const std::vector<DecoyPrep>& preps,
                        const std::vector<int>& outcomes);

/// Outcomes are Bell-basis indices; an outcome != 0 (the |00>+|11> state) is
/// an error.
double bell_decoy_check(const std::vector<std::pair<ParticleId, ParticleId>>& pairs,
                        const std::vector<int>& outcomes);

enum class Decision { accept, abort_run };
Decision threshold_decide(double error_rate, int checked_count, double delta);

RunReport run_dsqc(const ProtocolConfig& config, const std::vector<int>& message,
                   const AttackModel& attack, Rng& rng);
RunReport run_qsdc(const ProtocolConfig& config, const std::vector<int>& message,
                   const AttackModel& attack, Rng& rng);

/// Dispatches on config.variant.
RunReport run_protocol(const ProtocolConfig& config, const std::vector<int>& message,
                       const AttackModel& attack, Rng& rng);

std::vector<int> parse_message(const std::string& text);  // binary or 0x-hex
std::string bits_to_string(const std::vector<int>& bits);

}  // namespace orthosim

#endif
