#include "orthosim/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace orthosim {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::dsqc: return "dsqc";
    case Variant::qsdc: return "qsdc";
    case Variant::dsqc_gv: return "dsqc-gv";
    case Variant::qsdc_gv: return "qsdc-gv";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "dsqc") return Variant::dsqc;
  if (name == "qsdc") return Variant::qsdc;
  if (name == "dsqc-gv" || name == "dsqc_gv") return Variant::dsqc_gv;
  if (name == "qsdc-gv" || name == "qsdc_gv") return Variant::qsdc_gv;
  throw ConfigInvalid("unknown variant: " + name);
}

ProtocolConfig ProtocolConfig::make(int n, int copies, Variant variant, BasisSet basis,
                                    int anchor, Permutation output_perm, double delta,
                                    std::uint64_t seed) {
  if (n < 1) throw ConfigInvalid("n must be positive");
  if ((1 << n) > kMaxDim) throw ConfigInvalid("2^n exceeds the dense cap");
  if (copies < 1) throw ConfigInvalid("copies must be positive");
  if (delta < 0.0 || delta >= 1.0) throw ConfigInvalid("delta must lie in [0,1)");
  const int m = 1 << n;
  if (basis.dim != m || basis.qubit_count() != n)
    throw ConfigInvalid("basis does not match n");
  if (anchor < 0 || anchor >= m) throw ConfigInvalid("anchor index out of range");
  if (output_perm.size() == 0) output_perm = Permutation::identity(m);
  if (output_perm.size() != m) throw ConfigInvalid("output permutation has wrong length");

  ProtocolConfig cfg;
  cfg.n = n;
  cfg.copies = copies;
  cfg.variant = variant;
  cfg.anchor = anchor;
  cfg.output_perm = output_perm;
  cfg.delta = delta;
  cfg.seed = seed;

  const UnitaryFamily sym = hermitian_family(basis, anchor);
  const Eigen::MatrixXcd relabel = permutation_unitary(basis, output_perm);
  cfg.family.dim = m;
  cfg.family.anchor_index = anchor;
  for (const auto& h : sym.ops) cfg.family.ops.push_back(relabel * h);
  cfg.basis = std::move(basis);

  if (!verify_orthogonal_family(cfg.family, cfg.basis))
    throw ConfigInvalid("encoding family fails the orthogonal-family condition");
  return cfg;
}

ProtocolConfig ProtocolConfig::from_json(const nlohmann::json& doc) {
  const int n = doc.at("n").get<int>();
  const int copies = doc.value("copies", 1);
  const Variant variant = variant_from_name(doc.value("variant", std::string("dsqc")));
  BasisSet basis = doc.contains("basis") ? basis_from_json(doc.at("basis"))
                                         : BasisSet::computational(n);
  const int anchor = doc.value("anchor", 0);
  Permutation perm;
  if (doc.contains("output_perm"))
    perm = Permutation(doc.at("output_perm").get<std::vector<int>>());
  const double delta = doc.value("delta", 0.0);
  const std::uint64_t seed = doc.value("seed", std::uint64_t{0});
  return make(n, copies, variant, std::move(basis), anchor, std::move(perm), delta, seed);
}

void Transcript::add(std::string sender, std::string purpose, long long bits) {
  if (bits < 0) throw ConfigInvalid("negative transcript bit count");
  entries.push_back({std::move(sender), std::move(purpose), bits});
}

long long Transcript::decoding_bits() const {
  long long total = 0;
  for (const auto& e : entries)
    if (e.purpose == "order_disclosure") total += e.bits;
  return total;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["decoded_bits"] =
      decoded_bits ? nlohmann::json(bits_to_string(*decoded_bits)) : nlohmann::json();
  doc["aborted"] = aborted;
  doc["decoy_error_rate"] = decoy_error_rate;
  doc["rounds"] = rounds;
  doc["c"] = c;
  doc["q"] = q;
  doc["b"] = b;
  doc["eve_leakage_bits"] =
      eve_leakage_bits ? nlohmann::json(*eve_leakage_bits) : nlohmann::json();
  return doc;
}

StateVec encode_block(const std::vector<int>& bits, const ProtocolConfig& config) {
  if (static_cast<int>(bits.size()) != config.n)
    throw DimensionMismatch("bit string length must equal n");
  int v = 0;
  for (int bit : bits) {
    if (bit != 0 && bit != 1) throw ConfigInvalid("message bits must be 0 or 1");
    v = (v << 1) | bit;
  }
  // XOR with the anchor index so the all-zeros string selects the identity
  // member of the family, independent of which basis state seeds the run.
  return StateVec(config.family.ops[static_cast<size_t>(v ^ config.anchor)] *
                  config.basis.vectors[static_cast<size_t>(config.anchor)].amps);
}

std::vector<int> decode_block(int outcome, const ProtocolConfig& config) {
  if (outcome < 0 || outcome >= config.m())
    throw IndexOutOfRange("outcome index out of range");
  const int v = config.output_perm.inverse()(outcome) ^ config.anchor;
  std::vector<int> bits(static_cast<size_t>(config.n));
  for (int t = 0; t < config.n; ++t) bits[static_cast<size_t>(t)] = (v >> (config.n - 1 - t)) & 1;
  return bits;
}

DressResult dress_with_decoys(const TransportSequence& message_seq,
                              const DecoySpec& spec, Rng& rng, Ledger& ledger) {
  if (spec.count != static_cast<int>(message_seq.size()))
    throw ConfigInvalid("decoy count must equal the message qubit count");
  DressResult out;

  TransportSequence decoy_ids;
  auto add_mub_single = [&]() {
    const int r = static_cast<int>(rng() % 4);
    const int basis = r >> 1;
    const int value = r & 1;
    StateVec d;
    if (basis == 0)
      d = StateVec::basis_state(1, value);
    else
      d = value == 0 ? StateVec::plus() : StateVec::minus();
    const auto ids = ledger.create_block(d);
    decoy_ids.push_back(ids[0]);
    out.mub_preps.push_back({ids[0], basis, value});
  };

  if (spec.kind == DecoyKind::mub_singles) {
    for (int i = 0; i < spec.count; ++i) add_mub_single();
  } else {
    const int pairs = spec.count / 2;
    for (int p = 0; p < pairs; ++p) {
      const auto ids = ledger.create_block(BasisSet::bell().vectors[0]);
      decoy_ids.push_back(ids[0]);
      decoy_ids.push_back(ids[1]);
      out.bell_pairs.emplace_back(ids[0], ids[1]);
    }
    // Odd remainder falls back to one conjugate-coded single.
    if (spec.count % 2 == 1) add_mub_single();
  }

  TransportSequence concat = message_seq;
  concat.insert(concat.end(), decoy_ids.begin(), decoy_ids.end());
  out.hidden = Permutation::random(static_cast<int>(concat.size()), rng);
  out.sequence = permute_transport(concat, out.hidden);
  for (int i = static_cast<int>(message_seq.size());
       i < static_cast<int>(concat.size()); ++i)
    out.decoy_positions.push_back(out.hidden(i));
  std::sort(out.decoy_positions.begin(), out.decoy_positions.end());
  return out;
}

double bb84_decoy_check(const std::vector<DecoyPrep>& preps,
                        const std::vector<int>& outcomes) {
  if (preps.size() != outcomes.size())
    throw DimensionMismatch("prep/outcome count mismatch");
  if (preps.empty()) return 0.0;
  int errors = 0;
  for (std::size_t i = 0; i < preps.size(); ++i)
    if (outcomes[i] != preps[i].value) ++errors;
  return static_cast<double>(errors) / static_cast<double>(preps.size());
}

double bell_decoy_check(const std::vector<std::pair<ParticleId, ParticleId>>& pairs,
                        const std::vector<int>& outcomes) {
  if (pairs.size() != outcomes.size())
    throw DimensionMismatch("pair/outcome count mismatch");
  if (pairs.empty()) return 0.0;
  int errors = 0;
  for (int outcome : outcomes)
    if (outcome != 0) ++errors;
  return static_cast<double>(errors) / static_cast<double>(pairs.size());
}

Decision threshold_decide(double error_rate, int checked_count, double delta) {
  if (checked_count <= 0) throw ConfigInvalid("checked count must be positive");
  return error_rate <= delta ? Decision::accept : Decision::abort_run;
}

namespace {

struct DecoyCheckOutcome {
  int errors = 0;
  int checked = 0;
};

// Bob measures each disclosed decoy in its preparation structure (prep basis
// for singles, Bell basis for pairs) and compares with Alice's record.
DecoyCheckOutcome measure_and_check_decoys(Ledger& ledger, const DressResult& dr,
                                           Rng& rng) {
  DecoyCheckOutcome out;
  if (!dr.mub_preps.empty()) {
    std::vector<int> outcomes;
    for (const auto& prep : dr.mub_preps) {
      const BasisSet basis = prep.basis == 0 ? BasisSet::zbasis() : BasisSet::xbasis();
      outcomes.push_back(ledger.measure_particles({prep.id}, basis, rng));
    }
    const double rate = bb84_decoy_check(dr.mub_preps, outcomes);
    out.errors += static_cast<int>(std::lround(rate * static_cast<double>(dr.mub_preps.size())));
    out.checked += static_cast<int>(dr.mub_preps.size());
  }
  if (!dr.bell_pairs.empty()) {
    const BasisSet bell = BasisSet::bell();
    std::vector<int> outcomes;
    for (const auto& [a, b] : dr.bell_pairs)
      outcomes.push_back(ledger.measure_particles({a, b}, bell, rng));
    const double rate = bell_decoy_check(dr.bell_pairs, outcomes);
    out.errors += static_cast<int>(std::lround(rate * static_cast<double>(dr.bell_pairs.size())));
    out.checked += static_cast<int>(dr.bell_pairs.size());
  }
  return out;
}

int position_bits(std::size_t sequence_length) {
  int bits = 0;
  while ((std::size_t{1} << bits) < sequence_length) ++bits;
  return bits;
}

}  // namespace

RunReport run_dsqc(const ProtocolConfig& config, const std::vector<int>& message,
                   const AttackModel& attack, Rng& rng) {
  if (config.is_qsdc()) throw ConfigInvalid("run_dsqc requires a dsqc variant");
  const int n = config.n;
  const int copies = config.copies;
  const long long msg_bits = static_cast<long long>(n) * copies;
  if (static_cast<long long>(message.size()) != msg_bits)
    throw ConfigInvalid("message length must equal copies * n");

  Ledger ledger;
  std::vector<std::vector<ParticleId>> block_ids;
  TransportSequence message_seq;
  for (int l = 0; l < copies; ++l) {
    std::vector<int> chunk(message.begin() + static_cast<long>(l) * n,
                           message.begin() + static_cast<long>(l + 1) * n);
    const auto ids = ledger.create_block(encode_block(chunk, config));
    block_ids.push_back(ids);
    message_seq.insert(message_seq.end(), ids.begin(), ids.end());
  }

  const DecoySpec spec{config.decoy_kind(), static_cast<int>(msg_bits)};
  const DressResult dr = dress_with_decoys(message_seq, spec, rng, ledger);

  RunReport report;
  report.rounds = 1;
  report.q = 2 * msg_bits;

  ledger.transfer(dr.sequence, Holder::in_transit);
  if (attack.only_round < 0 || attack.only_round == 1)
    apply_attack(attack, ledger, dr.sequence, rng, &config.basis);
  ledger.transfer(dr.sequence, Holder::bob);

  report.transcript.add("bob", "acknowledgment", 0);
  report.transcript.add("alice", "decoy_coordinates",
                        msg_bits * position_bits(dr.sequence.size()));

  const DecoyCheckOutcome check = measure_and_check_decoys(ledger, dr, rng);
  report.decoy_error_rate =
      check.checked == 0 ? 0.0
                         : static_cast<double>(check.errors) / static_cast<double>(check.checked);
  report.transcript.add("bob", "eavesdrop_check", check.checked);

  if (threshold_decide(report.decoy_error_rate, check.checked, config.delta) ==
      Decision::abort_run) {
    report.aborted = true;
    return report;
  }

  report.transcript.add("alice", "order_disclosure", msg_bits);
  std::vector<int> decoded;
  for (const auto& ids : block_ids) {
    const int outcome = ledger.measure_particles(ids, config.basis, rng);
    const auto bits = decode_block(outcome, config);
    decoded.insert(decoded.end(), bits.begin(), bits.end());
  }
  report.decoded_bits = std::move(decoded);
  report.c = msg_bits;
  report.b = report.transcript.decoding_bits();
  return report;
}

RunReport run_qsdc(const ProtocolConfig& config, const std::vector<int>& message,
                   const AttackModel& attack, Rng& rng) {
  if (!config.is_qsdc()) throw ConfigInvalid("run_qsdc requires a qsdc variant");
  const int n = config.n;
  const int copies = config.copies;
  const long long msg_bits = static_cast<long long>(n) * copies;
  if (static_cast<long long>(message.size()) != msg_bits)
    throw ConfigInvalid("message length must equal copies * n");

  Ledger ledger;
  std::vector<std::vector<ParticleId>> block_ids;
  for (int l = 0; l < copies; ++l) {
    std::vector<int> chunk(message.begin() + static_cast<long>(l) * n,
                           message.begin() + static_cast<long>(l + 1) * n);
    block_ids.push_back(ledger.create_block(encode_block(chunk, config)));
  }

  RunReport report;
  int total_errors = 0;
  int total_checked = 0;

  for (int s = 1; s <= n; ++s) {
    TransportSequence round_seq;
    for (int l = 0; l < copies; ++l)
      round_seq.push_back(block_ids[static_cast<size_t>(l)][static_cast<size_t>(s - 1)]);

    const DecoySpec spec{config.decoy_kind(), copies};
    const DressResult dr = dress_with_decoys(round_seq, spec, rng, ledger);

    report.rounds = s;
    report.q += 2LL * copies;

    ledger.transfer(dr.sequence, Holder::in_transit);
    if (attack.only_round < 0 || attack.only_round == s)
      apply_attack(attack, ledger, dr.sequence, rng, &config.basis);
    ledger.transfer(dr.sequence, Holder::bob);

    report.transcript.add("bob", "acknowledgment", 0);
    report.transcript.add("alice", "decoy_coordinates",
                          static_cast<long long>(copies) *
                              position_bits(dr.sequence.size()));

    const DecoyCheckOutcome check = measure_and_check_decoys(ledger, dr, rng);
    total_errors += check.errors;
    total_checked += check.checked;
    report.transcript.add("bob", "eavesdrop_check", check.checked);

    const double round_rate =
        check.checked == 0 ? 0.0
                           : static_cast<double>(check.errors) / static_cast<double>(check.checked);
    if (threshold_decide(round_rate, check.checked, config.delta) ==
        Decision::abort_run) {
      report.aborted = true;
      report.decoy_error_rate =
          static_cast<double>(total_errors) / static_cast<double>(total_checked);
      return report;
    }
  }

  report.decoy_error_rate =
      total_checked == 0 ? 0.0
                         : static_cast<double>(total_errors) / static_cast<double>(total_checked);
  std::vector<int> decoded;
  for (const auto& ids : block_ids) {
    const int outcome = ledger.measure_particles(ids, config.basis, rng);
    const auto bits = decode_block(outcome, config);
    decoded.insert(decoded.end(), bits.begin(), bits.end());
  }
  report.decoded_bits = std::move(decoded);
  report.c = msg_bits;
  report.b = report.transcript.decoding_bits();  // zero: no order disclosure
  return report;
}

RunReport run_protocol(const ProtocolConfig& config, const std::vector<int>& message,
                       const AttackModel& attack, Rng& rng) {
  return config.is_qsdc() ? run_qsdc(config, message, attack, rng)
                          : run_dsqc(config, message, attack, rng);
}

std::vector<int> parse_message(const std::string& text) {
  std::vector<int> bits;
  if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) {
    for (std::size_t i = 2; i < text.size(); ++i) {
      const char ch = text[i];
      int v;
      if (ch >= '0' && ch <= '9') v = ch - '0';
      else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
      else throw ConfigInvalid("invalid hex digit in message");
      for (int t = 3; t >= 0; --t) bits.push_back((v >> t) & 1);
    }
  } else {
    for (char ch : text) {
      if (ch != '0' && ch != '1') throw ConfigInvalid("invalid binary digit in message");
      bits.push_back(ch - '0');
    }
  }
  if (bits.empty()) throw ConfigInvalid("empty message");
  return bits;
}

std::string bits_to_string(const std::vector<int>& bits) {
  std::string out;
  out.reserve(bits.size());
  for (int bit : bits) out.push_back(bit ? '1' : '0');
  return out;
}

}  // namespace orthosim
