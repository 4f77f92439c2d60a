#ifndef ORTHOSIM_HARNESS_HPP
#define ORTHOSIM_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "orthosim/adversary.hpp"
#include "orthosim/protocol.hpp"

namespace orthosim {

/// Exact integer fraction, reduced with a canonical positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  bool operator==(const Rational& other) const = default;
  std::string str() const;  // "num/den", or "num" when den == 1
};

Rational eta1(long long c, long long q);
Rational eta2(long long c, long long q, long long b);

/// splitmix64 over master ^ index: independent yet reproducible trial seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct ExperimentSpec {
  ProtocolConfig config;
  AttackModel attack;
  int trials = 1;
  // Fixed message for every trial; random per trial when absent.
  std::optional<std::vector<int>> message;
};

struct TrialStats {
  int trials_run = 0;
  int aborts = 0;
  int decode_successes = 0;
  double mean_decoy_error_rate = 0.0;
  double detection_rate = 0.0;  // aborts / trials_run
  std::optional<double> mean_leakage_bits;
};

struct ExperimentResult {
  TrialStats stats;
  std::vector<RunReport> reports;
  std::vector<std::vector<int>> messages;  // per-trial sent message

  nlohmann::json to_json() const;
  std::string to_csv() const;  // trial, aborted, error_rate, decoded_ok, c, q, b
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace orthosim

#endif
