#include "orthosim/harness.hpp"

#include <numeric>
#include <sstream>

namespace orthosim {

Rational::Rational(long long n, long long d) {
  if (d == 0) throw ConfigInvalid("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  num = g == 0 ? n : n / g;
  den = g == 0 ? d : d / g;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational eta1(long long c, long long q) {
  if (q <= 0) throw ConfigInvalid("qubit count must be positive");
  if (c < 0) throw ConfigInvalid("message bit count must be nonnegative");
  return Rational(c, q);
}

Rational eta2(long long c, long long q, long long b) {
  if (q + b <= 0) throw ConfigInvalid("q + b must be positive");
  if (c < 0) throw ConfigInvalid("message bit count must be nonnegative");
  return Rational(c, q + b);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master ^ index;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw ConfigInvalid("trials must be at least 1");
  const long long msg_bits =
      static_cast<long long>(spec.config.n) * spec.config.copies;
  if (spec.message &&
      static_cast<long long>(spec.message->size()) != msg_bits)
    throw ConfigInvalid("message length must equal copies * n");

  ExperimentResult result;
  double error_sum = 0.0;
  for (int t = 0; t < spec.trials; ++t) {
    Rng rng(derive_seed(spec.config.seed, static_cast<std::uint64_t>(t)));
    std::vector<int> message;
    if (spec.message) {
      message = *spec.message;
    } else {
      message.reserve(static_cast<size_t>(msg_bits));
      for (long long i = 0; i < msg_bits; ++i)
        message.push_back(static_cast<int>(rng() & 1));
    }
    RunReport report = run_protocol(spec.config, message, spec.attack, rng);

    ++result.stats.trials_run;
    if (report.aborted) {
      ++result.stats.aborts;
    } else if (report.decoded_bits && *report.decoded_bits == message) {
      ++result.stats.decode_successes;
    }
    error_sum += report.decoy_error_rate;
    result.messages.push_back(std::move(message));
    result.reports.push_back(std::move(report));
  }
  result.stats.mean_decoy_error_rate = error_sum / spec.trials;
  result.stats.detection_rate =
      static_cast<double>(result.stats.aborts) / spec.trials;
  return result;
}

nlohmann::json ExperimentResult::to_json() const {
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["trials_run"] = stats.trials_run;
  doc["aborts"] = stats.aborts;
  doc["decode_successes"] = stats.decode_successes;
  doc["mean_decoy_error_rate"] = stats.mean_decoy_error_rate;
  doc["detection_rate"] = stats.detection_rate;
  doc["mean_leakage_bits"] =
      stats.mean_leakage_bits ? nlohmann::json(*stats.mean_leakage_bits)
                              : nlohmann::json();
  nlohmann::json trials = nlohmann::json::array();
  for (std::size_t t = 0; t < reports.size(); ++t) {
    nlohmann::json row = reports[t].to_json();
    row["trial"] = t;
    row["message"] = bits_to_string(messages[t]);
    trials.push_back(std::move(row));
  }
  doc["trials"] = std::move(trials);
  return doc;
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream out;
  out << "trial,aborted,error_rate,decoded_ok,c,q,b\n";
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const RunReport& r = reports[t];
    const bool ok = !r.aborted && r.decoded_bits && *r.decoded_bits == messages[t];
    out << t << ',' << (r.aborted ? 1 : 0) << ',' << r.decoy_error_rate << ','
        << (ok ? 1 : 0) << ',' << r.c << ',' << r.q << ',' << r.b << '\n';
  }
  return out.str();
}

}  // namespace orthosim
