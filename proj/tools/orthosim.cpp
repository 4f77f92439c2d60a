#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orthosim/harness.hpp"

namespace {

using namespace orthosim;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("ORTHOSIM_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

BasisSet load_basis(const std::string& path, int n) {
  if (path.empty()) return BasisSet::computational(n);
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open basis file: " + path);
  nlohmann::json doc;
  in >> doc;
  BasisSet basis = basis_from_json(doc);
  if (basis.qubit_count() != n)
    throw ConfigInvalid("basis file qubit count does not match --n");
  return basis;
}

AttackModel parse_attack(const std::string& text) {
  if (!text.empty() && text.front() == '{')
    return AttackModel::from_json(nlohmann::json::parse(text));
  return AttackModel::preset(text);
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigInvalid("cannot open output file: " + out_path);
  out << payload;
}

struct RunFlags {
  std::string variant = "dsqc";
  int n = 1;
  int copies = 0;
  std::string message;
  std::string basis_file;
  std::string attack = "none";
  double delta = 0.0;
  int trials = 1;
  std::optional<std::uint64_t> seed;
  int anchor = 0;
  std::string output = "json";
  std::string out_path;
  bool strict = false;
};

int do_run(const RunFlags& f) {
  std::vector<int> message;
  int copies = f.copies;
  if (!f.message.empty()) {
    message = parse_message(f.message);
    if (copies == 0) {
      if (static_cast<int>(message.size()) % f.n != 0)
        throw ConfigInvalid("message length must be a multiple of n");
      copies = static_cast<int>(message.size()) / f.n;
    }
  }
  if (copies == 0) copies = 1;

  ExperimentSpec spec;
  spec.config = ProtocolConfig::make(f.n, copies, variant_from_name(f.variant),
                                     load_basis(f.basis_file, f.n), f.anchor,
                                     Permutation{}, f.delta, resolve_seed(f.seed));
  spec.attack = parse_attack(f.attack);
  spec.trials = f.trials;
  if (!message.empty()) spec.message = message;

  const ExperimentResult result = run_experiment(spec);

  std::string payload;
  if (f.output == "csv") {
    payload = result.to_csv();
  } else if (f.trials == 1) {
    nlohmann::json doc = result.reports[0].to_json();
    doc["message"] = bits_to_string(result.messages[0]);
    payload = doc.dump(2) + "\n";
  } else {
    payload = result.to_json().dump(2) + "\n";
  }
  emit(payload, f.out_path);
  return (f.strict && result.stats.aborts > 0) ? 1 : 0;
}

struct SweepFlags {
  std::string variant = "dsqc";
  int n = 1;
  std::vector<int> copies{1};
  std::vector<std::string> attacks{"none"};
  std::vector<double> deltas{0.0};
  int trials = 100;
  std::optional<std::uint64_t> seed;
  std::string basis_file;
  std::string output = "json";
  std::string out_path;
};

int do_sweep(const SweepFlags& f) {
  const std::uint64_t master = resolve_seed(f.seed);
  nlohmann::json rows = nlohmann::json::array();
  std::uint64_t cell = 0;
  for (int copies : f.copies)
    for (const auto& attack_name : f.attacks)
      for (double delta : f.deltas) {
        ExperimentSpec spec;
        spec.config = ProtocolConfig::make(f.n, copies, variant_from_name(f.variant),
                                           load_basis(f.basis_file, f.n), 0,
                                           Permutation{}, delta,
                                           derive_seed(master, cell++));
        spec.attack = parse_attack(attack_name);
        spec.trials = f.trials;
        const ExperimentResult result = run_experiment(spec);
        nlohmann::json row;
        row["variant"] = f.variant;
        row["n"] = f.n;
        row["copies"] = copies;
        row["attack"] = attack_name;
        row["delta"] = delta;
        row["trials"] = result.stats.trials_run;
        row["aborts"] = result.stats.aborts;
        row["detection_rate"] = result.stats.detection_rate;
        row["decode_successes"] = result.stats.decode_successes;
        row["mean_decoy_error_rate"] = result.stats.mean_decoy_error_rate;
        rows.push_back(std::move(row));
      }

  std::string payload;
  if (f.output == "csv") {
    std::ostringstream csv;
    csv << "variant,n,copies,attack,delta,trials,aborts,detection_rate,"
           "decode_successes,mean_decoy_error_rate\n";
    for (const auto& row : rows)
      csv << row["variant"].get<std::string>() << ',' << row["n"] << ','
          << row["copies"] << ',' << row["attack"].get<std::string>() << ','
          << row["delta"] << ',' << row["trials"] << ',' << row["aborts"] << ','
          << row["detection_rate"] << ',' << row["decode_successes"] << ','
          << row["mean_decoy_error_rate"] << '\n';
    payload = csv.str();
  } else {
    nlohmann::json doc;
    doc["schema"] = 1;
    doc["rows"] = std::move(rows);
    payload = doc.dump(2) + "\n";
  }
  emit(payload, f.out_path);
  return 0;
}

int do_efficiency(const std::string& variant_name_in, int n,
                  const std::string& out_path) {
  const Variant variant = variant_from_name(variant_name_in);
  const bool qsdc = variant == Variant::qsdc || variant == Variant::qsdc_gv;
  const long long c = n;
  const long long q = 2LL * n;
  const long long b = qsdc ? 0 : n;
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["variant"] = variant_name(variant);
  doc["c"] = c;
  doc["q"] = q;
  doc["b"] = b;
  doc["eta1"] = eta1(c, q).str();
  doc["eta2"] = eta2(c, q, b).str();
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

int do_diagnose_duality(int samples, std::optional<std::uint64_t> seed,
                        const std::string& out_path) {
  Rng rng(resolve_seed(seed));
  double max_dev = 0.0;
  for (int i = 0; i < samples; ++i) {
    const DualityReport r =
        duality_tradeoff({random_unitary(2, rng), random_unitary(2, rng)});
    max_dev = std::max(max_dev, std::abs(r.sum_check - 1.0));
  }
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["samples"] = samples;
  doc["max_deviation_from_identity"] = max_dev;
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

int do_diagnose_monogamy(int samples, std::optional<std::uint64_t> seed,
                         const std::string& out_path) {
  Rng rng(resolve_seed(seed));
  double min_slack = 1.0;
  for (int i = 0; i < samples; ++i)
    min_slack = std::min(min_slack, ckw_monogamy(random_state(3, rng)).slack);
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["samples"] = samples;
  doc["min_slack"] = min_slack;
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

int do_diagnose_leakage(int n, const std::string& basis_file,
                        const std::vector<int>& positions, int anchor,
                        const std::string& out_path) {
  ProtocolConfig cfg =
      ProtocolConfig::make(n, 1, Variant::dsqc, load_basis(basis_file, n), anchor,
                           Permutation{}, 0.0, 0);
  std::vector<int> eve_positions = positions.empty() ? std::vector<int>{0} : positions;
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["n"] = n;
  doc["eve_positions"] = eve_positions;
  doc["holevo_bits"] = eve_leakage(cfg, eve_positions);
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for orthogonal-state-based DSQC/QSDC protocols"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Execute protocol trials");
  run->add_option("--variant", rf.variant)->check(CLI::IsMember({"dsqc", "qsdc", "dsqc-gv", "qsdc-gv"}));
  run->add_option("--n", rf.n);
  run->add_option("--copies", rf.copies);
  run->add_option("--message", rf.message);
  run->add_option("--basis-file", rf.basis_file);
  run->add_option("--attack", rf.attack);
  run->add_option("--delta", rf.delta);
  run->add_option("--trials", rf.trials);
  run->add_option("--seed", rf.seed);
  run->add_option("--anchor", rf.anchor);
  run->add_option("--output", rf.output)->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", rf.out_path);
  run->add_flag("--strict", rf.strict);

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "Grid of experiments over N, attack, delta");
  sweep->add_option("--variant", sf.variant);
  sweep->add_option("--n", sf.n);
  sweep->add_option("--copies", sf.copies);
  sweep->add_option("--attack", sf.attacks);
  sweep->add_option("--delta", sf.deltas);
  sweep->add_option("--trials", sf.trials);
  sweep->add_option("--seed", sf.seed);
  sweep->add_option("--basis-file", sf.basis_file);
  sweep->add_option("--output", sf.output)->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--out", sf.out_path);

  std::string ev = "dsqc";
  int en = 1;
  std::string eout;
  auto* eff = app.add_subcommand("efficiency", "Analytic qubit-efficiency metrics");
  eff->add_option("--variant", ev);
  eff->add_option("--n", en);
  eff->add_option("--out", eout);

  auto* diag = app.add_subcommand("diagnose", "Security diagnostics");
  diag->require_subcommand(1);
  int dd_samples = 1000;
  std::optional<std::uint64_t> dd_seed;
  std::string dd_out;
  auto* dd = diag->add_subcommand("duality", "Which-way vs coherence identity");
  dd->add_option("--samples", dd_samples);
  dd->add_option("--seed", dd_seed);
  dd->add_option("--out", dd_out);

  int dm_samples = 1000;
  std::optional<std::uint64_t> dm_seed;
  std::string dm_out;
  auto* dm = diag->add_subcommand("monogamy", "Squared-concurrence monogamy slack");
  dm->add_option("--samples", dm_samples);
  dm->add_option("--seed", dm_seed);
  dm->add_option("--out", dm_out);

  int dl_n = 2;
  std::string dl_basis;
  std::vector<int> dl_positions;
  int dl_anchor = 0;
  std::string dl_out;
  auto* dl = diag->add_subcommand("leakage", "Holevo bound on Eve's marginals");
  dl->add_option("--n", dl_n);
  dl->add_option("--basis-file", dl_basis);
  dl->add_option("--positions", dl_positions);
  dl->add_option("--anchor", dl_anchor);
  dl->add_option("--out", dl_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(rf);
    if (*sweep) return do_sweep(sf);
    if (*eff) return do_efficiency(ev, en, eout);
    if (*dd) return do_diagnose_duality(dd_samples, dd_seed, dd_out);
    if (*dm) return do_diagnose_monogamy(dm_samples, dm_seed, dm_out);
    if (*dl) return do_diagnose_leakage(dl_n, dl_basis, dl_positions, dl_anchor, dl_out);
  } catch (const SimError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
