#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lab/checks.hpp"

using nlohmann::ordered_json;

namespace {

bool parse_pair(const std::string& s, std::complex<double>& out) {
  double re = 0, im = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf", &re, &im) != 2) return false;
  out = {re, im};
  return true;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_text(out_path, j.dump(2) + "\n");
}

std::string one_liner(const lab::CheckReport& rep) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %s  max_residual=%.3e  tol=%.1e",
                rep.name.c_str(), rep.pass ? "PASS" : "FAIL",
                rep.max_residual, rep.tolerance);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for an elliptic vertex model with open boundaries"};
  app.require_subcommand(1);

  lab::RunParams P;
  std::string tau_s, eta_s, out_path, config_path, check_name;
  std::string flow_kind = "rational";
  double dt = 1e-3;
  int steps = 1000;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", P.n, "number of colors");
    sub->add_option("--seed", P.seed, "sampling seed");
    sub->add_option("--samples", P.samples, "sample count (0 = check default)");
    sub->add_option("--tol", P.tol, "tolerance (0 = check default)");
    sub->add_option("--tau", tau_s, "modulus RE,IM");
    sub->add_option("--eta", eta_s, "vertex shift RE,IM (sets w = n*eta)");
    sub->add_option("--eps", P.eps, "boundary tie-in for degeneration checks");
    sub->add_option("--out", out_path, "write the JSON report here");
  };

  CLI::App* c_check = app.add_subcommand("check", "run one named check");
  c_check->add_option("name", check_name, "check name")->required();
  add_common(c_check);

  CLI::App* c_all = app.add_subcommand("all", "run every check in order");
  c_all->add_option("--config", config_path, "JSON file with default parameters");
  add_common(c_all);

  CLI::App* c_flow = app.add_subcommand("flow", "integrate a classical flow");
  c_flow->add_option("--kind", flow_kind, "hamiltonian family");
  c_flow->add_option("--n", P.n, "number of bodies");
  c_flow->add_option("--seed", P.seed, "initial data seed");
  c_flow->add_option("--dt", dt, "step size");
  c_flow->add_option("--steps", steps, "step count");
  c_flow->add_option("--out", out_path, "trajectory CSV path");

  CLI11_PARSE(app, argc, argv);

  // command-line flags win over the config file
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "cannot read config: " << config_path << "\n";
      return 2;
    }
    ordered_json cfg = ordered_json::parse(f, nullptr, false);
    if (cfg.is_discarded()) {
      std::cerr << "config is not valid JSON: " << config_path << "\n";
      return 2;
    }
    CLI::App* sub = c_all;
    if (cfg.contains("n") && !sub->count("--n")) P.n = cfg["n"].get<int>();
    if (cfg.contains("seed") && !sub->count("--seed"))
      P.seed = cfg["seed"].get<unsigned long long>();
    if (cfg.contains("samples") && !sub->count("--samples"))
      P.samples = cfg["samples"].get<int>();
    if (cfg.contains("tol") && !sub->count("--tol")) P.tol = cfg["tol"].get<double>();
    if (cfg.contains("eps") && !sub->count("--eps")) P.eps = cfg["eps"].get<double>();
    if (cfg.contains("tau") && !sub->count("--tau"))
      P.tau = {cfg["tau"][0].get<double>(), cfg["tau"][1].get<double>()};
    if (cfg.contains("eta") && !sub->count("--eta")) {
      const std::complex<double> eta{cfg["eta"][0].get<double>(),
                                     cfg["eta"][1].get<double>()};
      P.w = double(P.n) * eta;
    }
  }
  if (!tau_s.empty() && !parse_pair(tau_s, P.tau)) {
    std::cerr << "--tau expects RE,IM\n";
    return 2;
  }
  if (!eta_s.empty()) {
    std::complex<double> eta;
    if (!parse_pair(eta_s, eta)) {
      std::cerr << "--eta expects RE,IM\n";
      return 2;
    }
    P.w = double(P.n) * eta;
  }

  if (c_check->parsed()) {
    if (!lab::find_check(check_name)) {
      std::cerr << "unknown check: " << check_name << "\n";
      return 2;
    }
    try {
      const lab::CheckReport rep = lab::run_check(check_name, P);
      std::cerr << one_liner(rep) << "\n";
      emit(rep.json(), out_path);
      return rep.pass ? 0 : 1;
    } catch (const lab::GuardFailure& e) {
      std::cerr << "degenerate parameters: " << e.what() << "\n";
      return 3;
    }
  }

  if (c_all->parsed()) {
    ordered_json agg;
    agg["reports"] = ordered_json::array();
    int passed = 0, failed = 0;
    ordered_json failed_names = ordered_json::array();
    for (const auto& [name, fn] : lab::check_table()) {
      try {
        const lab::CheckReport rep = lab::run_check(name, P);
        std::cerr << one_liner(rep) << "\n";
        agg["reports"].push_back(rep.json());
        if (rep.pass)
          ++passed;
        else {
          ++failed;
          failed_names.push_back(name);
        }
      } catch (const lab::GuardFailure& e) {
        std::cerr << name << " degenerate parameters: " << e.what() << "\n";
        ordered_json j;
        j["check"] = name;
        j["pass"] = false;
        j["error"] = std::string("degenerate parameters: ") + e.what();
        agg["reports"].push_back(j);
        ++failed;
        failed_names.push_back(name);
      }
    }
    agg["summary"]["passed"] = passed;
    agg["summary"]["failed"] = failed;
    agg["summary"]["failed_checks"] = failed_names;
    emit(agg, out_path);
    return failed == 0 ? 0 : 1;
  }

  // flow
  if (flow_kind != "rational") {
    std::cerr << "unknown flow kind: " << flow_kind << "\n";
    return 2;
  }
  if (out_path.empty()) out_path = "traj.csv";
  std::vector<double> x, p;
  lab::flow_initial_data(P.n, P.seed, x, p);
  try {
    const lab::FlowResult fr = lab::integrate_flow(
        lab::classical_fn(lab::ClassicalKind::RatH),
        lab::classical_fn(lab::ClassicalKind::RatPlus), x, p, dt, steps);
    write_text(out_path, lab::flow_csv(fr));
    std::fprintf(stderr,
                 "flow: %d steps, dt=%g, drift H=%.3e F2=%.3e P=%.3e -> %s\n",
                 steps, dt, fr.drift_H, fr.drift_F2, fr.drift_P,
                 out_path.c_str());
    return 0;
  } catch (const lab::GuardFailure& e) {
    std::cerr << "collision during flow: " << e.what() << "\n";
    return 3;
  }
}
