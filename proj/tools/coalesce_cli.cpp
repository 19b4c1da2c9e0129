// coalesce: command-line front end for the simulation and verification library.
//
// Exit status: 0 success, 1 usage error, 2 a built-in check failed.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "coalesce/experiment.hpp"
#include "coalesce/harness.hpp"
#include "coalesce/types.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coalescent, random graph and MST experiments"};
  app.require_subcommand(1);

  coalesce::ExperimentSpec spec;
  bool no_elapsed = false;
  std::map<std::string, CLI::App*> subs;

  const std::map<std::string, std::string> descriptions = {
      {"simulate", "One run of a coalescent (--kernel) or of the Erdos-Renyi process (--kernel er); CSV trace"},
      {"verify-exact", "Brute force vs shape DP vs closed forms for every kernel, n and k"},
      {"estimate-frieze", "Mean MST weight of K_n with uniform weights"},
      {"estimate-zmc", "Mean of (log Z_MC(n) - 2 n ln n) / n over the coupled graph process"},
      {"susceptibility-profile", "chi(G(n, c/n)) / n against alpha(c)^2"},
      {"integrals", "Quadrature of the zeta(3) and zeta_MC integrals"},
      {"heights", "Heights and depth of vertex 1 in final coalescent trees"},
  };

  for (const auto& name : coalesce::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    subs[name] = sub;
    sub->add_option("--seed", spec.seed, "Master seed")->capture_default_str();
    sub->add_option("--output,-o", spec.output, "Write to this file instead of stdout");
    sub->add_option("--threads", spec.threads, "Worker threads (default: COALESCE_THREADS or all cores)");
    sub->add_option("--format", spec.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_flag("--no-elapsed", no_elapsed, "Omit elapsed_seconds from JSON output");
    if (name != "integrals" && name != "verify-exact") {
      sub->add_option("--n", spec.n, "Number of vertices")->check(CLI::PositiveNumber)->capture_default_str();
    }
    if (name == "estimate-frieze" || name == "estimate-zmc" || name == "susceptibility-profile" || name == "heights") {
      sub->add_option("--reps", spec.reps, "Replicates")->check(CLI::PositiveNumber)->capture_default_str();
    }
    if (name == "simulate" || name == "heights") {
      sub->add_option("--kernel", spec.kernel, "kingman | additive | multiplicative" +
                                                   std::string(name == "simulate" ? " | er" : ""))
          ->capture_default_str();
    }
    if (name == "simulate") {
      sub->add_option("--record-every", spec.record_every, "Keep every k-th step of graph trajectories")
          ->check(CLI::PositiveNumber);
      sub->add_option("--m-max", spec.m_max, "Edges to add in the graph process (0: until connected)");
    }
    if (name == "verify-exact") {
      sub->add_option("--n-max", spec.n_max, "Largest n checked")->check(CLI::Range(2, 60))->capture_default_str();
    }
    if (name == "susceptibility-profile") {
      sub->add_option("--c", spec.c, "Mean degrees c (p = c/n)")->delimiter(',');
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  for (const auto& [name, sub] : subs)
    if (sub->parsed()) spec.subcommand = name;
  if (spec.subcommand == "simulate" && !subs["simulate"]->count("--format")) spec.format = "csv";

  coalesce::RunOutput result;
  try {
    result = coalesce::run(spec);
  } catch (const coalesce::CoalesceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == coalesce::ErrorCode::InvalidArgument || e.code() == coalesce::ErrorCode::UnsupportedSize
               ? kExitUsage
               : kExitCheckFailed;
  }

  const std::string text = result.render(spec.format, !no_elapsed);
  if (spec.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(spec.output);
    if (!out) {
      std::cerr << "error: cannot open " << spec.output << '\n';
      return kExitUsage;
    }
    out << text;
  }
  return result.passed ? 0 : kExitCheckFailed;
}
