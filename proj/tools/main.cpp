// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include "bcdof/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace bcdof;
using namespace bcdof::cli;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ChannelSpec load_spec(const std::string& input, const std::string& dims, std::uint64_t seed, bool seed_given,
                      double power) {
  if (!input.empty()) {
    if (!dims.empty()) throw ValidationError("--input and --dims are mutually exclusive");
    return parse_channel_spec(read_file(input));
  }
  if (dims.empty() || !seed_given) throw ValidationError("need --input, or --dims together with --seed");
  ChannelSpec spec;
  spec.dims = parse_triple(dims, "--dims");
  spec.seed = seed;
  spec.power = power;
  validate(spec);
  return spec;
}

void emit(const Report& rep, const std::string& format, const std::string& output) {
  std::string text;
  if (format == "csv") {
    if (rep.csv.empty()) throw ValidationError("--format csv is only available for sweep");
    text = rep.csv;
  } else {
    text = rep.json.dump(2) + "\n";
  }
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + output + "'");
  out << text;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degrees-of-freedom toolkit for the two-user MIMO broadcast channel"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string format = "json";
  std::string dims;
  std::uint64_t seed = 0;
  double power = 1.0;
  Tolerances tol;

  const auto common = [&](CLI::App* sub, bool channel_input) {
    sub->add_option("--output", output, "Write the report here instead of stdout");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", tol.reconstruction, "Relative reconstruction tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--rank-tol", tol.rank, "Relative rank threshold")->check(CLI::NonNegativeNumber);
    sub->add_option("--slope-tol", tol.slope, "Per-component DoF slope tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "Generator seed");
    if (channel_input) {
      sub->add_option("--input", input, "Channel spec JSON file");
      sub->add_option("--dims", dims, "Generate a channel with dimensions t,r1,r2 (needs --seed)");
      sub->add_option("--power", power, "Power for a generated channel");
    }
  };

  auto* gsvd = app.add_subcommand("gsvd", "Generalized SVD of a channel pair");
  common(gsvd, true);

  auto* region = app.add_subcommand("region", "Exact DoF inner/outer regions");
  common(region, false);
  std::string sizes;
  std::string which = "both";
  region->add_option("--sizes", sizes, "|S1|,|Sc|,|S2|")->required();
  region->add_option("--which", which, "inner, outer or both")->check(CLI::IsMember({"inner", "outer", "both"}));

  auto* sweep = app.add_subcommand("sweep", "Rates over a power grid and DoF slope estimates");
  common(sweep, true);
  std::string params = "0,0,0";
  std::string powers = "1e6:1e12:3";
  std::string scheme = "dpc";
  sweep->add_option("--params", params, "alpha1,alpha2,beta");
  sweep->add_option("--powers", powers, "start:stop:count or a comma list");
  sweep->add_option("--scheme", scheme, "dpc or zf")->check(CLI::IsMember({"dpc", "zf"}));

  auto* verify = app.add_subcommand("verify", "End-to-end checks on random channels");
  common(verify, false);
  std::size_t trials = 10;
  std::string max_dims = "5,4,4";
  verify->add_option("--trials", trials, "Number of random channels");
  verify->add_option("--max-dims", max_dims, "Upper bounds for t,r1,r2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    Report rep;
    if (gsvd->parsed()) {
      rep = cmd_gsvd(load_spec(input, dims, seed, gsvd->count("--seed") > 0, power), tol);
    } else if (region->parsed()) {
      const auto s = parse_triple(sizes, "--sizes");
      rep = cmd_region(SetSizes{s[0], s[1], s[2]}, parse_which(which));
    } else if (sweep->parsed()) {
      const auto spec = load_spec(input, dims, seed, sweep->count("--seed") > 0, power);
      const auto p = parse_triple(params, "--params");
      rep = cmd_sweep(spec, rates::DofParams{p[0], p[1], p[2]}, parse_power_grid(powers), parse_scheme(scheme), tol);
    } else {
      rep = cmd_verify(trials, parse_triple(max_dims, "--max-dims"), seed, tol);
    }
    emit(rep, format, output);
    if (rep.exit_code != kExitOk) std::cerr << "check failed: " << rep.diagnostic << "\n";
    return rep.exit_code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ContractViolation& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
