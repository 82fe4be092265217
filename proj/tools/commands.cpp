// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include "bcdof/dofregion.hpp"
#include "bcdof/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bcdof::cli {

namespace {

using nlohmann::json;

json envelope(const char* command, const json& inputs, const json& tolerances) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["inputs"] = inputs;
  j["inputs_digest"] = inputs_digest(inputs);
  j["tolerances"] = tolerances;
  return j;
}

json tolerances_json(const Tolerances& tol) {
  return {{"reconstruction_relative", tol.reconstruction},
          {"rank", tol.rank},
          {"slope", tol.slope},
          {"orthonormality", kOrthonormalityTol},
          {"pattern", kPatternTol},
          {"rate_agreement_bits", kRateAgreementBits}};
}

json sizes_json(const SetSizes& s) { return {{"s1", s.s1}, {"sc", s.sc}, {"s2", s.s2}}; }

json params_json(const rates::DofParams& p) {
  return {{"alpha1", p.alpha1}, {"alpha2", p.alpha2}, {"beta", p.beta}};
}

json spec_inputs(const ChannelSpec& spec) {
  json j = to_json(spec);
  if (spec.dims) j["generator"] = GaussianSource::kAlgorithm;
  return j;
}

struct ResidualCheck {
  matdecomp::GsvdResiduals raw;
  double relative1 = 0;
  double relative2 = 0;
  bool reconstruction_ok = false;
  bool orthonormality_ok = false;
  bool pattern_ok = false;
  bool ok() const { return reconstruction_ok && orthonormality_ok && pattern_ok; }
};

ResidualCheck check_residuals(const channel::MimoBcChannel& ch, const matdecomp::GsvdFactors& f,
                              const Tolerances& tol) {
  ResidualCheck c;
  c.raw = matdecomp::gsvd_residuals(ch.h1, ch.h2, f);
  c.relative1 = c.raw.reconstruction1 / (1.0 + ch.h1.norm());
  c.relative2 = c.raw.reconstruction2 / (1.0 + ch.h2.norm());
  c.reconstruction_ok = c.relative1 <= tol.reconstruction && c.relative2 <= tol.reconstruction;
  c.orthonormality_ok = std::max({c.raw.orthonormality0, c.raw.orthonormality1, c.raw.orthonormality2}) <=
                        kOrthonormalityTol;
  c.pattern_ok = c.raw.pattern <= kPatternTol;
  return c;
}

json residuals_json(const ResidualCheck& c) {
  return {{"reconstruction1", c.raw.reconstruction1},
          {"reconstruction2", c.raw.reconstruction2},
          {"reconstruction1_relative", c.relative1},
          {"reconstruction2_relative", c.relative2},
          {"orthonormality0", c.raw.orthonormality0},
          {"orthonormality1", c.raw.orthonormality1},
          {"orthonormality2", c.raw.orthonormality2},
          {"pattern", c.raw.pattern},
          {"reconstruction_ok", c.reconstruction_ok},
          {"orthonormality_ok", c.orthonormality_ok},
          {"pattern_ok", c.pattern_ok}};
}

// Rank from Eigen's SVD, kept apart from the in-house decomposition.
std::size_t oracle_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tol * sv(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  return static_cast<std::size_t>((sv.array() > cut).count());
}

struct SchemeRun {
  std::vector<std::pair<double, rates::RateTriple>> curve;
  rates::DofEstimate slopes;
  double agreement = 0; ///< worst |t x t rate - k x k rate| in bits, DPC only
};

SchemeRun run_scheme(channel::MimoBcChannel ch, const matdecomp::GsvdFactors& f, const rates::DofParams& params,
                     const std::vector<double>& powers, Scheme scheme) {
  SchemeRun run;
  for (double p : powers) {
    ch.power = p;
    const auto pch = channel::transform_channel(ch, f);
    rates::RateTriple r;
    if (scheme == Scheme::dpc) {
      const auto prof = rates::build_dpc_covariances(params, f, pch.partition, p);
      r = rates::dpc_rates(prof, ch.h1, ch.h2);
      const auto d = rates::dpc_rates_diagonal(prof, f);
      run.agreement = std::max({run.agreement, std::abs(r.r0 - d.r0), std::abs(r.r1 - d.r1), std::abs(r.r2 - d.r2)});
    } else {
      r = rates::zf_rates(params, pch, rates::equal_power_split(pch));
    }
    run.curve.emplace_back(p, r);
  }
  run.slopes = rates::estimate_dof(run.curve);
  return run;
}

bool slopes_match(const rates::DofEstimate& e, const std::array<std::size_t, 3>& target, double tol) {
  return std::abs(e.d0 - static_cast<double>(target[0])) <= tol &&
         std::abs(e.d1 - static_cast<double>(target[1])) <= tol &&
         std::abs(e.d2 - static_cast<double>(target[2])) <= tol;
}

bool slopes_in_outer(const dofregion::Polytope& outer, const rates::DofEstimate& e, double slack) {
  return dofregion::contains(outer, dofregion::Point{from_double(e.d0), from_double(e.d1), from_double(e.d2)},
                             from_double(slack));
}

json slopes_json(const rates::DofEstimate& e) { return {{"d0", e.d0}, {"d1", e.d1}, {"d2", e.d2}}; }

std::string fixed_csv(const std::vector<std::pair<double, rates::RateTriple>>& curve) {
  std::string out = "P,R0,R1,R2\n";
  char buf[160];
  for (const auto& [p, r] : curve) {
    std::snprintf(buf, sizeof buf, "%.10e,%.12f,%.12f,%.12f\n", p, r.r0, r.r1, r.r2);
    out += buf;
  }
  return out;
}

struct Tally {
  std::size_t passed = 0;
  std::size_t failed = 0;
  void add(bool ok) { ++(ok ? passed : failed); }
  json to_json() const { return {{"passed", passed}, {"failed", failed}}; }
};

} // namespace

std::string inputs_digest(const json& inputs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : inputs.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Report cmd_gsvd(const ChannelSpec& spec, const Tolerances& tol) {
  const auto ch = materialize(spec);
  const auto f = matdecomp::gsvd(ch.h1, ch.h2, tol.rank);
  const auto pch = channel::transform_channel(ch, f);
  const auto check = check_residuals(ch, f, tol);

  Report rep;
  rep.json = envelope("gsvd", spec_inputs(spec), tolerances_json(tol));
  json& res = rep.json["results"];
  res["k"] = f.k;
  res["p"] = f.p;
  res["s"] = f.s;
  res["sizes"] = sizes_json(pch.partition.sizes());
  res["zeta"] = pch.zeta;
  res["factors"] = {{"psi1", matrix_to_json(f.psi1)},     {"psi2", matrix_to_json(f.psi2)},
                    {"psi0", matrix_to_json(f.psi0)},     {"omega", matrix_to_json(f.omega)},
                    {"omega_inv", matrix_to_json(f.omega_inv)}, {"sigma1", matrix_to_json(f.sigma1)},
                    {"sigma2", matrix_to_json(f.sigma2)}};
  res["residuals"] = residuals_json(check);
  if (!check.ok()) {
    rep.exit_code = kExitCheckFailed;
    rep.diagnostic = "gsvd residuals exceed tolerance";
  }
  return rep;
}

Report cmd_region(const SetSizes& sizes, Which which) {
  Report rep;
  const json inputs = {{"sizes", sizes_json(sizes)},
                       {"which", which == Which::inner ? "inner" : which == Which::outer ? "outer" : "both"}};
  rep.json = envelope("region", inputs, json::object());
  json& res = rep.json["results"];
  if (which != Which::outer) res["inner"] = dofregion::to_json(dofregion::inner_region(sizes), true);
  if (which != Which::inner) res["outer"] = dofregion::to_json(dofregion::outer_region(sizes), true);
  if (which == Which::both) {
    const bool equal = dofregion::regions_equal(dofregion::inner_region(sizes), dofregion::outer_region(sizes));
    res["equal"] = equal;
    if (!equal) {
      rep.exit_code = kExitCheckFailed;
      rep.diagnostic = "inner and outer regions differ";
    }
  }
  return rep;
}

Report cmd_sweep(const ChannelSpec& spec, const rates::DofParams& params, const std::vector<double>& powers,
                 Scheme scheme, const Tolerances& tol) {
  if (powers.size() < 2) throw ValidationError("power grid needs at least two points");
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (!(powers[i] > 0) || !std::isfinite(powers[i]) || (i > 0 && powers[i] <= powers[i - 1])) {
      throw ValidationError("powers must be finite, positive and strictly increasing");
    }
  }
  const auto ch = materialize(spec);
  const auto f = matdecomp::gsvd(ch.h1, ch.h2, tol.rank);
  const auto sizes = channel::transform_channel(ch, f).partition.sizes();
  rates::validate(params, sizes);

  const auto run = run_scheme(ch, f, params, powers, scheme);
  const auto target = rates::target_dof(params, sizes);
  const bool match = slopes_match(run.slopes, target, tol.slope);
  const bool inside = slopes_in_outer(dofregion::outer_region(sizes), run.slopes, tol.slope);

  json inputs = {{"channel", spec_inputs(spec)},
                 {"params", params_json(params)},
                 {"powers", powers},
                 {"scheme", scheme == Scheme::dpc ? "dpc" : "zf"}};
  Report rep;
  rep.json = envelope("sweep", inputs, tolerances_json(tol));
  json& res = rep.json["results"];
  res["sizes"] = sizes_json(sizes);
  auto rows = json::array();
  for (const auto& [p, r] : run.curve) rows.push_back({{"P", p}, {"R0", r.r0}, {"R1", r.r1}, {"R2", r.r2}});
  res["rates"] = rows;
  res["slopes"] = slopes_json(run.slopes);
  res["target"] = {{"d0", target[0]}, {"d1", target[1]}, {"d2", target[2]}};
  res["within_tolerance"] = match;
  res["in_outer_region"] = inside;
  if (scheme == Scheme::dpc) res["rate_form_gap_bits"] = run.agreement;
  rep.csv = fixed_csv(run.curve);
  if (!match || !inside) {
    rep.exit_code = kExitCheckFailed;
    rep.diagnostic = !match ? "estimated slopes differ from the target DoF" : "estimated slopes leave the outer region";
  }
  return rep;
}

Report cmd_verify(std::size_t trials, const std::array<std::size_t, 3>& max_dims, std::uint64_t seed,
                  const Tolerances& tol) {
  if (trials == 0) throw ValidationError("trials must be at least 1");
  for (std::size_t d : max_dims) {
    if (d == 0) throw ValidationError("dimension bounds must be positive");
  }
  const std::vector<double> powers = {1e6, 1e9, 1e12};

  Tally gsvd_tally;
  Tally oracle_tally;
  Tally dpc_tally;
  Tally zf_tally;
  Tally agreement_tally;
  Tally membership_tally;
  std::size_t numerical = 0;
  auto failures = json::array();
  const auto fail = [&](const json& where, const std::string& check, const std::string& detail) {
    failures.push_back({{"where", where}, {"check", check}, {"detail", detail}});
  };

  GaussianSource master(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::array<std::size_t, 3> dims = {static_cast<std::size_t>(master.integer(1, max_dims[0])),
                                             static_cast<std::size_t>(master.integer(1, max_dims[1])),
                                             static_cast<std::size_t>(master.integer(1, max_dims[2]))};
    ChannelSpec spec;
    spec.dims = dims;
    spec.seed = master.integer(0, (1ULL << 53) - 1);
    const json where = {{"trial", trial}, {"spec", spec_inputs(spec)}};
    try {
      const auto ch = materialize(spec);
      const auto f = matdecomp::gsvd(ch.h1, ch.h2, tol.rank);
      const auto check = check_residuals(ch, f, tol);
      gsvd_tally.add(check.ok());
      if (!check.ok()) fail(where, "gsvd_residuals", residuals_json(check).dump());

      Matrix stacked(ch.h1.rows() + ch.h2.rows(), ch.h1.cols());
      stacked << ch.h1, ch.h2;
      const std::size_t k = oracle_rank(stacked, tol.rank);
      const std::size_t p = k - std::min(k, oracle_rank(ch.h1, tol.rank));
      const bool oracle_ok = f.k == k && f.p == p;
      oracle_tally.add(oracle_ok);
      if (!oracle_ok) {
        fail(where, "gsvd_constants",
             "k=" + std::to_string(f.k) + " p=" + std::to_string(f.p) + ", oracle k=" + std::to_string(k) +
                 " p=" + std::to_string(p));
      }

      const auto sizes = channel::transform_channel(ch, f).partition.sizes();
      const auto outer = dofregion::outer_region(sizes);
      for (const auto& params : rates::feasible_params(sizes)) {
        const auto target = rates::target_dof(params, sizes);
        json at = where;
        at["params"] = params_json(params);
        for (Scheme scheme : {Scheme::dpc, Scheme::zf}) {
          const auto run = run_scheme(ch, f, params, powers, scheme);
          const bool match = slopes_match(run.slopes, target, tol.slope);
          const bool inside = slopes_in_outer(outer, run.slopes, tol.slope);
          const char* name = scheme == Scheme::dpc ? "dpc" : "zf";
          (scheme == Scheme::dpc ? dpc_tally : zf_tally).add(match);
          membership_tally.add(inside);
          if (!match) fail(at, std::string(name) + "_slopes", slopes_json(run.slopes).dump());
          if (!inside) fail(at, std::string(name) + "_membership", slopes_json(run.slopes).dump());
          if (scheme == Scheme::dpc) {
            const bool agree = run.agreement <= kRateAgreementBits;
            agreement_tally.add(agree);
            if (!agree) fail(at, "rate_form_agreement", std::to_string(run.agreement));
          }
        }
      }
    } catch (const NumericalFailure& e) {
      ++numerical;
      fail(where, "numerical_failure", e.what());
    }
  }

  Tally region_tally;
  for (std::size_t a = 0; a <= 3; ++a) {
    for (std::size_t b = 0; b <= 3; ++b) {
      for (std::size_t c = 0; c <= 3; ++c) {
        const SetSizes s{a, b, c};
        const bool eq = dofregion::regions_equal(dofregion::inner_region(s), dofregion::outer_region(s));
        region_tally.add(eq);
        if (!eq) fail({{"sizes", sizes_json(s)}}, "region_equality", "inner and outer regions differ");
      }
    }
  }

  const auto st = dofregion::replay_equivalence_chain();
  const bool replay_ok = dofregion::same_set(st.reduced, st.outer) &&
                         st.reduced.inequalities().size() + 1 == st.t2_gone.inequalities().size();
  if (!replay_ok) fail(json::object(), "elimination_replay", "final system differs from the outer system");

  json inputs = {{"trials", trials}, {"max_dims", max_dims}, {"seed", seed},
                 {"powers", powers}, {"generator", GaussianSource::kAlgorithm}};
  Report rep;
  rep.json = envelope("verify", inputs, tolerances_json(tol));
  json& res = rep.json["results"];
  res["gsvd_residuals"] = gsvd_tally.to_json();
  res["gsvd_constants"] = oracle_tally.to_json();
  res["dpc_slopes"] = dpc_tally.to_json();
  res["zf_slopes"] = zf_tally.to_json();
  res["rate_form_agreement"] = agreement_tally.to_json();
  res["outer_membership"] = membership_tally.to_json();
  res["region_equality"] = region_tally.to_json();
  res["elimination_replay"] = replay_ok;
  res["numerical_failures"] = numerical;
  res["failures"] = failures;
  res["passed"] = failures.empty();
  if (numerical > 0) {
    rep.exit_code = kExitNumerical;
  } else if (!failures.empty()) {
    rep.exit_code = kExitCheckFailed;
  }
  if (!failures.empty()) {
    rep.diagnostic = std::to_string(failures.size()) + " failed check(s); first: " +
                     failures.front()["check"].get<std::string>() + " at " + failures.front()["where"].dump() +
                     ": " + failures.front()["detail"].get<std::string>();
  }
  return rep;
}

std::array<std::size_t, 3> parse_triple(const std::string& text, const char* what) {
  std::array<std::size_t, 3> out{};
  std::stringstream ss(text);
  std::string item;
  std::size_t n = 0;
  while (std::getline(ss, item, ',')) {
    if (n == 3 || item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw ValidationError(std::string(what) + " must be three non-negative integers 'a,b,c', got '" + text + "'");
    }
    out[n++] = std::stoull(item);
  }
  if (n != 3) throw ValidationError(std::string(what) + " must be three non-negative integers 'a,b,c', got '" + text + "'");
  return out;
}

std::vector<double> parse_power_grid(const std::string& text) {
  const auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ValidationError("bad power value '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3 || text.back() == ':') {
      throw ValidationError("power grid must be 'start:stop:count', got '" + text + "'");
    }
    const std::string& a = parts[0];
    const std::string& b = parts[1];
    const std::string& n = parts[2];
    const double lo = number(a);
    const double hi = number(b);
    if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos) {
      throw ValidationError("power grid count must be a positive integer, got '" + n + "'");
    }
    const std::size_t count = std::stoull(n);
    if (count < 2) throw ValidationError("power grid needs at least two points");
    if (!(lo > 0) || !(hi > lo)) throw ValidationError("power grid needs 0 < start < stop");
    for (std::size_t i = 0; i < count; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(i + 1 == count ? hi : lo * std::pow(hi / lo, frac));
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
  }
  if (out.size() < 2) throw ValidationError("power grid needs at least two points");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0) || !std::isfinite(out[i]) || (i > 0 && out[i] <= out[i - 1])) {
      throw ValidationError("powers must be finite, positive and strictly increasing");
    }
  }
  return out;
}

Which parse_which(const std::string& text) {
  if (text == "inner") return Which::inner;
  if (text == "outer") return Which::outer;
  if (text == "both") return Which::both;
  throw ValidationError("--which must be inner, outer or both");
}

Scheme parse_scheme(const std::string& text) {
  if (text == "dpc") return Scheme::dpc;
  if (text == "zf") return Scheme::zf;
  throw ValidationError("--scheme must be dpc or zf");
}

} // namespace bcdof::cli
