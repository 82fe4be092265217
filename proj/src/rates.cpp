// SPDX-License-Identifier: Apache-2.0
#include "bcdof/rates.hpp"

#include "bcdof/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bcdof::rates {

namespace {

using Index = Eigen::Index;

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

double log2_ratio(const Matrix& num, const Matrix& den) {
  return std::max(0.0, 0.5 * (log2_det_identity_plus_gram(num) - log2_det_identity_plus_gram(den)));
}

RateTriple rates_from_generators(const Matrix& g0, const Matrix& g1, const Matrix& g2,
                                 const Matrix& h1, const Matrix& h2) {
  const Matrix g12 = hcat(g1, g2);
  const Matrix g012 = hcat(g0, g12);
  RateTriple out;
  const double r01 = log2_ratio(h1 * g012, h1 * g12);
  const double r02 = log2_ratio(h2 * g012, h2 * g12);
  out.r0 = std::min(r01, r02);
  out.r1 = log2_ratio(h1 * g12, h1 * g2);
  out.r2 = std::max(0.0, 0.5 * log2_det_identity_plus_gram(h2 * g2));
  return out;
}

Matrix psd_generator(const Matrix& k, const char* name) {
  const double scale = 1.0 + k.norm();
  if ((k - k.transpose()).norm() > 1e-10 * scale) {
    throw ContractViolation(std::string("dpc_rates: ") + name + " is not symmetric");
  }
  const Matrix sym = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector values = eig.eigenvalues();
  if (values.size() > 0 && values.minCoeff() < -1e-10 * scale) {
    throw ContractViolation(std::string("dpc_rates: ") + name + " is not positive semidefinite");
  }
  return eig.eigenvectors() * values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void check_sizes(const SetSizes& sizes, std::size_t k, const char* who) {
  if (sizes.total() != k) {
    throw ContractViolation(std::string(who) + ": partition covers " +
                            std::to_string(sizes.total()) + " sub-channels, expected " +
                            std::to_string(k));
  }
}

} // namespace

double gaussian_capacity(double x) { return 0.5 * std::log1p(x) / std::numbers::ln2; }

void validate(const DofParams& params, const SetSizes& sizes) {
  std::vector<std::string> violated;
  if (params.alpha1 + params.alpha2 > sizes.sc) {
    violated.push_back("alpha1 + alpha2 <= |Sc| (" + std::to_string(params.alpha1) + " + " +
                       std::to_string(params.alpha2) + " > " + std::to_string(sizes.sc) + ")");
  }
  const std::size_t beta_max = std::min(sizes.s1, sizes.s2);
  if (params.beta > beta_max) {
    violated.push_back("beta <= min(|S1|, |S2|) (" + std::to_string(params.beta) + " > " +
                       std::to_string(beta_max) + ")");
  }
  if (!violated.empty()) {
    std::string msg = "infeasible DoF parameters: violated ";
    for (std::size_t i = 0; i < violated.size(); ++i) {
      if (i > 0) msg += "; ";
      msg += violated[i];
    }
    throw ValidationError(msg);
  }
}

std::vector<DofParams> feasible_params(const SetSizes& sizes) {
  std::vector<DofParams> out;
  for (std::size_t a1 = 0; a1 <= sizes.sc; ++a1) {
    for (std::size_t a2 = 0; a1 + a2 <= sizes.sc; ++a2) {
      for (std::size_t b = 0; b <= std::min(sizes.s1, sizes.s2); ++b) out.push_back({a1, a2, b});
    }
  }
  return out;
}

std::array<std::size_t, 3> target_dof(const DofParams& params, const SetSizes& sizes) {
  validate(params, sizes);
  return {sizes.sc - params.alpha1 - params.alpha2 + params.beta,
          params.alpha1 + sizes.s1 - params.beta, params.alpha2 + sizes.s2 - params.beta};
}

LambdaPattern lambda_pattern(const DofParams& params, const SetSizes& sizes) {
  validate(params, sizes);
  const std::size_t k = sizes.total();
  const std::size_t private1_end = sizes.s1 + params.alpha1;
  const std::size_t private2_begin = sizes.s1 + sizes.sc - params.alpha2;
  const std::size_t lent2_begin = k - params.beta;
  LambdaPattern lp;
  lp.common.assign(k, 0);
  lp.private1.assign(k, 0);
  lp.private2.assign(k, 0);
  for (std::size_t l = 0; l < k; ++l) {
    if (l < params.beta) {
      lp.common[l] = 1;
    } else if (l < private1_end) {
      lp.private1[l] = 1;
    } else if (l < private2_begin) {
      lp.common[l] = 1;
    } else if (l < lent2_begin) {
      lp.private2[l] = 1;
    } else {
      lp.common[l] = 1;
    }
  }
  return lp;
}

CovarianceProfile build_dpc_covariances(const DofParams& params,
                                        const matdecomp::GsvdFactors& factors,
                                        const channel::SubchannelPartition& partition,
                                        double power) {
  if (!(power > 0)) throw ContractViolation("build_dpc_covariances: power must be positive");
  const SetSizes sizes = partition.sizes();
  check_sizes(sizes, factors.k, "build_dpc_covariances");
  if (sizes.s1 != factors.only_first() || sizes.sc != factors.s || sizes.s2 != factors.p) {
    throw ContractViolation("build_dpc_covariances: partition does not match the GSVD blocks");
  }
  const LambdaPattern lp = lambda_pattern(params, sizes);
  const auto k = static_cast<Index>(factors.k);

  CovarianceProfile prof;
  prof.power = power;
  prof.lambda0.resize(k);
  prof.lambda1.resize(k);
  prof.lambda2.resize(k);
  for (Index l = 0; l < k; ++l) {
    const auto i = static_cast<std::size_t>(l);
    prof.lambda0(l) = lp.common[i];
    prof.lambda1(l) = lp.private1[i];
    prof.lambda2(l) = lp.private2[i];
  }

  // psi0 [omega; 0]
  const Matrix basis = factors.psi0.leftCols(k) * factors.omega;
  const Vector lambda_sum = prof.lambda0 + prof.lambda1 + prof.lambda2;
  const double load = (basis.colwise().squaredNorm().transpose().array() * lambda_sum.array()).sum();
  prof.xi = load > 0 ? 1.0 / load : 0.0;

  const double amplitude = std::sqrt(prof.xi * power);
  prof.g0 = amplitude * basis * prof.lambda0.cwiseSqrt().asDiagonal();
  prof.g1 = amplitude * basis * prof.lambda1.cwiseSqrt().asDiagonal();
  prof.g2 = amplitude * basis * prof.lambda2.cwiseSqrt().asDiagonal();
  prof.k0 = prof.g0 * prof.g0.transpose();
  prof.k1 = prof.g1 * prof.g1.transpose();
  prof.k2 = prof.g2 * prof.g2.transpose();
  return prof;
}

double log2_det_identity_plus_gram(const Matrix& m) {
  const Index rows = m.rows();
  if (rows == 0) return 0.0;
  Matrix stacked(m.cols() + rows, rows);
  stacked << m.transpose(), Matrix::Identity(rows, rows);
  // R^T R = I + M M^T
  const Matrix r = matdecomp::qr(stacked).r;
  double acc = 0.0;
  for (Index i = 0; i < rows; ++i) acc += std::log2(std::abs(r(i, i)));
  return 2.0 * acc;
}

RateTriple dpc_rates(const Matrix& k0, const Matrix& k1, const Matrix& k2, const Matrix& h1,
                     const Matrix& h2) {
  const Index t = h1.cols();
  if (h2.cols() != t) throw ContractViolation("dpc_rates: H1 and H2 column counts differ");
  for (const Matrix* k : {&k0, &k1, &k2}) {
    if (k->rows() != t || k->cols() != t) {
      throw ContractViolation("dpc_rates: covariance must be " + std::to_string(t) + " x " +
                              std::to_string(t));
    }
  }
  return rates_from_generators(psd_generator(k0, "K0"), psd_generator(k1, "K1"),
                               psd_generator(k2, "K2"), h1, h2);
}

RateTriple dpc_rates(const CovarianceProfile& profile, const Matrix& h1, const Matrix& h2) {
  if (profile.g0.rows() != h1.cols() || h1.cols() != h2.cols()) {
    throw ContractViolation("dpc_rates: covariance generators do not match the channel");
  }
  return rates_from_generators(profile.g0, profile.g1, profile.g2, h1, h2);
}

RateTriple dpc_rates_diagonal(const CovarianceProfile& profile,
                              const matdecomp::GsvdFactors& factors) {
  const double scale = profile.xi * profile.power;
  const Vector gram1 = factors.sigma1.colwise().squaredNorm().transpose();
  const Vector gram2 = factors.sigma2.colwise().squaredNorm().transpose();
  const Vector all = profile.lambda0 + profile.lambda1 + profile.lambda2;
  const Vector privates = profile.lambda1 + profile.lambda2;

  const auto half_log2_ratio = [scale](const Vector& num, const Vector& den, const Vector& gram) {
    double acc = 0.0;
    for (Index l = 0; l < gram.size(); ++l) {
      acc += std::log1p(scale * num(l) * gram(l)) - std::log1p(scale * den(l) * gram(l));
    }
    return std::max(0.0, 0.5 * acc / std::numbers::ln2);
  };
  const Vector zero = Vector::Zero(gram1.size());
  RateTriple out;
  out.r0 = std::min(half_log2_ratio(all, privates, gram1), half_log2_ratio(all, privates, gram2));
  out.r1 = half_log2_ratio(privates, profile.lambda2, gram1);
  out.r2 = half_log2_ratio(profile.lambda2, zero, gram2);
  return out;
}

double sylvester_check(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw ContractViolation("sylvester_check: A must be m x n and B n x m");
  }
  const Matrix ab = a * b + Matrix::Identity(a.rows(), a.rows());
  const Matrix ba = b * a + Matrix::Identity(b.rows(), b.rows());
  const double lhs = ab.size() == 0 ? 1.0 : ab.determinant();
  const double rhs = ba.size() == 0 ? 1.0 : ba.determinant();
  return std::abs(lhs - rhs);
}

std::vector<double> equal_power_split(const channel::ParallelChannel& pch) {
  const std::size_t k = pch.size();
  if (k == 0) return {};
  return std::vector<double>(k, pch.relaxed_power / static_cast<double>(k));
}

RateTriple zf_rates(const DofParams& params, const channel::ParallelChannel& pch,
                    const std::vector<double>& subpower) {
  const SetSizes sizes = pch.partition.sizes();
  if (subpower.size() != sizes.total()) {
    throw ContractViolation("zf_rates: expected " + std::to_string(sizes.total()) +
                            " sub-channel powers, got " + std::to_string(subpower.size()));
  }
  for (const double p : subpower) {
    if (!(p >= 0) || !std::isfinite(p)) throw ValidationError("zf_rates: negative sub-channel power");
  }
  const LambdaPattern lp = lambda_pattern(params, sizes);

  const auto rate = [&](const std::map<std::size_t, double>& gains, std::size_t l) {
    const double g = gains.at(l);
    return gaussian_capacity(g * g * subpower[l]);
  };
  double common1 = 0.0;
  double common2 = 0.0;
  RateTriple out;
  for (std::size_t l = 0; l < sizes.total(); ++l) {
    if (lp.common[l]) {
      if (pch.gains1.contains(l)) common1 += rate(pch.gains1, l);
      if (pch.gains2.contains(l)) common2 += rate(pch.gains2, l);
    } else if (lp.private1[l]) {
      out.r1 += rate(pch.gains1, l);
    } else if (lp.private2[l]) {
      out.r2 += rate(pch.gains2, l);
    }
  }
  out.r0 = std::min(common1, common2);
  return out;
}

std::array<double, 6> parallel_region_bounds(const channel::ParallelChannel& pch,
                                             const AllocationProfile& alloc) {
  const std::size_t k = pch.size();
  if (alloc.gamma.size() != k || alloc.subpower.size() != k) {
    throw ContractViolation("parallel_region_bounds: allocation length differs from sub-channel count");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < k; ++l) {
    if (!(alloc.gamma[l] >= 0.0 && alloc.gamma[l] <= 1.0)) {
      throw ValidationError("parallel_region_bounds: gamma outside [0, 1]");
    }
    if (!(alloc.subpower[l] >= 0.0)) throw ValidationError("parallel_region_bounds: negative power");
    total += alloc.subpower[l];
  }
  if (std::abs(total - pch.relaxed_power) > 1e-9 * std::max(1.0, pch.relaxed_power)) {
    throw ValidationError("parallel_region_bounds: allocation sums to " + std::to_string(total) +
                          ", expected zeta P = " + std::to_string(pch.relaxed_power));
  }

  const auto& part = pch.partition;
  // C(h^2 g P / (1 + h^2 (1-g) P)): cloud-center rate
  const auto center = [&](const std::map<std::size_t, double>& gains, std::size_t l) {
    const double snr = gains.at(l) * gains.at(l) * alloc.subpower[l];
    return gaussian_capacity(snr * alloc.gamma[l] / (1.0 + snr * (1.0 - alloc.gamma[l])));
  };
  const auto full = [&](const std::map<std::size_t, double>& gains, std::size_t l) {
    return gaussian_capacity(gains.at(l) * gains.at(l) * alloc.subpower[l]);
  };
  const auto satellite = [&](const std::map<std::size_t, double>& gains, std::size_t l) {
    return gaussian_capacity(gains.at(l) * gains.at(l) * (1.0 - alloc.gamma[l]) * alloc.subpower[l]);
  };
  const auto sum = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                      const auto& term) {
    double acc = 0.0;
    for (const std::size_t l : a) acc += term(l);
    for (const std::size_t l : b) acc += term(l);
    return acc;
  };
  const std::vector<std::size_t> none;
  const auto c1 = [&](std::size_t l) { return center(pch.gains1, l); };
  const auto c2 = [&](std::size_t l) { return center(pch.gains2, l); };
  const auto f1 = [&](std::size_t l) { return full(pch.gains1, l); };
  const auto f2 = [&](std::size_t l) { return full(pch.gains2, l); };
  const auto s1 = [&](std::size_t l) { return satellite(pch.gains1, l); };
  const auto s2 = [&](std::size_t l) { return satellite(pch.gains2, l); };

  std::array<double, 6> b{};
  b[0] = sum(part.s1, part.sc, c1);
  b[1] = sum(part.s2, part.sc, c2);
  b[2] = sum(part.sc2, none, c1) + sum(part.s1, part.sc1, f1);
  b[3] = sum(part.sc1, none, c2) + sum(part.s2, part.sc2, f2);
  b[4] = sum(part.sc2, none, c1) + sum(part.s2, part.sc2, s2) + sum(part.s1, part.sc1, f1);
  b[5] = sum(part.sc1, none, c2) + sum(part.s1, part.sc1, s1) + sum(part.s2, part.sc2, f2);
  return b;
}

bool satisfies_bounds(const RateTriple& r, const std::array<double, 6>& b, double slack) {
  const double sum = r.r0 + r.r1 + r.r2;
  return r.r0 <= b[0] + slack && r.r0 <= b[1] + slack && r.r0 + r.r1 <= b[2] + slack &&
         r.r0 + r.r2 <= b[3] + slack && sum <= b[4] + slack && sum <= b[5] + slack;
}

DofEstimate estimate_dof(const std::vector<std::pair<double, RateTriple>>& curve) {
  if (curve.size() < 2) throw ValidationError("estimate_dof: need at least two power levels");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve[i].first > 0)) throw ValidationError("estimate_dof: powers must be positive");
    if (i > 0 && !(curve[i].first > curve[i - 1].first)) {
      throw ValidationError("estimate_dof: powers must be strictly increasing");
    }
  }
  const auto& [pa, ra] = curve[curve.size() - 2];
  const auto& [pb, rb] = curve.back();
  const double span = 0.5 * std::log2(pb / pa);
  return {(rb.r0 - ra.r0) / span, (rb.r1 - ra.r1) / span, (rb.r2 - ra.r2) / span};
}

} // namespace bcdof::rates
