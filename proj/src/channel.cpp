// SPDX-License-Identifier: Apache-2.0
#include "bcdof/channel.hpp"

#include "bcdof/errors.hpp"

#include <cmath>
#include <string>

namespace bcdof::channel {

void validate(const MimoBcChannel& ch) {
  if (ch.h1.size() == 0 || ch.h2.size() == 0) throw ContractViolation("channel: empty gain matrix");
  if (ch.h1.cols() != ch.h2.cols()) {
    throw ContractViolation("channel: H1 has " + std::to_string(ch.h1.cols()) +
                            " columns but H2 has " + std::to_string(ch.h2.cols()));
  }
  if (!ch.h1.allFinite() || !ch.h2.allFinite()) throw ContractViolation("channel: non-finite gain");
  if (!(ch.power > 0) || !std::isfinite(ch.power)) throw ContractViolation("channel: power must be positive");
}

void partition_common(const std::map<std::size_t, double>& gains1,
                      const std::map<std::size_t, double>& gains2,
                      const std::vector<std::size_t>& sc, std::vector<std::size_t>& sc1,
                      std::vector<std::size_t>& sc2) {
  sc1.clear();
  sc2.clear();
  for (const std::size_t l : sc) {
    const double g1 = gains1.at(l);
    const double g2 = gains2.at(l);
    if (g1 * g1 >= g2 * g2) {
      sc1.push_back(l);
    } else {
      sc2.push_back(l);
    }
  }
}

double relaxation_factor(const Matrix& omega) {
  if (omega.size() == 0) return 1.0;
  const Vector values = matdecomp::svd(omega).values;
  const double smallest = values(values.size() - 1);
  if (smallest == 0.0) throw NumericalFailure("relaxation_factor: omega is singular");
  return 1.0 / (smallest * smallest);
}

ParallelChannel transform_channel(const MimoBcChannel& ch, const matdecomp::GsvdFactors& f) {
  validate(ch);
  const auto r1 = ch.h1.rows();
  const auto r2 = ch.h2.rows();
  const auto t = ch.h1.cols();
  const auto k = static_cast<Eigen::Index>(f.k);
  if (f.psi1.rows() != r1 || f.psi1.cols() != r1 || f.psi2.rows() != r2 || f.psi2.cols() != r2 ||
      f.psi0.rows() != t || f.psi0.cols() != t || f.omega.rows() != k || f.omega.cols() != k ||
      f.sigma1.rows() != r1 || f.sigma1.cols() != k || f.sigma2.rows() != r2 ||
      f.sigma2.cols() != k || f.p + f.s > f.k) {
    throw ContractViolation("transform_channel: factor dimensions do not match the channel");
  }

  ParallelChannel pch;
  const std::size_t first = f.only_first();
  const std::size_t shared = f.s;
  for (std::size_t l = 0; l < f.k; ++l) {
    if (l < first) {
      pch.partition.s1.push_back(l);
    } else if (l < first + shared) {
      pch.partition.sc.push_back(l);
    } else {
      pch.partition.s2.push_back(l);
    }
  }
  for (std::size_t l = 0; l < first + shared; ++l) {
    const auto i = static_cast<Eigen::Index>(l);
    pch.gains1[l] = f.sigma1(i, i);
  }
  for (std::size_t l = first; l < f.k; ++l) {
    const auto j = static_cast<Eigen::Index>(l);
    pch.gains2[l] = f.sigma2(r2 - k + j, j);
  }
  for (const auto& [l, g] : pch.gains1) {
    if (!(g > 0)) throw ContractViolation("transform_channel: non-positive receiver-1 gain");
  }
  for (const auto& [l, g] : pch.gains2) {
    if (!(g > 0)) throw ContractViolation("transform_channel: non-positive receiver-2 gain");
  }
  partition_common(pch.gains1, pch.gains2, pch.partition.sc, pch.partition.sc1,
                   pch.partition.sc2);
  pch.zeta = relaxation_factor(f.omega);
  pch.relaxed_power = pch.zeta * ch.power;
  return pch;
}

} // namespace bcdof::channel
