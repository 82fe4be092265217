// SPDX-License-Identifier: Apache-2.0
#include "bcdof/channel.hpp"

#include "bcdof/errors.hpp"
#include "bcdof/random.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace bcdof;
using namespace bcdof::channel;

namespace {

// H1 = H2 = I2 written with psi = I, omega = I and unit shared gains.
matdecomp::GsvdFactors unit_factors() {
  matdecomp::GsvdFactors f;
  f.psi1 = f.psi2 = f.psi0 = Matrix::Identity(2, 2);
  f.omega = f.omega_inv = Matrix::Identity(2, 2);
  f.sigma1 = f.sigma2 = Matrix::Identity(2, 2);
  f.k = 2;
  f.p = 0;
  f.s = 2;
  return f;
}

} // namespace

TEST(TransformChannel, IdentityOmegaKeepsPower) {
  const MimoBcChannel ch{Matrix::Identity(2, 2), Matrix::Identity(2, 2), 7.0};
  const auto pch = transform_channel(ch, unit_factors());
  EXPECT_EQ(pch.zeta, 1.0);
  EXPECT_EQ(pch.relaxed_power, 7.0);
  EXPECT_EQ(pch.partition.sc, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(pch.partition.sc1, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(pch.partition.sc2.empty());
}

TEST(TransformChannel, IdentityPairThroughGsvdDoublesPower) {
  // The stacked [I; I] has orthonormal-column normalization sqrt(2) I.
  const MimoBcChannel ch{Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0};
  const auto pch = transform_channel(ch, matdecomp::gsvd(ch.h1, ch.h2));
  EXPECT_NEAR(pch.zeta, 2.0, 1e-12);
  EXPECT_EQ(pch.partition.sizes(), (SetSizes{0, 2, 0}));
}

TEST(TransformChannel, CrossedAntennas) {
  Matrix h1(1, 2);
  Matrix h2(1, 2);
  h1 << 1, 0;
  h2 << 0, 1;
  const MimoBcChannel ch{h1, h2, 1.0};
  const auto pch = transform_channel(ch, matdecomp::gsvd(h1, h2));
  EXPECT_EQ(pch.partition.s1, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(pch.partition.sc.empty());
  EXPECT_EQ(pch.partition.s2, (std::vector<std::size_t>{1}));
  ASSERT_EQ(pch.gains1.size(), 1u);
  ASSERT_EQ(pch.gains2.size(), 1u);
  EXPECT_NEAR(pch.gains1.at(0), 1.0, 1e-14);
  EXPECT_NEAR(pch.gains2.at(1), 1.0, 1e-14);
  EXPECT_NEAR(pch.zeta, 1.0, 1e-12);
}

TEST(TransformChannel, GainsAreSigmaDiagonalsOnRandomChannels) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GaussianSource d(seed);
    const auto ch = random_channel(d.integer(1, 5), d.integer(1, 4), d.integer(1, 4), seed * 7);
    const auto f = matdecomp::gsvd(ch.h1, ch.h2);
    const auto pch = transform_channel(ch, f);
    EXPECT_EQ(pch.partition.sizes(), (SetSizes{f.only_first(), f.s, f.p}));
    EXPECT_EQ(pch.gains1.size(), f.only_first() + f.s);
    EXPECT_EQ(pch.gains2.size(), f.s + f.p);
    for (const auto& [l, g] : pch.gains1) EXPECT_GT(g, 0.0);
    for (const auto& [l, g] : pch.gains2) EXPECT_GT(g, 0.0);
    // shared gains form cosine/sine pairs
    for (std::size_t l : pch.partition.sc) {
      const double g1 = pch.gains1.at(l);
      const double g2 = pch.gains2.at(l);
      EXPECT_NEAR(g1 * g1 + g2 * g2, 1.0, 1e-12);
    }
    EXPECT_EQ(pch.partition.sc1.size() + pch.partition.sc2.size(), pch.partition.sc.size());
  }
}

TEST(TransformChannel, RejectsMismatchedFactors) {
  const MimoBcChannel ch{Matrix::Identity(3, 3), Matrix::Identity(3, 3), 1.0};
  EXPECT_THROW(transform_channel(ch, unit_factors()), ContractViolation);
}

TEST(Validate, RejectsBadChannels) {
  EXPECT_THROW(validate(MimoBcChannel{Matrix::Identity(2, 2), Matrix::Identity(2, 3), 1.0}), ContractViolation);
  EXPECT_THROW(validate(MimoBcChannel{Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0}), ContractViolation);
  EXPECT_THROW(validate(MimoBcChannel{Matrix(0, 2), Matrix::Identity(2, 2), 1.0}), ContractViolation);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate(MimoBcChannel{bad, Matrix::Identity(2, 2), 1.0}), ContractViolation);
}

TEST(RelaxationFactor, DiagonalOmega) {
  Matrix omega(2, 2);
  omega << 3.0, 0.0, 0.0, 0.5;
  EXPECT_NEAR(relaxation_factor(omega), 4.0, 1e-12);
  EXPECT_EQ(relaxation_factor(Matrix(0, 0)), 1.0);
}

TEST(RelaxationFactor, BoundsTheTransformedGram) {
  GaussianSource src(3);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix omega = src.matrix(4, 4).triangularView<Eigen::Lower>();
    for (int i = 0; i < 4; ++i) omega(i, i) = 0.3 + std::abs(omega(i, i));
    const Matrix inv = omega.inverse();
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(inv.transpose() * inv);
    EXPECT_NEAR(relaxation_factor(omega), eig.eigenvalues().maxCoeff(), 1e-9 * eig.eigenvalues().maxCoeff());
  }
}

TEST(PartitionCommon, TiesGoToFirstReceiver) {
  std::vector<std::size_t> sc1, sc2;
  partition_common({{3, 0.6}, {4, 0.8}}, {{3, 0.6}, {4, -0.8}}, {3, 4}, sc1, sc2);
  EXPECT_EQ(sc1, (std::vector<std::size_t>{3, 4}));
  EXPECT_TRUE(sc2.empty());
}

TEST(PartitionCommon, SquaredGainsDecide) {
  std::vector<std::size_t> sc1, sc2;
  partition_common({{0, 2.0}, {1, 0.5}}, {{0, 1.0}, {1, 1.0}}, {0, 1}, sc1, sc2);
  EXPECT_EQ(sc1, (std::vector<std::size_t>{0}));
  EXPECT_EQ(sc2, (std::vector<std::size_t>{1}));
}

TEST(PartitionCommon, EmptyShared) {
  std::vector<std::size_t> sc1{9}, sc2{9};
  partition_common({}, {}, {}, sc1, sc2);
  EXPECT_TRUE(sc1.empty());
  EXPECT_TRUE(sc2.empty());
}

TEST(GaussianSource, DeterministicAndRoughlyStandard) {
  GaussianSource a(5), b(5);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}
