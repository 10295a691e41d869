// Copyright 2026 The pdbev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "pdbev/depth_model.hpp"
#include "pdbev/errors.hpp"
#include "test_support.hpp"

namespace pdbev {
namespace {

// Independent pdf for integration oracles.
double pdf_ref(double d, double mu, double b) { return std::exp(-std::abs(d - mu) / b) / (2.0 * b); }

// Integral of the pdf over [a, c], split at the kink and clipped to the
// +-40b support (mass beyond is below e^-40).
double mass_ref(double a, double c, double mu, double b, std::size_t n = 100000) {
  const double lo = std::max(a, mu - 40 * b);
  const double hi = std::min(c, mu + 40 * b);
  if (hi <= lo) return 0.0;
  auto f = [&](double x) { return pdf_ref(x, mu, b); };
  if (mu <= lo || mu >= hi) return test::trapezoid(f, lo, hi, n);
  return test::trapezoid(f, lo, mu, n) + test::trapezoid(f, mu, hi, n);
}

TEST(LaplacePdf, PeakAndOneDiversity) {
  EXPECT_DOUBLE_EQ(laplace_pdf(10, {10, 1}), 0.5);
  EXPECT_DOUBLE_EQ(laplace_pdf(12.5, {10, 2.5}), std::exp(-1.0) / 5.0);
  EXPECT_DOUBLE_EQ(laplace_pdf(7.5, {10, 2.5}), std::exp(-1.0) / 5.0);
}

TEST(LaplacePdf, PropertyNormalization) {
  test::Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu = test::uniform(rng, 0.5, 60);
    const double b = test::uniform(rng, 0.05, 5);
    const double integral = test::trapezoid([&](double x) { return laplace_pdf(x, {mu, b}); }, mu - 40 * b,
                                            mu + 40 * b, 100000);
    EXPECT_NEAR(integral, 1.0, 1e-6) << mu << " " << b;
  }
}

TEST(LaplaceCdf, MedianAndLimits) {
  EXPECT_DOUBLE_EQ(laplace_cdf(10, {10, 1}), 0.5);
  EXPECT_EQ(laplace_cdf(-1e6, {10, 1}), 0.0);
  EXPECT_EQ(laplace_cdf(1e6, {10, 1}), 1.0);
  EXPECT_NEAR(laplace_cdf(12, {10, 1}), 0.5 + mass_ref(10, 12, 10, 1), 1e-6);
  EXPECT_NEAR(laplace_cdf(12, {10, 1}), mass_ref(-1e9, 12, 10, 1), 1e-6);
}

TEST(LaplaceCdf, PropertyDerivativeIsPdf) {
  test::Rng rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const double mu = test::uniform(rng, 0.5, 60);
    const double b = test::uniform(rng, 0.05, 5);
    double x = mu + test::uniform(rng, -6, 6) * b;
    if (std::abs(x - mu) < 1e-3 * b) x = mu + b;
    const double h = 1e-5 * b;
    const double fd = (laplace_cdf(x + h, {mu, b}) - laplace_cdf(x - h, {mu, b})) / (2 * h);
    const double pdf = laplace_pdf(x, {mu, b});
    EXPECT_NEAR(fd, pdf, 1e-4 * pdf) << mu << " " << b << " " << x;
  }
}

TEST(LaplaceCdf, PropertyMonotone) {
  test::Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const LaplaceParams p{test::uniform(rng, 0.5, 60), test::uniform(rng, 0.05, 5)};
    const double a = test::uniform(rng, -10, 80);
    const double c = a + test::uniform(rng, 0, 10);
    EXPECT_LE(laplace_cdf(a, p), laplace_cdf(c, p));
    EXPECT_GE(laplace_cdf(a, p), 0.0);
    EXPECT_LE(laplace_cdf(c, p), 1.0);
  }
}

TEST(Occlusion, Examples) {
  EXPECT_EQ(occlusion_prob(0, {10, 1}), 0.0);
  const double expected = 0.5 - 0.5 * std::exp(-10.0);
  EXPECT_NEAR(occlusion_prob(10, {10, 1}), expected, 1e-15);
  EXPECT_NEAR(mass_ref(0, 10, 10, 1), expected, 1e-6);
  EXPECT_LT(occlusion_prob(5, {10, 1}), occlusion_prob(15, {10, 1}));
}

TEST(Occlusion, PropertyMatchesIntegral) {
  test::Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const double mu = test::uniform(rng, 0.5, 60);
    const double b = test::uniform(rng, 0.05, 5);
    const double d = test::uniform(rng, 0, mu + 20 * b);
    EXPECT_NEAR(occlusion_prob(d, {mu, b}), mass_ref(0, d, mu, b), 1e-6);
  }
}

TEST(Visibility, Examples) {
  EXPECT_EQ(visibility_prob(0, {10, 1}), 1.0);
  EXPECT_EQ(visibility_prob(0, {0.5, 1e-3}), 1.0);
  EXPECT_NEAR(visibility_prob(1e6, {10, 1}), 0.5 * std::exp(-10.0), 1e-15);
}

TEST(Visibility, PropertyComplementAndMonotone) {
  test::Rng rng(25);
  for (int trial = 0; trial < 2000; ++trial) {
    const LaplaceParams p{test::uniform(rng, 0.5, 60), test::uniform(rng, 1e-3, 5)};
    const double d1 = test::uniform(rng, 0, 100);
    const double d2 = d1 + test::uniform(rng, 0, 20);
    EXPECT_NEAR(visibility_prob(d1, p) + occlusion_prob(d1, p), 1.0, 1e-12);
    EXPECT_GE(visibility_prob(d1, p), visibility_prob(d2, p));
    EXPECT_GE(occlusion_prob(d1, p), 0.0);
    // Below 1 mathematically; far tails round to 1.0 in double.
    EXPECT_LE(occlusion_prob(d1, p), 1.0);
  }
}

TEST(LaplaceParams, ClampAndValidity) {
  const auto p = LaplaceParams::clamped(5, 1e-9);
  EXPECT_EQ(p.b, kMinDiversity);
  EXPECT_TRUE(p.valid());
  EXPECT_THROW(LaplaceParams::clamped(0, 1), DomainError);
  EXPECT_THROW(LaplaceParams::clamped(5, std::nan("")), DomainError);
  EXPECT_FALSE((LaplaceParams{5, 1e-4}).valid());
  EXPECT_FALSE((LaplaceParams{-1, 1}).valid());
}

DepthParamMap single(double mu, double b) { return DepthParamMap(Tensor({1, 1, 2}, {float(mu), float(b)})); }

TEST(DepthNll, Examples) {
  const std::vector<DepthSample> at_mu{{0, 0, 7.0}};
  EXPECT_NEAR(depth_nll(single(7, 0.5), at_mu), 0.0, 1e-12);
  const std::vector<DepthSample> six{{0, 0, 6.0}};
  EXPECT_NEAR(depth_nll(single(5, 1), six), std::log(2.0) + 1.0, 1e-12);
  EXPECT_NEAR(depth_nll(single(7, 1.0), at_mu) - depth_nll(single(7, 0.5), at_mu), std::log(2.0), 1e-12);
}

TEST(DepthNll, SumMeanAndIntegerPixels) {
  Tensor prm({2, 3, 2});
  for (std::size_t i = 0; i < 6; ++i) {
    prm[2 * i] = static_cast<float>(i + 1);
    prm[2 * i + 1] = 0.5f;
  }
  const DepthParamMap map(prm);
  const std::vector<DepthSample> gt{{0, 0, 2.0}, {1, 2, 6.0}, {1, 1, 5.0}};
  // Residuals 1, 0, 0 with b = 0.5.
  EXPECT_NEAR(depth_nll(map, gt), 2.0, 1e-12);
  EXPECT_NEAR(depth_nll(map, gt, NllReduction::kMean), 2.0 / 3.0, 1e-12);
  EXPECT_THROW(depth_nll(map, std::vector<DepthSample>{}), DomainError);
  EXPECT_THROW(depth_nll(map, std::vector<DepthSample>{{2, 0, 1.0}}), DomainError);
  EXPECT_THROW(depth_nll(map, std::vector<DepthSample>{{0, 3, 1.0}}), DomainError);
  EXPECT_THROW(depth_nll(map, std::vector<DepthSample>{{0, 0, 0.0}}), DomainError);
}

TEST(DepthNllGrad, Examples) {
  const auto g0 = depth_nll_grad({5, 2}, 5);
  EXPECT_EQ(g0.d_mu, 0.0);
  EXPECT_EQ(g0.d_b, 0.5);
  const auto g1 = depth_nll_grad({5, 1}, 6);
  EXPECT_EQ(g1.d_mu, -1.0);
  EXPECT_EQ(g1.d_b, 0.0);
  EXPECT_EQ(depth_nll_grad({5, 1}, 4).d_mu, 1.0);
}

double nll_ref(double mu, double b, double d) { return std::log(2 * b) + std::abs(d - mu) / b; }

TEST(DepthNllGrad, FiniteDifferenceAtExample) {
  const double mu = 5, b = 1, d = 6.3, h = 1e-4;
  const auto g = depth_nll_grad({mu, b}, d);
  const double fmu = (nll_ref(mu + h, b, d) - nll_ref(mu - h, b, d)) / (2 * h);
  const double fb = (nll_ref(mu, b + h, d) - nll_ref(mu, b - h, d)) / (2 * h);
  EXPECT_NEAR(g.d_mu, fmu, 1e-4 * std::abs(fmu));
  EXPECT_NEAR(g.d_b, fb, 1e-4 * std::abs(fb));
}

TEST(DepthNllGrad, PropertyFiniteDifferenceAwayFromKink) {
  test::Rng rng(26);
  const double h = 1e-4;
  for (int trial = 0; trial < 1000; ++trial) {
    const double mu = test::uniform(rng, 0.5, 60);
    const double b = test::uniform(rng, 0.05, 5);
    double d = test::uniform(rng, 0.1, 80);
    if (std::abs(d - mu) <= 2 * h) d = mu + 0.5;
    const auto g = depth_nll_grad({mu, b}, d);
    const double fmu = (nll_ref(mu + h, b, d) - nll_ref(mu - h, b, d)) / (2 * h);
    const double fb = (nll_ref(mu, b + h, d) - nll_ref(mu, b - h, d)) / (2 * h);
    const double err = std::hypot(g.d_mu - fmu, g.d_b - fb);
    EXPECT_LE(err, 1e-4 * std::hypot(g.d_mu, g.d_b)) << mu << " " << b << " " << d;
  }
}

TEST(DepthParamMap, ValidationAndFromMu) {
  EXPECT_THROW(DepthParamMap(Tensor({2, 2, 3})), DomainError);
  EXPECT_THROW(DepthParamMap(Tensor({2, 2, 2})), DomainError);  // mu = 0
  EXPECT_THROW(DepthParamMap(Tensor({1, 1, 2}, {1.0f, 1e-4f})), DomainError);
  const auto m = DepthParamMap::from_mu(test::filled({3, 4}, 10.0f), 0.05);
  EXPECT_EQ(m.height(), 3u);
  EXPECT_EQ(m.width(), 4u);
  EXPECT_FLOAT_EQ(m.at(2, 3).mu, 10.0f);
  EXPECT_FLOAT_EQ(m.at(2, 3).b, 0.05f);
  EXPECT_NEAR(laplace_pdf(10, m.at(1, 1)), 10.0, 1e-5);
  EXPECT_FLOAT_EQ(DepthParamMap::from_mu(test::filled({1, 1}, 1.0f), 1e-6).at(0, 0).b, float(kMinDiversity));
  EXPECT_THROW(DepthParamMap::from_mu(test::filled({1, 1}, -1.0f), 0.05), DomainError);
}

TEST(DepthSamples, TensorRoundTrip) {
  const std::vector<DepthSample> s{{0, 1, 2.5}, {3, 4, 7.25}};
  const Tensor t = depth_samples_to_tensor(s);
  EXPECT_EQ(t.dims(), (Dims{2, 3}));
  const auto back = depth_samples_from_tensor(t);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].row, 3u);
  EXPECT_EQ(back[1].col, 4u);
  EXPECT_EQ(back[1].depth, 7.25);
  EXPECT_THROW(depth_samples_from_tensor(Tensor({2, 2})), DomainError);
  EXPECT_THROW(depth_samples_from_tensor(Tensor({1, 3}, {-1, 0, 1})), DomainError);
}

}  // namespace
}  // namespace pdbev
