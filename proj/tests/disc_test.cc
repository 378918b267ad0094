// tests/disc_test.cc

// Copyright 2026  The HiFi++ Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "test_support.h"

#include <cmath>

#include "hifipp/disc/discriminators.h"
#include "hifipp/errors.h"
#include "hifipp/nn/layers.h"

using namespace hifipp;

namespace {

std::shared_ptr<ScaleDiscriminatorImpl> AsScale(const DiscriminatorEnsemble& d, std::size_t i) {
  return std::dynamic_pointer_cast<ScaleDiscriminatorImpl>(d->member(i));
}

torch::Tensor SummedScores(DiscriminatorEnsemble& d, const torch::Tensor& x) {
  auto total = torch::zeros({}, x.options());
  for (auto& o : d->forward(x)) total = total + o.score.sum();
  return total;
}

}  // namespace

TEST_SUITE("discriminators") {

TEST_CASE("ssd ensemble membership and score length") {
  DiscriminatorEnsemble d(DiscriminatorConfig{});
  REQUIRE(d->size() == 3);
  auto outs = d->forward(torch::randn({2, 8192}));
  CHECK(outs.size() == 3);
  // Strides 1, 2, 2, 4, 4, 1, 1, 1 with length-preserving padding.
  const int64_t golden = 8192 / (2 * 2 * 4 * 4);
  for (std::size_t i = 0; i < outs.size(); ++i) {
    CHECK(outs[i].score.sizes() == torch::IntArrayRef({2, golden}));
    CHECK(AsScale(d, i)->ScoreLength(8192) == golden);
    CHECK(outs[i].features.size() == AsScale(d, i)->schedule().size() - 1);
  }
}

TEST_CASE("melgan layout score length") {
  DiscriminatorConfig c;
  c.layout = ScaleLayout::kMelGan;
  DiscriminatorEnsemble d(c);
  auto outs = d->forward(torch::randn({1, 8192}));
  CHECK(outs[0].score.size(1) == 8192 / (4 * 4 * 4 * 4));
  CHECK(outs[0].features.size() == 6);
}

TEST_CASE("ssd parameter budget") {
  DiscriminatorEnsemble d(DiscriminatorConfig{});
  CHECK(nn::CountParameters(*d) <= 2000000);
  CHECK(nn::CountParameters(*d) == 1858854);
}

TEST_CASE("members differ only through their initialisation") {
  auto x = torch::randn({1, 4096});
  auto build = [](uint64_t seed) {
    torch::manual_seed(seed);
    return std::make_shared<ScaleDiscriminatorImpl>(ScaleLayout::kHifiGan, 4,
                                                    nn::NormType::kWeight);
  };
  auto a = build(3), b = build(3), c = build(4);
  CHECK(torch::equal(a->forward(x).score, b->forward(x).score));
  CHECK_FALSE(torch::equal(a->forward(x).score, c->forward(x).score));
  DiscriminatorEnsemble d(DiscriminatorConfig{});
  auto outs = d->forward(x);
  CHECK_FALSE(torch::equal(outs[0].score, outs[1].score));
}

TEST_CASE("summed ensemble gradient equals the member gradients and finite differences") {
  torch::manual_seed(0);
  DiscriminatorConfig c;
  c.k = 2;
  DiscriminatorEnsemble d(c);
  d->to(torch::kDouble);
  auto x = torch::randn({1, 1024}, torch::kDouble).requires_grad_(true);
  SummedScores(d, x).backward();
  auto g = x.grad().clone();

  auto member_sum = torch::zeros_like(g);
  for (std::size_t i = 0; i < d->size(); ++i) {
    auto xi = x.detach().clone().requires_grad_(true);
    d->member(i)->forward(xi).score.sum().backward();
    member_sum += xi.grad();
  }
  CHECK(torch::allclose(g, member_sum, 1e-10, 1e-12));

  torch::NoGradGuard no_grad;
  const double eps = 1e-5;
  for (int64_t pos : {3, 100, 511, 900}) {
    auto xp = x.detach().clone(), xm = x.detach().clone();
    xp[0][pos] += eps;
    xm[0][pos] -= eps;
    const double fd =
        (SummedScores(d, xp).item<double>() - SummedScores(d, xm).item<double>()) / (2 * eps);
    const double an = g[0][pos].item<double>();
    CAPTURE(pos);
    CHECK(std::abs(fd - an) / std::max(std::abs(an), 1e-6) < 1e-3);
  }
}

TEST_CASE("reference ensembles") {
  CHECK(DiscriminatorPreset("msd").NumMembers() == 3);
  CHECK(DiscriminatorPreset("mpd").NumMembers() == 5);
  CHECK(DiscriminatorPreset("msd_mpd").NumMembers() == 8);

  DiscriminatorEnsemble msd(DiscriminatorPreset("msd_spectral"));
  REQUIRE(msd->size() == 3);
  CHECK(AsScale(msd, 0)->norm() == nn::NormType::kSpectral);
  CHECK(AsScale(msd, 1)->norm() == nn::NormType::kWeight);
  CHECK(AsScale(msd, 2)->norm() == nn::NormType::kWeight);
  CHECK(AsScale(msd, 1)->pool_steps() == 1);
  CHECK(ScaleDiscriminatorImpl::PooledLength(8192, 1) == 4096);
  CHECK(ScaleDiscriminatorImpl::PooledLength(8192, 2) == 2048);

  DiscriminatorEnsemble mpd(DiscriminatorPreset("mpd"));
  const int64_t periods[] = {2, 3, 5, 7, 11};
  auto outs = mpd->forward(torch::randn({1, 8000}));
  for (std::size_t i = 0; i < 5; ++i) {
    auto p = std::dynamic_pointer_cast<PeriodDiscriminatorImpl>(mpd->member(i));
    REQUIRE(p);
    CHECK(p->period() == periods[i]);
    CHECK(outs[i].features.size() == 5);
    CHECK(torch::isfinite(outs[i].score).all().item<bool>());
  }
}

TEST_CASE("discriminator input validation") {
  DiscriminatorEnsemble d(DiscriminatorConfig{});
  CHECK_THROWS_AS(d->forward(torch::randn({8192})), ParameterError);
  CHECK_THROWS_AS(d->forward(torch::randn({0, 8192})), ParameterError);
  DiscriminatorConfig c;
  c.k = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = DiscriminatorConfig{};
  c.channel_divisor = 3;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  CHECK_THROWS_AS(ParseKind("gan"), ConfigError);
  CHECK_THROWS_AS(DiscriminatorPreset("bogus"), ConfigError);
}

}  // TEST_SUITE
