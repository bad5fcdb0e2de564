#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "srnsens/error.hpp"
#include "srnsens/model/builtin.hpp"
#include "srnsens/model/parser.hpp"
#include "srnsens/sim/coupled.hpp"
#include "srnsens/sim/kinetics.hpp"
#include "srnsens/sim/poisson.hpp"
#include "srnsens/sim/rng.hpp"
#include "srnsens/sim/ssa.hpp"
#include "support/checks.hpp"

namespace srn {
namespace {

using testing::mean_se;

ReactionNetwork birth_only(double k) {
  return parse_model("species X;\nparam k = 1;\nreaction b: 0 -> X @ mass_action(k);").with_param("k", k);
}

double bd_mean(double t1, double t2, double T) { return (t1 / t2) * (1.0 - std::exp(-t2 * T)); }

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    EXPECT_EQ(ua, b.uniform());
    EXPECT_GT(ua, 0.0);
    EXPECT_LT(ua, 1.0);
    differs_c |= ua != c.uniform();
    differs_d |= ua != d.uniform();
  }
  EXPECT_TRUE(differs_c);
  EXPECT_TRUE(differs_d);
}

TEST(SsaStep, AbsorbingState) {
  const Kinetics kin(load_builtin("birth-death").with_param("theta1", 0.0));
  RngStream rng(1, 0);
  const JumpEvent ev = ssa_step(kin, State{0}, rng);
  EXPECT_TRUE(ev.is_absorbing());
  EXPECT_EQ(ev.dt(), std::numeric_limits<double>::infinity());
}

TEST(SsaStep, SingleActiveChannel) {
  const Kinetics kin(load_builtin("birth-death"));
  for (std::uint64_t s = 0; s < 50; ++s) {
    RngStream mirror(3, s);
    const double u1 = mirror.uniform();
    RngStream rng(3, s);
    const JumpEvent ev = ssa_step(kin, State{0}, rng);
    ASSERT_FALSE(ev.is_absorbing());
    EXPECT_EQ(ev.reaction(), 0u);
    EXPECT_DOUBLE_EQ(ev.dt(), -std::log(u1) / 0.1);
  }
}

TEST(SsaSelect, CumulativeScan) {
  const std::vector<double> rates{1.0, 3.0};
  for (std::uint64_t s = 0; s < 200; ++s) {
    RngStream mirror(9, s);
    const double u1 = mirror.uniform();
    const double u2 = mirror.uniform();
    RngStream rng(9, s);
    const JumpEvent ev = ssa_select(rates, 4.0, rng);
    EXPECT_EQ(ev.reaction(), u2 * 4.0 <= 1.0 ? 0u : 1u);
    EXPECT_DOUBLE_EQ(ev.dt(), -std::log(u1) / 4.0);
  }
}

TEST(SimulateTerminal, TrivialHorizons) {
  const Kinetics kin(load_builtin("birth-death"));
  RngStream rng(1, 0);
  EXPECT_EQ(simulate_terminal(kin, State{4}, 0.0, rng), State{4});
  const Kinetics dead(load_builtin("birth-death").with_param("theta1", 0.0));
  EXPECT_EQ(simulate_terminal(dead, State{0}, 1e6, rng), State{0});
}

TEST(SimulateTerminal, BirthDeathMean) {
  const Kinetics kin(load_builtin("birth-death"));
  for (double T : {20.0, 100.0}) {
    std::vector<double> v(100'000);
    for (std::size_t i = 0; i < v.size(); ++i) {
      RngStream rng(17, i);
      v[i] = static_cast<double>(simulate_terminal(kin, State{0}, T, rng)[0]);
    }
    const auto m = mean_se(v);
    EXPECT_NEAR(m.mean, bd_mean(0.1, 0.1, T), 4.0 * m.se) << "T=" << T;
  }
}

TEST(SimulateTerminal, StepCap) {
  const Kinetics kin(birth_only(100.0));
  RngStream rng(1, 0);
  EXPECT_THROW(simulate_terminal(kin, State{0}, 10.0, rng, 50), StepLimitExceeded);
}

TEST(Poisson, ZeroRateConsumesNothing) {
  RngStream a(5, 0), b(5, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(generate_poisson(0.0, a), 0);
  EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Poisson, InversionArithmetic) {
  const double r = std::log(2.0);
  for (std::uint64_t s = 0; s < 200; ++s) {
    RngStream mirror(8, s);
    const double u = mirror.uniform();
    double p = std::exp(-r), cum = p;
    std::int64_t k = 0;
    while (cum < u) {
      ++k;
      p *= r / static_cast<double>(k);
      cum += p;
    }
    RngStream rng(8, s);
    EXPECT_EQ(generate_poisson(r, rng), k);
    if (u <= 0.5) EXPECT_EQ(k, 0);
  }
}

TEST(Poisson, InvalidRate) {
  RngStream rng(1, 0);
  EXPECT_THROW(generate_poisson(-1.0, rng), DomainError);
  EXPECT_THROW(generate_poisson(std::numeric_limits<double>::infinity(), rng), DomainError);
}

TEST(Poisson, MeanOfThree) {
  const auto draws = testing::poisson_draws(3.0, 100'000, 21);
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / draws.size();
  EXPECT_NEAR(mean, 3.0, 4.0 * std::sqrt(3.0 / 1e5));
}

TEST(Poisson, ChiSquareGoodnessOfFit) {
  for (double r : {0.5, 3.0, 20.0, 30.0, 30.5, 100.0, 2500.0}) {
    const auto res = testing::poisson_chi_square(testing::poisson_draws(r, 100'000, 99), r);
    EXPECT_GT(res.p, 0.01) << "r=" << r << " chi2=" << res.statistic << " dof=" << res.dof;
  }
}

TEST(CoupledDifference, EqualStartsNeedNoSteps) {
  const Kinetics kin(load_builtin("birth-death"));
  RngStream rng(1, 0);
  const auto pair = simulate_split_clock(kin, kin, State{3}, State{3}, 50.0, rng);
  EXPECT_EQ(pair.steps, 0u);
  EXPECT_EQ(pair.z1, pair.z2);
  const OutputFunction f = parse_output("S", kin.network());
  EXPECT_EQ(evaluate_coupled_difference(kin, State{3}, State{3}, 50.0, f, rng), 0.0);
}

TEST(CoupledDifference, ZeroHorizon) {
  const Kinetics kin(load_builtin("birth-death"));
  const OutputFunction f = parse_output("S * S", kin.network());
  RngStream rng(1, 0);
  EXPECT_EQ(evaluate_coupled_difference(kin, State{4}, State{2}, 0.0, f, rng), 12.0);
}

TEST(CoupledDifference, UnitDiscrepancyDecays) {
  const Kinetics kin(load_builtin("birth-death"));
  const OutputFunction f = parse_output("S", kin.network());
  for (double tf : {1.0, 5.0, 15.0}) {
    std::vector<double> v(10'000);
    for (std::size_t i = 0; i < v.size(); ++i) {
      RngStream rng(4, i);
      v[i] = evaluate_coupled_difference(kin, State{6}, State{5}, tf, f, rng);
    }
    const auto m = mean_se(v);
    EXPECT_NEAR(m.mean, std::exp(-0.1 * tf), 4.0 * m.se) << "Tf=" << tf;
  }
}

TEST(CoupledDifference, MergedPairNeverSeparates) {
  const auto net = load_builtin("gene-expression");
  const Kinetics a(net), b(net);
  for (std::uint64_t s = 0; s < 200; ++s) {
    RngStream rng(12, s);
    auto pair = simulate_split_clock(a, a, State{3, 40}, State{2, 35}, 5.0, rng);
    if (pair.z1 != pair.z2) continue;
    auto again = simulate_split_clock(a, b, pair.z1, pair.z2, 5.0, rng);
    EXPECT_EQ(again.z1, again.z2);
  }
  for (std::uint64_t s = 0; s < 50; ++s) {
    RngStream rng(13, s);
    auto pair = simulate_split_clock(a, b, State{4, 10}, State{4, 10}, 10.0, rng);
    EXPECT_EQ(pair.z1, pair.z2);
    EXPECT_GT(pair.steps, 0u);
  }
}

TEST(EvaluateIntegral, Examples) {
  const Kinetics dead(load_builtin("birth-death").with_param("theta1", 0.0));
  const OutputFunction f = parse_output("S", dead.network());
  RngStream rng(1, 0);
  EXPECT_DOUBLE_EQ(evaluate_integral(dead, State{0}, 7.5, f, rng), 0.0);
  const Kinetics frozen(load_builtin("birth-death").with_param("theta1", 0.0).with_param("theta2", 0.0));
  EXPECT_DOUBLE_EQ(evaluate_integral(frozen, State{3}, 7.5, f, rng), 22.5);
  const Kinetics kin(load_builtin("birth-death"));
  EXPECT_EQ(evaluate_integral(kin, State{3}, 0.0, f, rng), 0.0);
}

TEST(EvaluateIntegral, BirthOnlyMean) {
  const double theta = 2.0, tf = 3.0;
  const Kinetics kin(birth_only(theta));
  const OutputFunction f = parse_output("X", kin.network());
  std::vector<double> v(10'000);
  for (std::size_t i = 0; i < v.size(); ++i) {
    RngStream rng(6, i);
    v[i] = evaluate_integral(kin, State{0}, tf, f, rng);
  }
  const auto m = mean_se(v);
  EXPECT_NEAR(m.mean, theta * tf * tf / 2.0, 4.0 * m.se);
}

TEST(Couplings, MarginalsMatchPlainSsa) {
  const auto net = load_builtin("birth-death");
  const Kinetics nominal(net);
  const Kinetics perturbed(net.with_param("theta2", 0.1 + 0.01));
  const std::size_t n = 10'000;
  std::vector<double> plain(n), crp1(n), crp2(n), cfd1(n), cfd2(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream r0(100, i), r1(200, i), r2(300, i);
    plain[i] = static_cast<double>(simulate_terminal(nominal, State{0}, 20.0, r0)[0]);
    const auto crp = simulate_common_paths(perturbed, nominal, State{0}, 20.0, r1);
    const auto cfd = simulate_split_clock(perturbed, nominal, State{0}, State{0}, 20.0, r2);
    crp1[i] = static_cast<double>(crp.z1[0]);
    crp2[i] = static_cast<double>(crp.z2[0]);
    cfd1[i] = static_cast<double>(cfd.z1[0]);
    cfd2[i] = static_cast<double>(cfd.z2[0]);
  }
  EXPECT_GT(testing::ks_two_sample(plain, crp2).p, 0.01);
  EXPECT_GT(testing::ks_two_sample(plain, cfd2).p, 0.01);
  std::vector<double> plain_perturbed(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream r(400, i);
    plain_perturbed[i] = static_cast<double>(simulate_terminal(perturbed, State{0}, 20.0, r)[0]);
  }
  EXPECT_GT(testing::ks_two_sample(plain_perturbed, crp1).p, 0.01);
  EXPECT_GT(testing::ks_two_sample(plain_perturbed, cfd1).p, 0.01);
}

TEST(Ks, DetectsShiftedSamples) {
  std::vector<double> a(2000), b(2000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<double>(i % 100);
    b[i] = static_cast<double>(i % 100) + 10.0;
  }
  EXPECT_LT(testing::ks_two_sample(a, b).p, 1e-6);
  EXPECT_GT(testing::ks_two_sample(a, a).p, 0.99);
}

TEST(Determinism, KernelsRepeatBitForBit) {
  const auto net = load_builtin("gene-expression");
  const Kinetics kin(net);
  const OutputFunction f = parse_output("P", net);
  RngStream a(77, 3), b(77, 3);
  EXPECT_EQ(simulate_terminal(kin, State{0, 0}, 20.0, a), simulate_terminal(kin, State{0, 0}, 20.0, b));
  EXPECT_EQ(evaluate_integral(kin, State{1, 2}, 10.0, f, a), evaluate_integral(kin, State{1, 2}, 10.0, f, b));
  EXPECT_EQ(evaluate_coupled_difference(kin, State{2, 5}, State{1, 5}, 10.0, f, a),
            evaluate_coupled_difference(kin, State{2, 5}, State{1, 5}, 10.0, f, b));
  const auto pa = simulate_common_paths(kin, kin, State{0, 0}, 10.0, a);
  const auto pb = simulate_common_paths(kin, kin, State{0, 0}, 10.0, b);
  EXPECT_EQ(pa.z1, pb.z1);
  EXPECT_EQ(pa.z2, pb.z2);
  EXPECT_EQ(pa.z1, pa.z2);
  EXPECT_EQ(generate_poisson(55.5, a), generate_poisson(55.5, b));
}

}  // namespace
}  // namespace srn
