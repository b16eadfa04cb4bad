#include <cmath>

#include "doctest.h"
#include "monoqt/discord.hpp"
#include "monoqt/errors.hpp"
#include "monoqt/fuzz.hpp"
#include "monoqt/measures.hpp"
#include "monoqt/monogamy.hpp"
#include "monoqt/roof.hpp"
#include "monoqt/state.hpp"
#include "test_util.hpp"

using namespace monoqt;

TEST_CASE("squared-eof score reproduces the worked operating point") {
    MonogamyScore s = sef_score_from_c_sq(0.7, {0.3, 0.3, 0.3});
    CHECK_NEAR(s.joint, 0.5947791454347074, 1e-12);
    CHECK_NEAR(s.pairwise[0], 0.16649364694829608, 1e-12);
    CHECK_NEAR(s.score, 0.09529820458981919, 1e-12);
    CHECK(s.measure == MeasureKind::SEF);
    CHECK_FALSE(s.out_of_range_warning);
}

TEST_CASE("squared-eof score rejects inputs outside the unit interval") {
    CHECK_THROWS_AS(sef_score_from_c_sq(1.5, {0.1}), argument_error);
    CHECK_THROWS_AS(sef_score_from_c_sq(0.5, {-0.2}), argument_error);
    // roundoff-band inputs are accepted
    MonogamyScore s = sef_score_from_c_sq(1.0, {0.0, -1e-13});
    CHECK_NEAR(s.score, 1.0, 1e-10);
}

TEST_CASE("squared-concurrence score flags hypothetical inputs but still computes") {
    MonogamyScore s = sc_score(1.5, {0.4, 0.2});
    CHECK_NEAR(s.score, 0.9, 1e-15);
    CHECK_FALSE(s.out_of_range_warning);
    MonogamyScore wide = sc_score(3.0, {0.5});
    CHECK(wide.out_of_range_warning);
    CHECK_NEAR(wide.score, 2.5, 1e-15);
}

TEST_CASE("w-state residual closed form matches frozen values") {
    CHECK_NEAR(tau_w_state_closed_form(20, 3), 0.006026465008940399, 1e-15);
    CHECK_NEAR(tau_w_state_closed_form(20, 20), 0.06989405004913891, 1e-15);
    CHECK_NEAR(tau_w_state_closed_form(3, 3), 0.2381621631978083, 1e-15);
    CHECK_THROWS_AS(tau_w_state_closed_form(20, 2), argument_error);
    CHECK_THROWS_AS(tau_w_state_closed_form(20, 21), argument_error);
}

TEST_CASE("w-state residual closed form is monotone in the level") {
    for (std::size_t k = 4; k <= 20; ++k)
        CHECK(tau_w_state_closed_form(20, k) > tau_w_state_closed_form(20, k - 1));
}

TEST_CASE("numeric level-k indicator reproduces the w-state closed form") {
    PureState w5 = w_state(5);
    for (std::size_t k : {3, 4, 5}) {
        IndicatorReport rep = tau_sef_k_pure(w5, k);
        CHECK_NEAR(rep.tau, tau_w_state_closed_form(5, k), 1e-6);
        CHECK(rep.k == k);
        CHECK(rep.terms.size() == k - 1);
    }
}

TEST_CASE("large w states route the tail through a measured complement block") {
    // 2^7-dimensional tails exceed the density-matrix capacity, so the tail
    // EOF must come from measuring the complement block instead
    PureState w8 = w_state(8);
    IndicatorReport k3 = tau_sef_k_pure(w8, 3);
    CHECK_NEAR(k3.tau, tau_w_state_closed_form(8, 3), 1e-8);
    IndicatorReport k4 = tau_sef_k_pure(w8, 4);
    CHECK_NEAR(k4.tau, tau_w_state_closed_form(8, 4), 1e-6);
}

TEST_CASE("levels without a supported tail route fail with a capacity error") {
    // w10 at k = 5: the tail spans 2 * 2^6 = 128 dimensions (too large to
    // materialize) and the complement block has dimension 8 (no measurement
    // parametrization), so no route exists
    PureState w10 = w_state(10);
    CHECK_THROWS_AS(tau_sef_k_pure(w10, 5), capacity_error);
}

TEST_CASE("indicator reports keep the raw residual consistent with its parts") {
    PureState psi = haar_pure({2, 2, 2, 2}, 8);
    for (std::size_t k : {3, 4}) {
        IndicatorReport rep = tau_sef_k_pure(psi, k);
        double sum = 0.0;
        for (double t : rep.terms) sum += t;
        CHECK_NEAR(rep.tau_raw, rep.joint_sef - sum, 1e-10);
        CHECK(rep.tau >= rep.tau_raw);
        CHECK(rep.tau >= 0.0);
    }
}

TEST_CASE("cluster-state indicator saturates at one") {
    IndicatorReport rep = tau_sef_k_pure(cluster4_state(), 4);
    CHECK_NEAR(rep.tau, 1.0, 1e-9);
    CHECK(rep.bound_quality == BoundQuality::Exact);
    for (double t : rep.terms) CHECK_NEAR(t, 0.0, 1e-9);
}

TEST_CASE("grouped cluster state has zero residual with a saturated tail") {
    IndicatorReport rep = tau_sef_k_pure(s224_state(), 3);
    CHECK_NEAR(rep.tau, 0.0, 1e-6);
    CHECK_NEAR(rep.terms.back(), 1.0, 1e-6);
    CHECK(rep.bound_quality == BoundQuality::Exact);
}

TEST_CASE("bipartite eof routing: dimensions and rank select the method") {
    // two-qubit inputs always take the concurrence closed form
    MixedEofResult bell = mixed_eof(density(bell_state()));
    CHECK(bell.route == EofRoute::Wootters);
    CHECK(bell.quality == BoundQuality::Exact);
    CHECK_NEAR(bell.value, 1.0, 1e-10);
    CHECK(bell.credit == 0.0);

    MixedEofResult rank4 = mixed_eof(random_mixed({2, 2}, 4, 3));
    CHECK(rank4.route == EofRoute::Wootters);

    // rank-1 beyond two qubits: marginal entropy
    MixedEofResult pure24 = mixed_eof(density(haar_pure({2, 4}, 5)));
    CHECK(pure24.route == EofRoute::PureEntropy);
    CHECK(pure24.quality == BoundQuality::Exact);

    // rank-2: qubit-purifier measurement
    MixedEofResult tail = mixed_eof(reduced_density(s224_state(), {0, 2}));
    CHECK(tail.route == EofRoute::KwQubit);
    CHECK(tail.quality == BoundQuality::Exact);
    CHECK_NEAR(tail.value, 1.0, 1e-9);

    // rank 3..4: dimension-4 purifier measurement, reported as a bound
    MixedEofResult r3 = mixed_eof(random_mixed({2, 4}, 3, 7));
    CHECK(r3.route == EofRoute::KwDim4);
    CHECK(r3.quality == BoundQuality::UpperBound);
    CHECK(r3.credit >= 1e-6);
    CHECK(r3.value >= 0.0);

    // beyond rank 4: convex-roof optimizer
    MixedEofResult r5 = mixed_eof(random_mixed({3, 3}, 5, 9));
    CHECK(r5.route == EofRoute::Roof);
    CHECK(r5.quality == BoundQuality::UpperBound);
}

TEST_CASE("closed-form and measurement routes agree on the same state") {
    PureState w3 = w_state(3);
    MixedEofResult via_wootters = mixed_eof(reduced_density(w3, {0, 1}));
    CHECK(via_wootters.route == EofRoute::Wootters);
    double via_measurement = koashi_winter_eof(w3, 0, 2, 1);
    CHECK_NEAR(via_wootters.value, via_measurement, 1e-6);
}

TEST_CASE("bipartite eof rejects unnormalizable input") {
    ComplexMatrix m(4, 4);
    m.at(0, 0) = 1.3;
    m.at(3, 3) = -0.3;
    CHECK_THROWS_AS(mixed_eof(make_density({2, 2}, m)), contract_error);
}

TEST_CASE("mixed-state indicator, per-term variant, on pure and separable inputs") {
    IndicatorReport pure_case = tau_sef_k_mixed(density(ghz_state(3)), 3, 2);
    CHECK_NEAR(pure_case.tau, 1.0, 1e-9);
    CHECK(pure_case.method == IndicatorMethod::MixedType2);

    // classical GHZ mixture: separable across every cut
    ComplexMatrix m(8, 8);
    m.at(0, 0) = 0.5;
    m.at(7, 7) = 0.5;
    DensityMatrix sep = make_density({2, 2, 2}, m);
    IndicatorReport sep_case = tau_sef_k_mixed(sep, 3, 2);
    CHECK_NEAR(sep_case.tau, 0.0, 1e-6);
}

TEST_CASE("mixed-state indicator, roof-extension variant, averages the pure indicator") {
    IndicatorReport on_pure = tau_sef_k_mixed(density(w_state(3)), 3, 1);
    CHECK_NEAR(on_pure.tau, tau_w_state_closed_form(3, 3), 1e-6);
    CHECK(on_pure.method == IndicatorMethod::MixedType1Roof);
    CHECK(on_pure.bound_quality == BoundQuality::UpperBound);

    ComplexMatrix m(8, 8);
    m.at(0, 0) = 0.5;
    m.at(7, 7) = 0.5;
    DensityMatrix sep = make_density({2, 2, 2}, m);
    IndicatorReport mixed_case = tau_sef_k_mixed(sep, 3, 1);
    CHECK(mixed_case.tau <= 1e-6);
    CHECK(mixed_case.tau >= 0.0);
}

TEST_CASE("mixed-state indicator validates the variant selector") {
    CHECK_THROWS_AS(tau_sef_k_mixed(density(ghz_state(3)), 3, 7), argument_error);
}

TEST_CASE("hierarchy chain of ghz states saturates at every level") {
    std::vector<MonogamyScore> chain = hierarchy_chain(ghz_state(4));
    CHECK(chain.size() == 2);
    for (const auto& score : chain) {
        CHECK_NEAR(score.score, 1.0, 1e-6);
        CHECK(score.measure == MeasureKind::SEF);
    }
}

TEST_CASE("hierarchy chain of w states is nondecreasing and ends at the closed form") {
    std::vector<MonogamyScore> chain = hierarchy_chain(w_state(4));
    CHECK(chain.size() == 2);
    CHECK(chain[1].score >= chain[0].score - 1e-9);
    CHECK_NEAR(chain[1].score, tau_w_state_closed_form(4, 4), 1e-6);
    CHECK_NEAR(chain[0].score, tau_w_state_closed_form(4, 3), 1e-6);
}

TEST_CASE("hierarchy chain of random qubit states stays nonnegative") {
    for (std::uint64_t seed : {1, 2, 3}) {
        PureState psi = haar_pure({2, 2, 2, 2}, seed);
        std::vector<MonogamyScore> chain = hierarchy_chain(psi);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            CHECK(chain[i].score >= -1e-9);
            if (i > 0) CHECK(chain[i].score >= chain[i - 1].score - 1e-9);
        }
    }
}

TEST_CASE("cavity decomposition identity holds for every peel order") {
    for (const char* partition : {"c1_first", "c1_r2_first", "r1_first", "r1_c2_first"}) {
        for (double kt : {0.4, 1.0, 3.0}) {
            CavityParams p = make_cavity_params(1.0 / std::sqrt(3.0), kt);
            CavityIndicatorDecomposition d = cavity_indicator_decomposition(p, partition);
            CHECK_NEAR(d.tau4, d.tau3_pure + d.tau3_mixed, 1e-12);
        }
    }
}

TEST_CASE("cavity decomposition matches the frozen symmetric-point value") {
    CavityParams p = make_cavity_params(1.0 / std::sqrt(3.0), 1.0);
    CavityIndicatorDecomposition d = cavity_indicator_decomposition(p, "c1_first");
    CHECK_NEAR(d.tau4, 0.37235061881218884, 1e-6);
    CHECK_THROWS_AS(cavity_indicator_decomposition(p, "upside_down"), argument_error);
}

TEST_CASE("score ledger splits the squared-eof score exactly") {
    SefScoreLedger ledger = sef_score_ledger(0.7, {0.3, 0.3, 0.3});
    CHECK_NEAR(ledger.gamma1 + ledger.gamma2, ledger.sef_score, 1e-14);
    CHECK_NEAR(ledger.sef_score, 0.09529820458981919, 1e-12);
    // gamma2 = k1 * (squared-concurrence score)
    CHECK_NEAR(ledger.gamma2, ledger.k1 * (0.7 - 0.9), 1e-14);
    CHECK(ledger.ki.size() == 3);

    CHECK_THROWS_AS(sef_score_ledger(0.0, {0.1}), argument_error);
    // zero pairwise entries contribute a zero ratio by continuity
    SefScoreLedger zero_pair = sef_score_ledger(0.5, {0.0});
    CHECK(zero_pair.ki[0] == 0.0);
}

TEST_CASE("four-by-two-by-two family scores follow their closed forms") {
    Scores422 mid = analysis_422(std::atan(1.0) * 2.0 / 1.0); // theta = pi/2: cos = 0
    CHECK_NEAR(mid.m_sef, 0.0, 1e-12);
    CHECK_NEAR(mid.m_sc, 0.0, 1e-12);

    Scores422 quarter = analysis_422(std::atan(1.0)); // theta = pi/4
    CHECK_NEAR(quarter.m_sef, 2.0, 1e-12);
    CHECK_NEAR(quarter.m_sc, -0.5, 1e-12);
}

TEST_CASE("four-by-two-by-two closed forms match state-level computation") {
    const double theta = 0.8;
    Scores422 closed = analysis_422(theta);
    PureState psi = s422_state(theta);

    PartitionSpec joint_cut = PartitionSpec::parse("0|1,2");
    double joint_eof = eof_pure(psi, joint_cut);
    double e_ab = mixed_eof(reduced_density(psi, {0, 1})).value;
    double e_ac = mixed_eof(reduced_density(psi, {0, 2})).value;
    double m_sef_state = joint_eof * joint_eof - e_ab * e_ab - e_ac * e_ac;
    CHECK_NEAR(m_sef_state, closed.m_sef, 1e-6);

    PartitionSpec pair_cut = PartitionSpec::parse("0|1");
    double c_joint = pure_concurrence_sq(psi, joint_cut);
    double c_ab =
        roof_minimize(reduced_density(psi, {0, 1}), RoofCost::ConcurrenceSq, pair_cut, 0, 8, 1)
            .bound;
    double c_ac =
        roof_minimize(reduced_density(psi, {0, 2}), RoofCost::ConcurrenceSq, pair_cut, 0, 8, 2)
            .bound;
    double m_sc_state = c_joint - c_ab - c_ac;
    CHECK_NEAR(m_sc_state, closed.m_sc, 1e-6);
}

TEST_CASE("three-qutrit antisymmetric state violates both monogamy relations") {
    CounterexampleReport rep = counterexample_report("ou333");
    REQUIRE(rep.sef.has_value());
    REQUIRE(rep.sc.has_value());
    CHECK_NEAR(rep.sef->score, 0.5121061286922606, 1e-9);
    CHECK_NEAR(rep.sc->score, -2.0 / 3.0, 1e-9);
    CHECK(rep.sef->score > 0.0); // squared EOF holds here
    CHECK(rep.sc->score < 0.0);  // squared concurrence fails
}

TEST_CASE("counterexample reports for the grouped and plain cluster states") {
    CounterexampleReport s224 = counterexample_report("s224");
    REQUIRE(s224.tau.has_value());
    CHECK_NEAR(s224.tau->tau, 0.0, 1e-6);
    bool found_tail = false;
    for (const auto& [key, value] : s224.details) {
        if (key == "tail_eof") {
            found_tail = true;
            CHECK_NEAR(value, 1.0, 1e-6);
        }
    }
    CHECK(found_tail);

    CounterexampleReport cluster = counterexample_report("cluster4");
    REQUIRE(cluster.tau.has_value());
    CHECK_NEAR(cluster.tau->tau, 1.0, 1e-9);

    CHECK_THROWS_AS(counterexample_report("unknown"), argument_error);
}
