// Acceptance gate: one self-contained check per release criterion, each
// printing a single PASS/FAIL line with its measured numbers and runtime.
//
//   acceptance        runs every criterion
//   acceptance N      runs criterion N only
//
// The exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "monoqt/dataset.hpp"
#include "monoqt/discord.hpp"
#include "monoqt/fuzz.hpp"
#include "monoqt/measures.hpp"
#include "monoqt/monogamy.hpp"
#include "monoqt/rng.hpp"
#include "monoqt/roof.hpp"
#include "monoqt/state.hpp"

using namespace monoqt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& label) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += label;
        }
    }
    void note(const std::string& text) {
        if (!detail.empty()) detail += "; ";
        detail += text;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// 1: closed-form W-state residuals at n = 20, monotone, well under a second
Outcome criterion_1() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    FigureDataset data = fig1_dataset(20);
    double elapsed = seconds_since(start);
    out.require(data.rows.size() == 18, "expected 18 rows");
    double tau3 = data.rows.front()[1];
    double tau20 = data.rows.back()[1];
    out.require(std::abs(tau3 - 0.00603) <= 1e-4, "tau(3) = " + fmt(tau3));
    out.require(std::abs(tau20 - 0.06989) <= 1e-4, "tau(20) = " + fmt(tau20));
    for (std::size_t i = 1; i < data.rows.size(); ++i)
        out.require(data.rows[i][1] > data.rows[i - 1][1], "monotonicity broken");
    out.require(elapsed < 1.0, "took " + fmt(elapsed) + " s");
    out.note("tau(3) = " + fmt(tau3) + ", tau(20) = " + fmt(tau20) + ", " + fmt(elapsed) + " s");
    return out;
}

// 2: squared-eof score at the worked operating point
Outcome criterion_2() {
    Outcome out;
    MonogamyScore s = sef_score_from_c_sq(0.7, {0.3, 0.3, 0.3});
    out.require(std::abs(s.joint - 0.594779) <= 1e-6, "joint = " + fmt(s.joint));
    out.require(std::abs(s.pairwise[0] - 0.166494) <= 1e-6, "pair = " + fmt(s.pairwise[0]));
    out.require(std::abs(s.score - 0.0952982) <= 1e-6, "score = " + fmt(s.score));
    out.note("score = " + fmt(s.score));
    return out;
}

// 3: three-qutrit antisymmetric state scores
Outcome criterion_3() {
    Outcome out;
    CounterexampleReport rep = counterexample_report("ou333");
    const double log2_3 = std::log2(3.0);
    const double sef_expect = log2_3 * log2_3 - 2.0;
    out.require(rep.sef.has_value() && rep.sc.has_value(), "missing scores");
    if (!out.pass) return out;
    out.require(std::abs(rep.sef->score - sef_expect) <= 1e-5,
                "sef score = " + fmt(rep.sef->score));
    out.require(std::abs(rep.sc->score + 2.0 / 3.0) <= 1e-9, "sc score = " + fmt(rep.sc->score));
    out.note("sef = " + fmt(rep.sef->score) + ", sc = " + fmt(rep.sc->score));
    return out;
}

// 4: cluster-state indicators
Outcome criterion_4() {
    Outcome out;
    IndicatorReport cluster = tau_sef_k_pure(cluster4_state(), 4);
    out.require(std::abs(cluster.tau - 1.0) <= 1e-9, "cluster tau = " + fmt(cluster.tau));
    IndicatorReport grouped = tau_sef_k_pure(s224_state(), 3);
    out.require(std::abs(grouped.tau) <= 1e-6, "grouped tau = " + fmt(grouped.tau));
    double tail_eof = std::sqrt(std::max(0.0, grouped.terms.back()));
    out.require(std::abs(tail_eof - 1.0) <= 1e-6, "tail eof = " + fmt(tail_eof));
    out.note("cluster tau = " + fmt(cluster.tau) + ", grouped tau = " + fmt(grouped.tau) +
             ", tail eof = " + fmt(tail_eof));
    return out;
}

// 5: cavity grid -- measurement optimization vs closed forms, curve inversion,
// and the decomposition identity
Outcome criterion_5() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    const std::size_t g = 20;
    double worst_kw = 0.0, worst_inv = 0.0, worst_identity = 0.0;
    PartitionSpec grouping = PartitionSpec::parse("0|2|1,3");
    for (std::size_t i = 0; i < g; ++i) {
        double alpha = static_cast<double>(i) / static_cast<double>(g - 1);
        for (std::size_t j = 0; j < g; ++j) {
            double kt = 5.0 * static_cast<double>(j) / static_cast<double>(g - 1);
            CavityParams p = make_cavity_params(alpha, kt);
            CavityClosedForms f = cavity_closed_forms(p);

            PureState grouped = group_parties(cavity_state(p), grouping);
            double kw = koashi_winter_eof(grouped, 0, 1, 2);
            worst_kw = std::max(worst_kw, std::abs(kw - f.eof_c1_r1r2));

            double beta_sq = p.beta * p.beta;
            double c_sq = 4.0 * beta_sq * p.xi() * p.xi() * p.chi() * p.chi();
            double inverted = eof_curve_inverse(f.eof_c1_r1r2);
            worst_inv = std::max(worst_inv, std::abs(inverted - c_sq));

            for (const char* partition : {"c1_first", "c1_r2_first", "r1_first", "r1_c2_first"}) {
                CavityIndicatorDecomposition d = cavity_indicator_decomposition(p, partition);
                worst_identity =
                    std::max(worst_identity, std::abs(d.tau4 - d.tau3_pure - d.tau3_mixed));
            }
        }
    }
    double elapsed = seconds_since(start);
    out.require(worst_kw <= 1e-6, "measurement vs closed form " + fmt(worst_kw));
    out.require(worst_inv <= 1e-6, "curve inversion " + fmt(worst_inv));
    out.require(worst_identity <= 1e-10, "identity " + fmt(worst_identity));
    out.require(elapsed < 60.0, "took " + fmt(elapsed) + " s");
    out.note("kw " + fmt(worst_kw) + ", inverse " + fmt(worst_inv) + ", identity " +
             fmt(worst_identity) + ", " + fmt(elapsed) + " s");
    return out;
}

// 6: second-derivative endpoint limits and finite-difference agreement
Outcome criterion_6() {
    Outcome out;
    double lim_sq = eof_derivatives(1.0, CurveVariable::CSq).second;
    double lim_plain = eof_derivatives(1.0, CurveVariable::C).second;
    out.require(std::abs(lim_sq + 2.0 / (3.0 * std::log(16.0))) <= 1e-12,
                "squared-variable limit " + fmt(lim_sq));
    out.require(std::abs(lim_plain - 2.0 / (3.0 * std::log(4.0))) <= 1e-12,
                "plain-variable limit " + fmt(lim_plain));
    // The first derivative has a log singularity at 0, so the truncation error
    // of a central difference grows like h^2/x^3; h = 1e-6 keeps it below 2e-7
    // across the whole grid while staying far above roundoff.
    double worst = 0.0;
    const double h = 1e-6;
    for (CurveVariable variable : {CurveVariable::CSq, CurveVariable::C}) {
        for (int i = 1; i <= 99; ++i) {
            double at = i / 100.0;
            double fd = (eof_derivatives(at + h, variable).first -
                         eof_derivatives(at - h, variable).first) /
                        (2.0 * h);
            worst = std::max(worst, std::abs(fd - eof_derivatives(at, variable).second));
        }
    }
    out.require(worst <= 1e-6, "finite-difference gap " + fmt(worst));
    out.note("limits " + fmt(lim_sq) + " / " + fmt(lim_plain) + ", fd gap " + fmt(worst));
    return out;
}

// 7: roof optimizer against closed forms. The second clause demands that the
// two-qubit curve evaluated at the minimized squared concurrence match the
// minimized eof on 2x3 states within 2e-3; the two roofs genuinely differ by
// more than that on generic rank-2 states, so the clause records an honest
// failure with the observed gap.
Outcome criterion_7() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    PartitionSpec cut = PartitionSpec::parse("0|1");

    double worst_low = 0.0, worst_high = 0.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        DensityMatrix rho = random_mixed({2, 2}, 2, mix_seed(701, i));
        double exact = eof_two_qubit(rho);
        double bound = roof_minimize(rho, RoofCost::Eof, cut, 0, 16, mix_seed(702, i)).bound;
        double diff = bound - exact;
        worst_low = std::min(worst_low, diff);
        worst_high = std::max(worst_high, diff);
    }
    out.require(worst_low >= -1e-9, "two-qubit roof below closed form by " + fmt(-worst_low));
    out.require(worst_high <= 1e-3, "two-qubit roof above closed form by " + fmt(worst_high));

    double worst_gap = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        DensityMatrix rho = random_mixed({2, 3}, 2, mix_seed(703, i));
        double c_sq = roof_minimize(rho, RoofCost::ConcurrenceSq, cut, 0, 16, mix_seed(704, i)).bound;
        double eof = roof_minimize(rho, RoofCost::Eof, cut, 0, 16, mix_seed(705, i)).bound;
        double mapped = eof_curve(std::min(1.0, c_sq)).eof;
        worst_gap = std::max(worst_gap, std::abs(mapped - eof));
    }
    out.require(worst_gap <= 2e-3, "curve(min C^2) vs min eof gap " + fmt(worst_gap) +
                                       " on 2x3 states (the two roofs are genuinely different)");

    double elapsed = seconds_since(start);
    out.require(elapsed < 600.0, "took " + fmt(elapsed) + " s");
    out.note("two-qubit band [" + fmt(worst_low) + ", " + fmt(worst_high) + "], 2x3 gap " +
             fmt(worst_gap) + ", " + fmt(elapsed) + " s");
    return out;
}

// 8: hierarchy chains over Haar samples stay nonnegative and nondecreasing
Outcome criterion_8() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    const std::size_t samples = 10000;
    double worst_margin = 1e300, worst_step = 1e300;
    const std::vector<std::vector<std::size_t>> dim_sets{
        {2, 2, 2}, {2, 2, 2, 2}, {2, 2, 2, 2, 2}};
    for (std::size_t set = 0; set < dim_sets.size(); ++set) {
        for (std::size_t i = 0; i < samples; ++i) {
            PureState psi = haar_pure(dim_sets[set], mix_seed(810 + set, i));
            std::vector<MonogamyScore> chain = hierarchy_chain(psi);
            for (std::size_t k = 0; k < chain.size(); ++k) {
                worst_margin = std::min(worst_margin, chain[k].score);
                if (k > 0)
                    worst_step = std::min(worst_step, chain[k].score - chain[k - 1].score);
            }
        }
    }
    double elapsed = seconds_since(start);
    out.require(worst_margin >= -1e-9, "chain margin " + fmt(worst_margin));
    out.require(worst_step >= -1e-9, "chain step " + fmt(worst_step));
    out.require(elapsed < 600.0, "took " + fmt(elapsed) + " s");
    out.note("min margin " + fmt(worst_margin) + ", min step " + fmt(worst_step) + ", " +
             fmt(elapsed) + " s");
    return out;
}

// 9: closed-form columns of the theta sweep
Outcome criterion_9() {
    Outcome out;
    FigureDataset data = fig4_dataset(100);
    double worst_sef = 0.0, worst_sc = 0.0;
    for (const auto& row : data.rows) {
        double c_sq = std::cos(row[0]) * std::cos(row[0]);
        double s_sq = 1.0 - c_sq;
        worst_sef = std::max(worst_sef, std::abs(row[1] - 2.0 * binary_entropy(c_sq)));
        worst_sc = std::max(worst_sc, std::abs(row[2] + 2.0 * c_sq * s_sq));
    }
    out.require(data.rows.size() == 100, "expected 100 rows");
    out.require(worst_sef <= 1e-9, "sef column gap " + fmt(worst_sef));
    out.require(worst_sc <= 1e-9, "sc column gap " + fmt(worst_sc));
    out.note("sef gap " + fmt(worst_sef) + ", sc gap " + fmt(worst_sc));
    return out;
}

// 10: squared-concurrence residual grid stays nonnegative
Outcome criterion_10() {
    Outcome out;
    FigureDataset data = fig3_dataset(20, 5.0);
    double min_residual = 1e300;
    for (const auto& row : data.rows) min_residual = std::min(min_residual, row[3]);
    out.require(data.rows.size() == 400, "expected 400 rows");
    out.require(min_residual >= -1e-9, "min residual " + fmt(min_residual));
    out.note("min residual " + fmt(min_residual));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::function<Outcome()>> criteria{
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: acceptance [1..%zu]\n", criteria.size());
            return 64;
        }
    }

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i + 1) != only) continue;
        Outcome out = criteria[i]();
        std::printf("criterion %zu: %s -- %s\n", i + 1, out.pass ? "PASS" : "FAIL",
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
