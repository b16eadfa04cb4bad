// Benchmark comparing the OpenMP-parallel kernels against their serial
// reference twins, verifying along the way that both paths produce identical
// results.  Workloads: convex-roof minimization restarts, measurement
// optimization for a dimension-4 measured party, and a randomized
// inequality campaign.
//
// Usage: bench [--quick]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "monoqt/discord.hpp"
#include "monoqt/fuzz.hpp"
#include "monoqt/monogamy.hpp"
#include "monoqt/parallel.hpp"
#include "monoqt/roof.hpp"
#include "monoqt/state.hpp"

using namespace monoqt;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <class F>
double timed(F&& f) {
    double t0 = now_ms();
    f();
    return now_ms() - t0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   identical %s\n",
                name, serial_ms, parallel_ms,
                parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0, identical ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    }
    std::printf("threads available: %d\n", par::max_threads());

    { // convex-roof minimization on a rank-4 two-qubit state
        const std::size_t restarts = quick ? 8 : 32;
        DensityMatrix rho = random_mixed({2, 2}, 4, 99);
        PartitionSpec cut = PartitionSpec::parse("0|1");
        RoofResult rs, rp;
        double ts =
            timed([&] { rs = roof_minimize(rho, RoofCost::Eof, cut, 0, restarts, 3, true); });
        double tp =
            timed([&] { rp = roof_minimize(rho, RoofCost::Eof, cut, 0, restarts, 3, false); });
        report("roof_minimize (2x2, r4)", ts, tp, rs.bound == rp.bound);
    }

    { // measurement minimization with a dimension-4 measured party
        PureState psi = haar_pure({2, 4, 2}, 17);
        DensityMatrix rho_ab = reduced_density(psi, {0, 1});
        KwOptions opt;
        if (quick) opt = KwOptions::light();
        MeasuredMinimum ms, mp;
        opt.serial = true;
        double ts = timed([&] { ms = minimize_measured_conditional_entropy(rho_ab, 1, opt); });
        opt.serial = false;
        double tp = timed([&] { mp = minimize_measured_conditional_entropy(rho_ab, 1, opt); });
        report("measurement opt (dim 4)", ts, tp, ms.value == mp.value);
    }

    { // randomized inequality campaign on three qubits
        CampaignConfig config;
        config.dims = {2, 2, 2};
        config.samples = quick ? 100 : 400;
        config.seed = 5;
        config.inequality = "sef_nqubit";
        CampaignReport rs, rp;
        config.serial = true;
        double ts = timed([&] { rs = run_campaign(config); });
        config.serial = false;
        double tp = timed([&] { rp = run_campaign(config); });
        report("campaign sef_nqubit", ts, tp,
               rs.margins == rp.margins && rs.min_margin == rp.min_margin);
    }

    { // level-k indicators of a five-qubit Haar state
        PureState psi = haar_pure({2, 2, 2, 2, 2}, 41);
        const std::size_t reps = quick ? 5 : 20;
        std::vector<MonogamyScore> cs, cp;
        KwOptions serial_opt;
        serial_opt.serial = true;
        double ts = timed([&] {
            for (std::size_t r = 0; r < reps; ++r) cs = hierarchy_chain(psi, serial_opt);
        });
        double tp = timed([&] {
            for (std::size_t r = 0; r < reps; ++r) cp = hierarchy_chain(psi);
        });
        bool same = cs.size() == cp.size();
        for (std::size_t i = 0; same && i < cs.size(); ++i) same = cs[i].score == cp[i].score;
        report("hierarchy_chain (5 qubits)", ts, tp, same);
    }

    return 0;
}
