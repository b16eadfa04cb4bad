#include "monoqt/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "monoqt/dataset.hpp"
#include "monoqt/errors.hpp"
#include "monoqt/fuzz.hpp"
#include "monoqt/measures.hpp"
#include "monoqt/monogamy.hpp"
#include "monoqt/state.hpp"
#include "monoqt/state_file.hpp"
#include "monoqt/version.hpp"

namespace monoqt {

namespace {

using njson = nlohmann::ordered_json;

void emit_dataset(const FigureDataset& data, const std::string& out_path) {
    if (out_path.empty()) {
        write_csv(data, std::cout);
    } else {
        write_csv_file(data, out_path);
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw argument_error("cannot open for writing: " + out_path);
    }
    out << text;
    out.flush();
    if (!out) {
        throw argument_error("write failed: " + out_path);
    }
}

std::vector<std::size_t> parse_dims_text(const std::string& text) {
    std::vector<std::size_t> dims;
    std::string current;
    auto flush = [&] {
        if (current.empty()) {
            throw argument_error("--dims: empty entry in '" + text + "'");
        }
        char* end = nullptr;
        long value = std::strtol(current.c_str(), &end, 10);
        if (*end != '\0' || value < 1) {
            throw argument_error("--dims: '" + current + "' is not a positive integer");
        }
        dims.push_back(static_cast<std::size_t>(value));
        current.clear();
    };
    for (char ch : text) {
        if (ch == ',') {
            flush();
        } else {
            current.push_back(ch);
        }
    }
    flush();
    return dims;
}

std::string dims_text(const std::vector<std::size_t>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += std::to_string(dims[i]);
    }
    return out;
}

const char* method_name(IndicatorMethod m) {
    switch (m) {
        case IndicatorMethod::PureExact: return "pure_exact";
        case IndicatorMethod::MixedType1Roof: return "mixed_roof_extension";
        case IndicatorMethod::MixedType2: return "mixed_per_term";
    }
    return "?";
}

const char* quality_name(BoundQuality q) {
    return q == BoundQuality::Exact ? "exact" : "upper_bound";
}

void print_indicator(const IndicatorReport& rep, std::size_t n, std::ostream& out) {
    out << "k: " << rep.k << '\n';
    out << "tau: " << format_double(rep.tau) << '\n';
    out << "tau_raw: " << format_double(rep.tau_raw) << '\n';
    out << "joint_sef: " << format_double(rep.joint_sef) << '\n';
    for (std::size_t i = 0; i < rep.terms.size(); ++i) {
        const bool is_tail = (i + 1 == rep.terms.size());
        double sq = rep.terms[i];
        double eof = std::sqrt(std::max(0.0, sq));
        if (is_tail) {
            out << "tail_1_" << rep.k << "to" << n << ": ";
        } else {
            out << "pair_1_" << (i + 2) << ": ";
        }
        out << format_double(sq) << " (eof " << format_double(eof) << ")\n";
    }
    out << "method: " << method_name(rep.method) << '\n';
    out << "quality: " << quality_name(rep.bound_quality) << '\n';
}

// Strict closed-form evaluation: marginal entropy for the joint term and the
// two-qubit concurrence formula for every subtracted term. Available only
// when each subtracted term reduces to two qubits (pairs always, the tail
// only at k = n); anything else is refused rather than approximated.
IndicatorReport indicator_closed(const PureState& psi, std::size_t k) {
    const std::size_t n = psi.num_parties();
    PartitionSpec split;
    split.parties = {{0}, {}};
    for (std::size_t i = 1; i < n; ++i) split.parties[1].push_back(i);
    IndicatorReport rep;
    rep.k = k;
    rep.method = IndicatorMethod::PureExact;
    rep.bound_quality = BoundQuality::Exact;
    double joint = eof_pure(psi, split);
    rep.joint_sef = joint * joint;
    auto two_qubit_term = [&](std::size_t partner, const char* role) {
        DensityMatrix rho = reduced_density(psi, {0, partner});
        if (rho.dims[0] != 2 || rho.dims[1] != 2) {
            throw unsupported_error(std::string("--method closed: ") + role + " reduction has dims (" +
                                    std::to_string(rho.dims[0]) + "," + std::to_string(rho.dims[1]) +
                                    "); only two-qubit closed forms are available, use --method "
                                    "discord or roof");
        }
        double eof = eof_two_qubit(rho);
        return eof * eof;
    };
    for (std::size_t i = 1; i + 1 < k; ++i) {
        rep.terms.push_back(two_qubit_term(i, "pair"));
    }
    if (k == n) {
        rep.terms.push_back(two_qubit_term(n - 1, "tail"));
    } else {
        throw unsupported_error("--method closed: the tail term at k < n has no closed form; "
                                "use --method discord or roof");
    }
    double sum = 0.0;
    for (double t : rep.terms) sum += t;
    rep.tau_raw = rep.joint_sef - sum;
    rep.tau = (rep.tau_raw < 0.0 && rep.tau_raw >= -1e-9) ? 0.0 : rep.tau_raw;
    return rep;
}

njson histogram_json(const MarginHistogram& h) {
    return njson{{"lo", h.lo},
                 {"hi", h.hi},
                 {"counts", h.counts},
                 {"underflow", h.underflow},
                 {"overflow", h.overflow}};
}

njson campaign_json(const CampaignReport& r) {
    njson config{{"dims", r.config.dims},
                 {"samples", r.config.samples},
                 {"seed", r.config.seed},
                 {"mixed_rank", r.config.mixed_rank},
                 {"inequality", r.config.inequality},
                 {"tolerance", r.config.tolerance},
                 {"inject", r.config.inject}};
    njson violation_indices = njson::array();
    for (std::size_t i = 0; i < r.margins.size() && violation_indices.size() < 100; ++i) {
        if (r.margins[i] < -r.config.tolerance) violation_indices.push_back(i);
    }
    njson argmin{{"index", r.argmin_index},
                 {"seed", r.argmin_seed},
                 {"injected", r.argmin_injected},
                 {"is_mixed", r.argmin_is_mixed},
                 {"state", r.argmin_is_mixed ? state_to_json(r.argmin_mixed)
                                             : state_to_json(r.argmin_pure)}};
    return njson{{"version", kVersion},
                 {"config", std::move(config)},
                 {"evidence_only", r.evidence_only},
                 {"violations", r.violations},
                 {"violation_indices", std::move(violation_indices)},
                 {"min_margin", r.min_margin},
                 {"min_margin_conservative", r.min_margin_conservative},
                 {"argmin", std::move(argmin)},
                 {"histogram", histogram_json(r.histogram)},
                 {"margins", r.margins},
                 {"margins_conservative", r.margins_conservative}};
}

struct CheckArgs {
    std::string file;
    std::string partition;
    std::string k_text = "chain";
    std::string method = "discord";
    std::uint64_t seed = 1;
};

int run_check(const CheckArgs& args) {
    LoadedState st = load_state_file(args.file);
    if (!args.partition.empty()) {
        PartitionSpec spec = PartitionSpec::parse(args.partition);
        spec.validate(st.dims().size());
        if (!spec.covers_all(st.dims().size())) {
            throw argument_error("--partition must mention every subsystem exactly once");
        }
        if (st.is_pure) {
            st.pure = group_parties(st.pure, spec);
        } else {
            st.mixed = group_parties(st.mixed, spec);
        }
    }
    const std::size_t n = st.dims().size();
    std::cout << "state: " << (st.is_pure ? "pure" : "mixed") << " dims " << dims_text(st.dims())
              << '\n';
    if (!args.partition.empty()) {
        std::cout << "partition: " << args.partition << '\n';
    }

    if (args.k_text == "chain") {
        if (!st.is_pure) {
            throw unsupported_error("chain reports require a pure state; pass --k <level>");
        }
        if (args.method != "discord") {
            throw unsupported_error("chain reports use the automatic routing; drop --method");
        }
        std::vector<MonogamyScore> chain = hierarchy_chain(st.pure);
        bool nondecreasing = true;
        for (std::size_t i = 0; i < chain.size(); ++i) {
            std::cout << "k" << (i + 3) << ": " << format_double(chain[i].score) << '\n';
            if (i > 0 && chain[i].score < chain[i - 1].score - 1e-9) nondecreasing = false;
        }
        std::cout << "chain_nondecreasing: " << (nondecreasing ? "yes" : "no") << '\n';
        return 0;
    }

    char* end = nullptr;
    unsigned long k_value = std::strtoul(args.k_text.c_str(), &end, 10);
    if (*end != '\0' || k_value == 0) {
        throw argument_error("--k must be an integer level or 'chain', got '" + args.k_text + "'");
    }
    std::size_t k = static_cast<std::size_t>(k_value);
    if (k < 3 || k > n) {
        throw argument_error("--k must lie in [3, " + std::to_string(n) + "], got " +
                             std::to_string(k));
    }

    IndicatorReport rep;
    if (args.method == "closed") {
        if (!st.is_pure) {
            throw unsupported_error("--method closed handles pure states only");
        }
        rep = indicator_closed(st.pure, k);
    } else if (args.method == "roof") {
        DensityMatrix rho = st.is_pure ? density(st.pure) : st.mixed;
        rep = tau_sef_k_mixed(rho, k, 1, 0, 16, args.seed);
    } else { // discord: measurement-based routing
        if (st.is_pure) {
            rep = tau_sef_k_pure(st.pure, k);
        } else {
            rep = tau_sef_k_mixed(st.mixed, k, 2, 0, 16, args.seed);
        }
    }
    print_indicator(rep, n, std::cout);
    return 0;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const argument_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const capacity_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const unsupported_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"monoqt: hierarchical monogamy of squared entanglement of formation and "
                 "squared concurrence for small multiqudit states"};
    app.set_version_flag("--version", std::string("monoqt ") + kVersion);
    app.require_subcommand(1);
    app.footer("Environment: MONOQT_THREADS caps worker threads (unset or 0 = all cores).");

    std::string out_path;

    auto* fig1 = app.add_subcommand(
        "fig1", "Closed-form W-state residual tau(k), k = 3..n (CSV)");
    std::size_t fig1_n = 20;
    fig1->add_option("--n", fig1_n, "number of qubits")->capture_default_str();
    fig1->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* fig2 = app.add_subcommand(
        "fig2", "Cavity-network indicator decomposition tau4 = tau3_pure + tau3_mixed over a "
                "kappa*t sweep (CSV)");
    double fig2_alpha = 0.57735026918962584; // alpha^2 = 1/3
    double fig2_kt_max = 5.0;
    std::size_t fig2_steps = 200;
    std::string fig2_partition = "c1_first";
    fig2->add_option("--alpha", fig2_alpha, "initial cavity amplitude, in [0, 1]")
        ->capture_default_str();
    fig2->add_option("--kt-max", fig2_kt_max, "sweep end (kappa*t)")->capture_default_str();
    fig2->add_option("--steps", fig2_steps, "number of rows")->capture_default_str();
    fig2->add_option("--partition", fig2_partition,
                     "peel order: c1_first | c1_r2_first | r1_first | r1_c2_first")
        ->capture_default_str();
    fig2->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* fig3 = app.add_subcommand(
        "fig3", "Squared-concurrence residual of a cavity qubit vs its reservoir partners on an "
                "(alpha, kappa*t) grid (CSV)");
    std::size_t fig3_grid = 20;
    double fig3_kt_max = 5.0;
    fig3->add_option("--grid", fig3_grid, "grid points per axis")->capture_default_str();
    fig3->add_option("--kt-max", fig3_kt_max, "kappa*t axis end")->capture_default_str();
    fig3->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* fig4 = app.add_subcommand(
        "fig4", "Monogamy scores of the 4x2x2 family versus theta (CSV)");
    std::size_t fig4_steps = 100;
    fig4->add_option("--steps", fig4_steps, "number of rows over [0, pi/2]")
        ->capture_default_str();
    fig4->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* derivs = app.add_subcommand(
        "derivs", "EOF-curve derivative table; endpoint rows last (CSV)");
    std::string derivs_variable = "c_sq";
    std::size_t derivs_steps = 100;
    derivs->add_option("variable", derivs_variable, "curve variable")
        ->check(CLI::IsMember({"c_sq", "c"}))
        ->capture_default_str();
    derivs->add_option("--steps", derivs_steps, "interior grid density")->capture_default_str();
    derivs->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* check = app.add_subcommand(
        "check", "Evaluate monogamy residuals of a state file");
    CheckArgs check_args;
    check->add_option("file", check_args.file, "JSON state file")->required();
    check->add_option("--partition", check_args.partition,
                      "regroup subsystems into parties, e.g. '0|1|2,3'");
    check->add_option("--k", check_args.k_text, "partition level (3..n) or 'chain'")
        ->capture_default_str();
    check->add_option("--method", check_args.method,
                      "closed (two-qubit formulas only) | discord (measurement routing) | roof")
        ->check(CLI::IsMember({"closed", "discord", "roof"}))
        ->capture_default_str();
    check->add_option("--seed", check_args.seed, "seed for optimizer-backed methods")
        ->capture_default_str();

    auto* fuzz = app.add_subcommand(
        "fuzz", "Randomized monogamy-inequality campaign (JSON report)");
    std::string fuzz_dims = "2,2,2";
    std::string fuzz_ineq;
    std::size_t fuzz_samples = 1000;
    std::uint64_t fuzz_seed = 1;
    std::size_t fuzz_rank = 0;
    double fuzz_tolerance = 1e-9;
    std::string fuzz_inject;
    fuzz->add_option("--dims", fuzz_dims, "subsystem dimensions, e.g. 2,2,2")
        ->capture_default_str();
    fuzz->add_option("--ineq", fuzz_ineq,
                     "inequality: sef_nqubit | sef_hierarchical | sc_nqubit | sef_2dd | sef_ddd")
        ->required();
    fuzz->add_option("--samples", fuzz_samples, "number of random states")->capture_default_str();
    fuzz->add_option("--seed", fuzz_seed, "campaign master seed")->capture_default_str();
    fuzz->add_option("--mixed-rank", fuzz_rank,
                     "sample mixed states of this rank (0 = pure samples)")
        ->capture_default_str();
    fuzz->add_option("--tolerance", fuzz_tolerance, "violation threshold")->capture_default_str();
    fuzz->add_option("--inject", fuzz_inject,
                     "replace sample 0 with a named state of matching dims");
    fuzz->add_option("--out", out_path, "output JSON path (default: stdout)");

    auto* state = app.add_subcommand(
        "state", "Inspect, validate, convert or create state files");
    std::string state_file_arg;
    std::string state_name;
    bool state_as_density = false;
    state->add_option("file", state_file_arg, "JSON state file to load");
    state->add_option("--name", state_name,
                      "create a named state instead: bell | ghz<N> | w<N> | cluster4 | ou333 | "
                      "s224 | s422:<theta>");
    state->add_flag("--as-density", state_as_density, "convert a pure state to a density matrix");
    state->add_option("--out", out_path, "write the (canonicalized) state to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }

    if (fig1->parsed()) {
        return guarded([&] {
            emit_dataset(fig1_dataset(fig1_n), out_path);
            return 0;
        });
    }
    if (fig2->parsed()) {
        return guarded([&] {
            emit_dataset(fig2_dataset(fig2_alpha, fig2_kt_max, fig2_steps, fig2_partition),
                         out_path);
            return 0;
        });
    }
    if (fig3->parsed()) {
        return guarded([&] {
            emit_dataset(fig3_dataset(fig3_grid, fig3_kt_max), out_path);
            return 0;
        });
    }
    if (fig4->parsed()) {
        return guarded([&] {
            emit_dataset(fig4_dataset(fig4_steps), out_path);
            return 0;
        });
    }
    if (derivs->parsed()) {
        return guarded([&] {
            CurveVariable variable =
                derivs_variable == "c" ? CurveVariable::C : CurveVariable::CSq;
            emit_dataset(derivs_dataset(variable, derivs_steps), out_path);
            return 0;
        });
    }
    if (check->parsed()) {
        return guarded([&] { return run_check(check_args); });
    }
    if (fuzz->parsed()) {
        return guarded([&] {
            CampaignConfig config;
            config.dims = parse_dims_text(fuzz_dims);
            config.samples = fuzz_samples;
            config.seed = fuzz_seed;
            config.mixed_rank = fuzz_rank;
            config.inequality = fuzz_ineq;
            config.tolerance = fuzz_tolerance;
            config.inject = fuzz_inject;
            CampaignReport report = run_campaign(config);
            emit_text(campaign_json(report).dump(2) + "\n", out_path);
            std::cerr << "fuzz: " << report.config.samples << " samples, " << report.violations
                      << " violations, min margin " << format_double(report.min_margin)
                      << (report.evidence_only ? " (evidence only)" : "") << '\n';
            return 0;
        });
    }
    if (state->parsed()) {
        return guarded([&] {
            if (state_file_arg.empty() == state_name.empty()) {
                std::cerr << "state: provide exactly one of FILE or --name\n";
                return 4;
            }
            LoadedState st;
            if (!state_name.empty()) {
                st.is_pure = true;
                st.pure = named_state(state_name);
            } else {
                st = load_state_file(state_file_arg);
            }
            if (state_as_density) {
                if (st.is_pure) {
                    st.mixed = density(st.pure);
                    st.is_pure = false;
                }
            }
            std::cout << "kind: " << (st.is_pure ? "pure" : "mixed") << '\n';
            std::cout << "dims: " << dims_text(st.dims()) << '\n';
            std::size_t total = 1;
            for (std::size_t d : st.dims()) total *= d;
            std::cout << "total_dim: " << total << '\n';
            if (!st.is_pure) {
                std::cout << "purity: " << format_double(purity(st.mixed)) << '\n';
            }
            if (!out_path.empty()) {
                if (st.is_pure) {
                    save_state_file(st.pure, out_path);
                } else {
                    save_state_file(st.mixed, out_path);
                }
                std::cout << "written: " << out_path << '\n';
            }
            return 0;
        });
    }
    return 4;
}

} // namespace monoqt
