#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "monoqt/dataset.hpp"
#include "monoqt/errors.hpp"
#include "monoqt/state.hpp"
#include "monoqt/state_file.hpp"
#include "test_util.hpp"

using namespace monoqt;

TEST_CASE("csv write and parse round-trips every double bit-exactly") {
    FigureDataset data;
    data.columns = {"a", "b"};
    data.provenance = {"command: monoqt fig1 --n 4", "version: test"};
    data.rows = {{0.1, 1.0 / 3.0},
                 {1e-300, 12345.678901234567},
                 {-0.0, 0.0},
                 {std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()}};
    std::ostringstream out;
    write_csv(data, out);
    std::istringstream in(out.str());
    FigureDataset back = parse_csv(in);
    CHECK(back.columns == data.columns);
    CHECK(back.provenance == data.provenance);
    REQUIRE(back.rows.size() == data.rows.size());
    for (std::size_t r = 0; r < data.rows.size(); ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            double expect = data.rows[r][c];
            double got = back.rows[r][c];
            if (std::isinf(expect)) {
                CHECK(got == expect);
            } else {
                CHECK(got == expect); // bit-exact, including subnormal-range values
            }
        }
}

TEST_CASE("csv parser reports malformed input with line numbers") {
    std::istringstream missing_header("# only a comment\n");
    CHECK_THROWS_AS(parse_csv(missing_header), argument_error);

    std::istringstream bad_number("x,y\n1,banana\n");
    CHECK_THROWS_WITH_AS(parse_csv(bad_number),
                         "csv line 2: cannot parse number from 'banana'", argument_error);

    std::istringstream wrong_width("x,y\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(parse_csv(wrong_width), "csv line 3: expected 2 fields, found 1",
                         argument_error);
}

TEST_CASE("figure one dataset lists one row per level") {
    FigureDataset data = fig1_dataset(20);
    CHECK(data.columns == std::vector<std::string>{"k", "tau"});
    REQUIRE(data.rows.size() == 18);
    CHECK(data.rows.front()[0] == 3.0);
    CHECK_NEAR(data.rows.front()[1], 0.006026465008940399, 1e-15);
    CHECK(data.rows.back()[0] == 20.0);
    CHECK_NEAR(data.rows.back()[1], 0.06989405004913891, 1e-15);
    for (std::size_t i = 1; i < data.rows.size(); ++i)
        CHECK(data.rows[i][1] > data.rows[i - 1][1]);
    CHECK_THROWS_AS(fig1_dataset(2), argument_error);
}

TEST_CASE("figure two dataset satisfies the decomposition identity row by row") {
    FigureDataset data = fig2_dataset(1.0 / std::sqrt(3.0), 5.0, 9, "c1_first");
    CHECK(data.columns == std::vector<std::string>{"kt", "tau4", "tau3_pure", "tau3_mixed"});
    REQUIRE(data.rows.size() == 9);
    CHECK(data.rows.front()[0] == 0.0);
    CHECK(data.rows.back()[0] == 5.0);
    for (const auto& row : data.rows) CHECK_NEAR(row[1], row[2] + row[3], 1e-10);
    // the decay starts fully coherent: no mixed-side contribution at kt = 0
    CHECK_NEAR(data.rows.front()[3], 0.0, 1e-12);
    CHECK_THROWS_AS(fig2_dataset(0.5, 5.0, 9, "sideways"), argument_error);
    CHECK_THROWS_AS(fig2_dataset(1.5, 5.0, 9, "c1_first"), argument_error);
}

TEST_CASE("figure three dataset covers the grid with nonnegative residuals") {
    FigureDataset data = fig3_dataset(6, 5.0);
    CHECK(data.columns ==
          std::vector<std::string>{"alpha", "kt", "c_sq_joint", "sc_residual"});
    REQUIRE(data.rows.size() == 36);
    for (const auto& row : data.rows) {
        CHECK(row[2] >= 0.0);
        CHECK(row[3] >= -1e-9);
    }
    // closed form spot check: alpha = 0.4, kt = 2.0
    CavityParams p = make_cavity_params(0.4, 2.0);
    double expect = 4.0 * p.beta * p.beta * p.xi() * p.xi() * p.chi() * p.chi();
    bool found = false;
    for (const auto& row : data.rows) {
        if (std::abs(row[0] - 0.4) < 1e-12 && std::abs(row[1] - 2.0) < 1e-12) {
            CHECK_NEAR(row[2], expect, 1e-14);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("figure four dataset spans theta with its closed-form columns") {
    FigureDataset data = fig4_dataset(101);
    CHECK(data.columns == std::vector<std::string>{"theta", "m_sef", "m_sc"});
    REQUIRE(data.rows.size() == 101);
    CHECK(data.rows.front()[0] == 0.0);
    CHECK_NEAR(data.rows.back()[0], 2.0 * std::atan(1.0), 1e-15);
    // midpoint row: theta = pi/4
    CHECK_NEAR(data.rows[50][1], 2.0, 1e-12);
    CHECK_NEAR(data.rows[50][2], -0.5, 1e-12);
    // squared-eof score stays nonnegative while squared concurrence dips
    for (const auto& row : data.rows) {
        CHECK(row[1] >= -1e-12);
        CHECK(row[2] <= 1e-12);
    }
}

TEST_CASE("derivative dataset keeps interior rows ordered and endpoints last") {
    FigureDataset data = derivs_dataset(CurveVariable::CSq, 50);
    REQUIRE(data.rows.size() == 51);
    for (std::size_t i = 1; i + 2 < data.rows.size(); ++i)
        CHECK(data.rows[i][0] > data.rows[i - 1][0]);
    const auto& zero_row = data.rows[data.rows.size() - 2];
    const auto& one_row = data.rows.back();
    CHECK(zero_row[0] == 0.0);
    CHECK(std::isinf(zero_row[2]));
    CHECK(one_row[0] == 1.0);
    CHECK_NEAR(one_row[2], -2.0 / (3.0 * std::log(16.0)), 1e-12);
    for (std::size_t i = 0; i + 2 < data.rows.size(); ++i) CHECK(data.rows[i][2] < 0.0);

    FigureDataset plain = derivs_dataset(CurveVariable::C, 50);
    CHECK_NEAR(plain.rows.back()[2], 2.0 / (3.0 * std::log(4.0)), 1e-12);
    for (std::size_t i = 0; i + 2 < plain.rows.size(); ++i) CHECK(plain.rows[i][2] > 0.0);
}

TEST_CASE("state files round-trip pure states exactly") {
    PureState psi = named_state("s422:0.37");
    const std::string path = "roundtrip_pure.json";
    save_state_file(psi, path);
    LoadedState loaded = load_state_file(path);
    CHECK(loaded.is_pure);
    CHECK(loaded.pure.dims == psi.dims);
    REQUIRE(loaded.pure.amp.size() == psi.amp.size());
    for (std::size_t i = 0; i < psi.amp.size(); ++i) CHECK(loaded.pure.amp[i] == psi.amp[i]);
    std::remove(path.c_str());
}

TEST_CASE("state files round-trip density matrices exactly") {
    DensityMatrix rho = reduced_density(named_state("w4"), {0, 2});
    const std::string path = "roundtrip_mixed.json";
    save_state_file(rho, path);
    LoadedState loaded = load_state_file(path);
    CHECK_FALSE(loaded.is_pure);
    CHECK(loaded.mixed.dims == rho.dims);
    for (std::size_t i = 0; i < rho.mat.a.size(); ++i)
        CHECK(loaded.mixed.mat.a[i] == rho.mat.a[i]);
    std::remove(path.c_str());
}

TEST_CASE("state json validation names the offending field") {
    using njson = nlohmann::ordered_json;
    CHECK_THROWS_AS(state_from_json(njson::array()), argument_error);
    CHECK_THROWS_AS(state_from_json(njson{{"dims", {2, 2}}, {"data", njson::array()}}),
                    argument_error); // missing kind
    CHECK_THROWS_AS(state_from_json(njson{{"kind", "quantum"}, {"dims", {2}}, {"data", {}}}),
                    argument_error); // bad kind
    CHECK_THROWS_AS(state_from_json(njson{{"kind", "pure"}, {"dims", {2, 0}}, {"data", {}}}),
                    argument_error); // bad dimension

    njson short_data{{"kind", "pure"}, {"dims", {2, 2}},
                     {"data", {{1.0, 0.0}, {0.0, 0.0}}}};
    CHECK_THROWS_AS(state_from_json(short_data), argument_error);

    njson bad_pair{{"kind", "pure"}, {"dims", {2}}, {"data", {{1.0, 0.0}, {0.5}}}};
    CHECK_THROWS_WITH_AS(state_from_json(bad_pair),
                         "state file: data[1]: expected an [re, im] number pair",
                         argument_error);

    // norm violations surface as contract errors after parsing
    njson off_norm{{"kind", "pure"}, {"dims", {2}}, {"data", {{0.5, 0.0}, {0.0, 0.0}}}};
    CHECK_THROWS_AS(state_from_json(off_norm), contract_error);
}

TEST_CASE("loaded states expose a uniform density view") {
    using njson = nlohmann::ordered_json;
    njson pure{{"kind", "pure"}, {"dims", {2}}, {"data", {{1.0, 0.0}, {0.0, 0.0}}}};
    LoadedState st = state_from_json(pure);
    DensityMatrix rho = st.as_density();
    CHECK(rho.dims == std::vector<std::size_t>{2});
    CHECK_NEAR(rho.mat.at(0, 0).real(), 1.0, 1e-15);
}

TEST_CASE("missing files are reported as input errors") {
    CHECK_THROWS_AS(load_state_file("no/such/file.json"), argument_error);
    CHECK_THROWS_AS(parse_csv_file("no/such/file.csv"), argument_error);
}
