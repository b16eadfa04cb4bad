#include "monoqt/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "monoqt/errors.hpp"
#include "monoqt/monogamy.hpp"
#include "monoqt/state.hpp"
#include "monoqt/version.hpp"

namespace monoqt {

namespace {

std::string command_provenance(const std::string& command) {
    return "command: monoqt " + command;
}

std::string version_provenance() {
    return std::string("version: ") + kVersion;
}

double parse_field(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || static_cast<std::size_t>(end - begin) != field.size()) {
        throw argument_error("csv line " + std::to_string(line_no) +
                             ": cannot parse number from '" + field + "'");
    }
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(current);
    return fields;
}

} // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_csv(const FigureDataset& data, std::ostream& out) {
    for (const auto& note : data.provenance) {
        out << "# " << note << '\n';
    }
    for (std::size_t i = 0; i < data.columns.size(); ++i) {
        if (i > 0) out << ',';
        out << data.columns[i];
    }
    out << '\n';
    for (const auto& row : data.rows) {
        if (row.size() != data.columns.size()) {
            throw contract_error("csv row width " + std::to_string(row.size()) +
                                 " does not match " + std::to_string(data.columns.size()) +
                                 " columns");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
}

void write_csv_file(const FigureDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw argument_error("cannot open for writing: " + path);
    }
    write_csv(data, out);
    out.flush();
    if (!out) {
        throw argument_error("write failed: " + path);
    }
}

FigureDataset parse_csv(std::istream& in) {
    FigureDataset data;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::size_t start = 1;
            if (start < line.size() && line[start] == ' ') ++start;
            data.provenance.push_back(line.substr(start));
            continue;
        }
        std::vector<std::string> fields = split_fields(line);
        if (!have_header) {
            for (const auto& name : fields) {
                if (name.empty()) {
                    throw argument_error("csv line " + std::to_string(line_no) +
                                         ": empty column name in header");
                }
            }
            data.columns = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != data.columns.size()) {
            throw argument_error("csv line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(data.columns.size()) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            row[i] = parse_field(fields[i], line_no);
        }
        data.rows.push_back(std::move(row));
    }
    if (!have_header) {
        throw argument_error("csv input has no header row");
    }
    return data;
}

FigureDataset parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw argument_error("cannot open for reading: " + path);
    }
    return parse_csv(in);
}

FigureDataset fig1_dataset(std::size_t n) {
    if (n < 3) {
        throw argument_error("fig1 requires n >= 3, got " + std::to_string(n));
    }
    FigureDataset data;
    data.columns = {"k", "tau"};
    data.provenance = {command_provenance("fig1 --n " + std::to_string(n)),
                       version_provenance()};
    for (std::size_t k = 3; k <= n; ++k) {
        data.rows.push_back({static_cast<double>(k), tau_w_state_closed_form(n, k)});
    }
    return data;
}

FigureDataset fig2_dataset(double alpha, double kt_max, std::size_t steps,
                           const std::string& partition) {
    if (steps < 2) {
        throw argument_error("fig2 requires at least 2 steps, got " + std::to_string(steps));
    }
    if (!(kt_max > 0.0) || !std::isfinite(kt_max)) {
        throw argument_error("fig2 requires kt-max > 0");
    }
    FigureDataset data;
    data.columns = {"kt", "tau4", "tau3_pure", "tau3_mixed"};
    data.provenance = {command_provenance("fig2 --alpha " + format_double(alpha) +
                                          " --kt-max " + format_double(kt_max) +
                                          " --steps " + std::to_string(steps) +
                                          " --partition " + partition),
                       version_provenance()};
    for (std::size_t i = 0; i < steps; ++i) {
        double kt = kt_max * static_cast<double>(i) / static_cast<double>(steps - 1);
        CavityParams params = make_cavity_params(alpha, kt);
        CavityIndicatorDecomposition dec = cavity_indicator_decomposition(params, partition);
        data.rows.push_back({kt, dec.tau4, dec.tau3_pure, dec.tau3_mixed});
    }
    return data;
}

FigureDataset fig3_dataset(std::size_t grid, double kt_max) {
    if (grid < 2) {
        throw argument_error("fig3 requires grid >= 2, got " + std::to_string(grid));
    }
    if (!(kt_max > 0.0) || !std::isfinite(kt_max)) {
        throw argument_error("fig3 requires kt-max > 0");
    }
    FigureDataset data;
    data.columns = {"alpha", "kt", "c_sq_joint", "sc_residual"};
    data.provenance = {command_provenance("fig3 --grid " + std::to_string(grid) +
                                          " --kt-max " + format_double(kt_max)),
                       version_provenance()};
    for (std::size_t i = 0; i < grid; ++i) {
        double alpha = static_cast<double>(i) / static_cast<double>(grid - 1);
        for (std::size_t j = 0; j < grid; ++j) {
            double kt = kt_max * static_cast<double>(j) / static_cast<double>(grid - 1);
            CavityParams params = make_cavity_params(alpha, kt);
            double beta_sq = params.beta * params.beta;
            double xi_sq = params.xi() * params.xi();
            double chi_sq = params.chi() * params.chi();
            // Squared concurrence of the first cavity qubit against both
            // reservoir qubits together; closed form for this state family.
            double c_sq_joint = 4.0 * beta_sq * xi_sq * chi_sq;
            PureState psi = cavity_state(params);
            DensityMatrix rho_c1_r1 = reduced_density(psi, {0, 1});
            DensityMatrix rho_c1_r2 = reduced_density(psi, {0, 3});
            double c_r1 = concurrence_two_qubit(rho_c1_r1);
            double c_r2 = concurrence_two_qubit(rho_c1_r2);
            double residual = c_sq_joint - c_r1 * c_r1 - c_r2 * c_r2;
            data.rows.push_back({alpha, kt, c_sq_joint, residual});
        }
    }
    return data;
}

FigureDataset fig4_dataset(std::size_t steps) {
    if (steps < 2) {
        throw argument_error("fig4 requires at least 2 steps, got " + std::to_string(steps));
    }
    FigureDataset data;
    data.columns = {"theta", "m_sef", "m_sc"};
    data.provenance = {command_provenance("fig4 --steps " + std::to_string(steps)),
                       version_provenance()};
    const double half_pi = 2.0 * std::atan(1.0);
    for (std::size_t i = 0; i < steps; ++i) {
        double theta = half_pi * static_cast<double>(i) / static_cast<double>(steps - 1);
        Scores422 scores = analysis_422(theta);
        data.rows.push_back({theta, scores.m_sef, scores.m_sc});
    }
    return data;
}

FigureDataset derivs_dataset(CurveVariable variable, std::size_t steps) {
    if (steps < 2) {
        throw argument_error("derivs requires at least 2 steps, got " + std::to_string(steps));
    }
    FigureDataset data;
    data.columns = {"at", "first", "second"};
    const char* name = variable == CurveVariable::CSq ? "c_sq" : "c";
    data.provenance = {command_provenance("derivs " + std::string(name) + " --steps " +
                                          std::to_string(steps)),
                       version_provenance()};
    auto push = [&](double at) {
        DerivativeBundle d = eof_derivatives(at, variable);
        data.rows.push_back({at, d.first, d.second});
    };
    for (std::size_t i = 1; i < steps; ++i) {
        push(static_cast<double>(i) / static_cast<double>(steps));
    }
    // Endpoint rows last: the divergent end reports signed-infinity
    // sentinels, the finite end the analytic one-sided limits.
    push(0.0);
    push(1.0);
    return data;
}

} // namespace monoqt
