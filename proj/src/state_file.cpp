#include "monoqt/state_file.hpp"

#include <fstream>
#include <utility>

#include "monoqt/errors.hpp"

namespace monoqt {

namespace {

using njson = nlohmann::ordered_json;

njson pair_json(const cplx& z) {
    return njson::array({z.real(), z.imag()});
}

cplx parse_pair(const njson& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw argument_error("state file: " + where + ": expected an [re, im] number pair");
    }
    return cplx(j[0].get<double>(), j[1].get<double>());
}

std::vector<std::size_t> parse_dims(const njson& j) {
    if (!j.contains("dims")) {
        throw argument_error("state file: missing field 'dims'");
    }
    const njson& jd = j.at("dims");
    if (!jd.is_array() || jd.empty()) {
        throw argument_error("state file: 'dims' must be a non-empty array");
    }
    std::vector<std::size_t> dims;
    dims.reserve(jd.size());
    for (std::size_t i = 0; i < jd.size(); ++i) {
        const njson& entry = jd[i];
        if (!entry.is_number_integer() || entry.get<long long>() < 1) {
            throw argument_error("state file: dims[" + std::to_string(i) +
                                 "]: must be a positive integer");
        }
        dims.push_back(static_cast<std::size_t>(entry.get<long long>()));
    }
    return dims;
}

std::vector<cplx> parse_data(const njson& j, std::size_t expected, const char* role) {
    if (!j.contains("data")) {
        throw argument_error("state file: missing field 'data'");
    }
    const njson& jd = j.at("data");
    if (!jd.is_array()) {
        throw argument_error("state file: 'data' must be an array");
    }
    if (jd.size() != expected) {
        throw argument_error("state file: 'data' holds " + std::to_string(jd.size()) +
                             " entries but " + std::to_string(expected) + " " + role +
                             " are required by 'dims'");
    }
    std::vector<cplx> values;
    values.reserve(expected);
    for (std::size_t i = 0; i < jd.size(); ++i) {
        values.push_back(parse_pair(jd[i], "data[" + std::to_string(i) + "]"));
    }
    return values;
}

void write_json_file(const njson& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw argument_error("cannot open for writing: " + path);
    }
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) {
        throw argument_error("write failed: " + path);
    }
}

} // namespace

DensityMatrix LoadedState::as_density() const {
    return is_pure ? density(pure) : mixed;
}

nlohmann::ordered_json state_to_json(const PureState& psi) {
    njson data = njson::array();
    for (const cplx& z : psi.amp) {
        data.push_back(pair_json(z));
    }
    return njson{{"kind", "pure"}, {"dims", psi.dims}, {"data", std::move(data)}};
}

nlohmann::ordered_json state_to_json(const DensityMatrix& rho) {
    njson data = njson::array();
    for (const cplx& z : rho.mat.a) {
        data.push_back(pair_json(z));
    }
    return njson{{"kind", "mixed"}, {"dims", rho.dims}, {"data", std::move(data)}};
}

LoadedState state_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) {
        throw argument_error("state file: top level must be a JSON object");
    }
    if (!j.contains("kind")) {
        throw argument_error("state file: missing field 'kind'");
    }
    const njson& jk = j.at("kind");
    if (!jk.is_string()) {
        throw argument_error("state file: 'kind' must be a string");
    }
    const std::string kind = jk.get<std::string>();
    std::vector<std::size_t> dims = parse_dims(j);
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (total > (std::size_t{1} << 20) / d + 1) {
            throw argument_error("state file: 'dims' product is too large");
        }
        total *= d;
    }

    LoadedState loaded;
    if (kind == "pure") {
        std::vector<cplx> amp = parse_data(j, total, "amplitudes");
        loaded.is_pure = true;
        loaded.pure = PureState(std::move(dims), std::move(amp));
    } else if (kind == "mixed") {
        std::vector<cplx> entries = parse_data(j, total * total, "matrix entries");
        ComplexMatrix mat(total, total);
        mat.a = std::move(entries);
        loaded.is_pure = false;
        loaded.mixed = make_density(std::move(dims), std::move(mat));
    } else {
        throw argument_error("state file: 'kind' must be \"pure\" or \"mixed\", got \"" +
                             kind + "\"");
    }
    return loaded;
}

void save_state_file(const PureState& psi, const std::string& path) {
    write_json_file(state_to_json(psi), path);
}

void save_state_file(const DensityMatrix& rho, const std::string& path) {
    write_json_file(state_to_json(rho), path);
}

LoadedState load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw argument_error("cannot open for reading: " + path);
    }
    njson j;
    try {
        j = njson::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw argument_error(std::string("state file: ") + ex.what());
    }
    return state_from_json(j);
}

} // namespace monoqt
