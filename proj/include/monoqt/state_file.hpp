#pragma once

// JSON state files.
//
// Format: an object with three fields,
//   kind  "pure" or "mixed"
//   dims  array of subsystem dimensions (most significant first)
//   data  flat array of [re, im] pairs; amplitudes for a pure state,
//         row-major density-matrix entries for a mixed state
//
// Loading validates shape and field types with diagnostics that name the
// offending field, then runs the usual state constructors (norm band for
// pure states, Hermiticity/trace checks for density matrices).  Saving uses
// shortest-round-trip number formatting, so save -> load reproduces every
// entry exactly.

#include <string>

#include "json.hpp"
#include "monoqt/state.hpp"

namespace monoqt {

struct LoadedState {
    bool is_pure = true;
    PureState pure;      // meaningful when is_pure
    DensityMatrix mixed; // meaningful when !is_pure

    const std::vector<std::size_t>& dims() const { return is_pure ? pure.dims : mixed.dims; }
    // Uniform mixed view; materializes |psi><psi| for pure inputs
    // (subject to the usual 64-dimension density-matrix capacity).
    DensityMatrix as_density() const;
};

nlohmann::ordered_json state_to_json(const PureState& psi);
nlohmann::ordered_json state_to_json(const DensityMatrix& rho);
LoadedState state_from_json(const nlohmann::ordered_json& j);

void save_state_file(const PureState& psi, const std::string& path);
void save_state_file(const DensityMatrix& rho, const std::string& path);

// Throws argument_error for unreadable files, malformed JSON (with the
// parser's position info) and schema violations (naming the field);
// contract_error surfaces from state validation (norm, Hermiticity, trace).
LoadedState load_state_file(const std::string& path);

} // namespace monoqt
