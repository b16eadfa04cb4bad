#pragma once

// Tabular figure datasets with CSV serialization.
//
// A FigureDataset is a small column-named table of doubles plus provenance
// comments (command line, seed, version) that are emitted as '#' lines ahead
// of the CSV header.  Numbers are written with 17 significant digits so that
// write -> parse round-trips reproduce every double bit-exactly, including
// the signed-infinity sentinels used for divergent derivative endpoints.
//
// The fig*_dataset builders produce the library's standard result tables:
//   fig1    W-state residual tau(k) for k = 3..n (closed form).
//   fig2    cavity-network indicator decomposition tau4 = tau3_pure + tau3_mixed
//           over a kappa*t sweep for one of the four hierarchy orderings.
//   fig3    squared-concurrence residual of the cavity qubit against its two
//           reservoir partners over an (alpha, kappa*t) grid.
//   fig4    monogamy scores m_sef = 2 h(cos^2 theta) and
//           m_sc = -2 cos^2 theta sin^2 theta for the 4x2x2 family.
//   derivs  first/second derivatives of the entanglement-of-formation curve
//           versus squared concurrence (or concurrence), interior points in
//           ascending order followed by the 0 and 1 endpoint rows.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "monoqt/measures.hpp"

namespace monoqt {

struct FigureDataset {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;   // each row has columns.size() entries
    std::vector<std::string> provenance;     // emitted as leading '# ' comments
};

// Serializes provenance comments, a header row, then one CSV line per row.
void write_csv(const FigureDataset& data, std::ostream& out);
void write_csv_file(const FigureDataset& data, const std::string& path);

// Parses the write_csv format; '#' comments are collected back into
// provenance.  Throws argument_error with a line number on malformed input
// (wrong field count, unparseable number, empty header).
FigureDataset parse_csv(std::istream& in);
FigureDataset parse_csv_file(const std::string& path);

// Formats a double with enough digits to round-trip exactly ("%.17g").
std::string format_double(double value);

FigureDataset fig1_dataset(std::size_t n);
FigureDataset fig2_dataset(double alpha, double kt_max, std::size_t steps,
                           const std::string& partition);
FigureDataset fig3_dataset(std::size_t grid, double kt_max);
FigureDataset fig4_dataset(std::size_t steps);
FigureDataset derivs_dataset(CurveVariable variable, std::size_t steps);

} // namespace monoqt
