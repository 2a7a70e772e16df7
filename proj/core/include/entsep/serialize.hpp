#pragma once

#include <string>

#include "entsep/criteria.hpp"
#include "entsep/experiment.hpp"
#include "entsep/scan.hpp"
#include "entsep/witness.hpp"

namespace entsep {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"dims": [dA, dB, …], "re": [[…]], "im": [[…]]}; "im" may be omitted.
std::string state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const std::string& text);

/// Same layout without "dims"; used for custom U files.
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

/// One-line object {name, alpha, lhs, rhs, margin, satisfied, assumption_ok, tol}
/// plus "note" when present. alpha is a number, "inf", or null.
std::string report_to_json(const CriterionReport& report);

/// Matrix layout plus {"source", "copies", "per_copy_dims"}. Dense "re"/"im"
/// up to side 256, sparse "entries" [[row, col, re, im], …] above that.
std::string witness_to_json(const MultiCopyWitness& w);

/// Schema in docs/scan_spec.md.
ScanSpec scan_spec_from_json(const std::string& text);
std::string scan_spec_to_json(const ScanSpec& spec);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace entsep
