#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entsep/criteria.hpp"

namespace entsep {

enum class Family { BellDiagonal, BellMixture, DiVincenzo, So3 };

std::string family_name(Family f);
/// Accepts bell_diagonal, bell_mixture, divincenzo, so3_4x4 (alias so3).
Family parse_family(const std::string& name);
/// Free parameters in canonical order.
const std::vector<std::string>& family_parameters(Family f);
DimSpec family_dims(Family f);

using ParamMap = std::map<std::string, double>;

/// Simplex/tetrahedron membership with 1e-12 slack; throws on missing names.
bool family_point_valid(Family f, const ParamMap& params);
DensityMatrix family_state(Family f, const ParamMap& params);

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  double value(int k) const;
};

enum class UChoice {
  Auto,       // spin-flip V for so3_4x4, canonical V otherwise
  Canonical,
  SpinFlip,
  Custom,
};

struct ScanSpec {
  Family family = Family::So3;
  ParamMap fixed;
  std::vector<Axis> axes;
  std::vector<CriterionRequest> criteria;
  UChoice u_choice = UChoice::Auto;
  std::optional<ComplexMatrix> custom_u;
  CriterionOptions options;
  /// 0 selects the hardware concurrency.
  int threads = 0;

  /// Throws std::invalid_argument on unknown names, steps < 2, overlapping or
  /// missing parameters, or a missing custom U.
  void validate() const;
  std::size_t point_count() const;
};

/// Unitary used for the reversed factor, or empty when no factor is even.
std::optional<AntisymmetricUnitary> resolve_u(Family f, UChoice choice, const std::optional<ComplexMatrix>& custom);

struct ScanRow {
  std::vector<double> coords;
  bool valid = false;
  /// One report per requested criterion; empty for invalid points.
  std::vector<CriterionReport> reports;
};

struct RegionScan {
  ScanSpec spec;
  std::vector<ScanRow> rows;

  /// Index of a criterion by label, or throws.
  std::size_t criterion_index(const std::string& label) const;
};

ScanRow classify_point(Family f, const ParamMap& params, const std::vector<CriterionRequest>& criteria,
                       const std::optional<AntisymmetricUnitary>& u, const CriterionOptions& opts = {});

/// Rows are ordered with the first axis outermost, independent of threads.
RegionScan run_scan(const ScanSpec& spec);

void emit_csv(const RegionScan& scan, std::ostream& out);
std::string scan_csv(const RegionScan& scan);
/// Heatmap over the first two axes for one criterion label.
std::string scan_svg(const RegionScan& scan, const std::string& criterion_label);

/// Valid points where criterion x is violated while y is satisfied.
std::size_t count_violated_but_satisfied(const RegionScan& scan, const std::string& x, const std::string& y);
std::size_t count_violated(const RegionScan& scan, const std::string& label);
std::size_t count_valid(const RegionScan& scan);

}  // namespace entsep
