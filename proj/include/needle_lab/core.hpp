// SPDX-License-Identifier: Apache-2.0
//
// Domain types shared by every needle_lab module: grid cells, dropped shapes,
// length regimes and the error type.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace needle_lab {

enum class ErrorCode {
  NonPositiveDimension,
  NegativeLength,
  NonFiniteValue,
  SigmaExceedsCell,
  DomainError,
  NoConvergence,
  StructureNotFound,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Unit cell of the line grid. Canonical cells have a >= b.
struct GridCell {
  double a;
  double b;

  /// Cell diagonal L.
  double diagonal() const;
  /// Diagonal of the cell shrunk by sigma on both axes (L-hat); the longest
  /// spherocylinder of diameter sigma that still fits inside the cell.
  double shrunk_diagonal(double sigma) const;
};

struct Needle {
  double length;
};

struct Spherocylinder {
  double length;
  double diameter;
};

using Shape = std::variant<Needle, Spherocylinder>;

double shape_length(const Shape& shape);
/// Diameter of the shape; 0 for a needle.
double shape_diameter(const Shape& shape);
bool is_spherocylinder(const Shape& shape);

enum class Embedding { TwoD, ThreeD };

/// The four problem versions: {needle, spherocylinder} x {2D, 3D}.
enum class Variant { Needle2D, Spherocylinder2D, Needle3D, Spherocylinder3D };

Variant variant_of(const Shape& shape, Embedding embedding);
Embedding embedding_of(Variant variant);
bool is_spherocylinder(Variant variant);
std::string_view to_string(Variant variant);
/// Parses "2d-needle", "2d-sc", "3d-needle" or "3d-sc".
Variant parse_variant(std::string_view name);

enum class RegimeKind { Short, MidB, MidA, Long };

std::string_view to_string(RegimeKind kind);

/// Half-open length interval (lower, upper] selecting one closed form.
/// Short is closed at zero; Long has upper = +inf.
struct Regime {
  RegimeKind kind;
  double lower;
  double upper;
};

struct Probability {
  double value;
  RegimeKind regime;
};

/// Validates raw parameters and returns the canonical (a >= b) cell.
/// A spherocylinder with zero diameter comes back as a needle.
std::pair<GridCell, Shape> validate_and_canonicalize(double a, double b, const Shape& shape);

/// Regime thresholds (b - sigma, a - sigma, L-hat) for sigma = diameter.
struct Thresholds {
  double short_upper;
  double mid_b_upper;
  double mid_a_upper;
};

Thresholds regime_thresholds(const GridCell& grid, double sigma);

/// Regime whose interval contains the shape length. Threshold values belong
/// to the lower regime. Throws SigmaExceedsCell when sigma >= b.
Regime classify_regime(const Shape& shape, const GridCell& grid);

}  // namespace needle_lab
