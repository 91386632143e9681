// SPDX-License-Identifier: Apache-2.0
#include "needle_lab/core.hpp"

#include <cmath>
#include <limits>

namespace needle_lab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveDimension: return "NonPositiveDimension";
    case ErrorCode::NegativeLength: return "NegativeLength";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::SigmaExceedsCell: return "SigmaExceedsCell";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::StructureNotFound: return "StructureNotFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double GridCell::diagonal() const { return std::hypot(a, b); }

double GridCell::shrunk_diagonal(double sigma) const { return std::hypot(a - sigma, b - sigma); }

double shape_length(const Shape& shape) {
  return std::visit([](const auto& s) { return s.length; }, shape);
}

double shape_diameter(const Shape& shape) {
  if (const auto* sc = std::get_if<Spherocylinder>(&shape)) return sc->diameter;
  return 0.0;
}

bool is_spherocylinder(const Shape& shape) { return std::holds_alternative<Spherocylinder>(shape); }

Variant variant_of(const Shape& shape, Embedding embedding) {
  const bool sc = is_spherocylinder(shape);
  if (embedding == Embedding::TwoD) return sc ? Variant::Spherocylinder2D : Variant::Needle2D;
  return sc ? Variant::Spherocylinder3D : Variant::Needle3D;
}

Embedding embedding_of(Variant variant) {
  return (variant == Variant::Needle2D || variant == Variant::Spherocylinder2D) ? Embedding::TwoD
                                                                                : Embedding::ThreeD;
}

bool is_spherocylinder(Variant variant) {
  return variant == Variant::Spherocylinder2D || variant == Variant::Spherocylinder3D;
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::Needle2D: return "2d-needle";
    case Variant::Spherocylinder2D: return "2d-sc";
    case Variant::Needle3D: return "3d-needle";
    case Variant::Spherocylinder3D: return "3d-sc";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "2d-needle") return Variant::Needle2D;
  if (name == "2d-sc") return Variant::Spherocylinder2D;
  if (name == "3d-needle") return Variant::Needle3D;
  if (name == "3d-sc") return Variant::Spherocylinder3D;
  throw Error(ErrorCode::InvalidArgument, "unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Short: return "Short";
    case RegimeKind::MidB: return "MidB";
    case RegimeKind::MidA: return "MidA";
    case RegimeKind::Long: return "Long";
  }
  return "Unknown";
}

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteValue, std::string(name) + " must be finite");
  }
}

void require_positive(double value, const char* name) {
  require_finite(value, name);
  if (value <= 0.0) {
    throw Error(ErrorCode::NonPositiveDimension, std::string(name) + " must be positive");
  }
}

}  // namespace

std::pair<GridCell, Shape> validate_and_canonicalize(double a, double b, const Shape& shape) {
  require_positive(a, "a");
  require_positive(b, "b");

  const double length = shape_length(shape);
  require_finite(length, "l");
  if (length < 0.0) throw Error(ErrorCode::NegativeLength, "l must be non-negative");

  Shape canonical = shape;
  if (const auto* sc = std::get_if<Spherocylinder>(&shape)) {
    require_finite(sc->diameter, "sigma");
    if (sc->diameter < 0.0) {
      throw Error(ErrorCode::NonPositiveDimension, "sigma must be positive");
    }
    if (sc->diameter == 0.0) canonical = Needle{length};
  }

  const GridCell grid = a >= b ? GridCell{a, b} : GridCell{b, a};
  return {grid, canonical};
}

Thresholds regime_thresholds(const GridCell& grid, double sigma) {
  return {grid.b - sigma, grid.a - sigma, grid.shrunk_diagonal(sigma)};
}

Regime classify_regime(const Shape& shape, const GridCell& grid) {
  const double sigma = shape_diameter(shape);
  if (sigma >= grid.b) {
    throw Error(ErrorCode::SigmaExceedsCell, "sigma >= b: regime classification undefined");
  }
  const double l = shape_length(shape);
  const Thresholds th = regime_thresholds(grid, sigma);
  if (l <= th.short_upper) return {RegimeKind::Short, 0.0, th.short_upper};
  if (l <= th.mid_b_upper) return {RegimeKind::MidB, th.short_upper, th.mid_b_upper};
  if (l <= th.mid_a_upper) return {RegimeKind::MidA, th.mid_b_upper, th.mid_a_upper};
  return {RegimeKind::Long, th.mid_a_upper, std::numeric_limits<double>::infinity()};
}

}  // namespace needle_lab
