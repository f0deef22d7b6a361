#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "charflow/interval_set.hpp"

namespace charflow {

enum class FieldKind {
  kConstant,
  kClampedRotation,
  kSmooth1d,
  kSign,
  kFixedSign,
  kFatCantor,
};

/// Identifier string used in field specs: "constant", "clamped_rotation", ...
std::string_view field_id(FieldKind kind);
/// Throws std::invalid_argument for unknown identifiers.
FieldKind field_kind_from_id(std::string_view id);
std::vector<FieldKind> gallery_kinds();

/// Serializable description of a gallery field. Only the parameters relevant
/// to `kind` are read.
struct FieldSpec {
  FieldKind kind = FieldKind::kConstant;
  std::vector<double> velocity{1.0};  // constant(c)
  double radius = 1.0;                // clamped_rotation(R)
  int level = 8;                      // fat_cantor(L)

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Spec with the default parameters for `kind`.
FieldSpec default_spec(FieldKind kind);

/// Bounded Borel vector field b(t, x) on [0, T] x R^d with |b| <= bound().
///
/// Values are immutable after construction and evaluation is a pure function
/// of (t, x), so a field may be shared freely between threads.
class BoundedField {
 public:
  FieldKind kind() const { return spec_.kind; }
  std::string_view id() const { return field_id(spec_.kind); }
  const FieldSpec& spec() const { return spec_; }
  std::size_t dimension() const { return dimension_; }
  double bound() const { return bound_; }
  /// Non-null only for fat_cantor fields.
  const IntervalSet* cantor_set() const { return cantor_.get(); }

  /// Writes b(t, x) into `out`. Throws std::domain_error when t is negative or
  /// non-finite, when x has a non-finite coordinate, or on a dimension mismatch.
  void evaluate(double t, std::span<const double> x, std::span<double> out) const;
  std::vector<double> operator()(double t, std::span<const double> x) const;

 private:
  friend BoundedField make_field(const FieldSpec& spec);
  BoundedField() = default;

  FieldSpec spec_;
  std::size_t dimension_ = 1;
  double bound_ = 0.0;
  std::shared_ptr<const IntervalSet> cantor_;
};

/// Throws std::invalid_argument on invalid parameters (R <= 0, L < 0, empty c).
BoundedField make_field(const FieldSpec& spec);

/// Checked evaluation on [0, horizon] x R^d.
std::vector<double> eval_field(const BoundedField& field, double t,
                               std::span<const double> x, double horizon);

/// Euclidean norm; every bound comparison in the library goes through it.
double euclidean_norm(std::span<const double> v);

}  // namespace charflow
