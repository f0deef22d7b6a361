#include "charflow/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace charflow {

std::string_view field_id(FieldKind kind) {
  switch (kind) {
    case FieldKind::kConstant:
      return "constant";
    case FieldKind::kClampedRotation:
      return "clamped_rotation";
    case FieldKind::kSmooth1d:
      return "smooth_1d";
    case FieldKind::kSign:
      return "sign";
    case FieldKind::kFixedSign:
      return "fixed_sign";
    case FieldKind::kFatCantor:
      return "fat_cantor";
  }
  return "invalid";
}

FieldKind field_kind_from_id(std::string_view id) {
  for (FieldKind kind : gallery_kinds()) {
    if (field_id(kind) == id) return kind;
  }
  throw std::invalid_argument("unknown field identifier '" + std::string(id) + "'");
}

std::vector<FieldKind> gallery_kinds() {
  return {FieldKind::kConstant, FieldKind::kClampedRotation, FieldKind::kSmooth1d,
          FieldKind::kSign,     FieldKind::kFixedSign,       FieldKind::kFatCantor};
}

FieldSpec default_spec(FieldKind kind) {
  FieldSpec spec;
  spec.kind = kind;
  if (kind == FieldKind::kConstant) spec.velocity = {1.0, 0.0};
  return spec;
}

double euclidean_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double c : v) sum += c * c;
  return std::sqrt(sum);
}

BoundedField make_field(const FieldSpec& spec) {
  BoundedField field;
  field.spec_ = spec;
  switch (spec.kind) {
    case FieldKind::kConstant:
      if (spec.velocity.empty()) {
        throw std::invalid_argument("constant field needs a non-empty velocity");
      }
      for (double c : spec.velocity) {
        if (!std::isfinite(c)) throw std::invalid_argument("constant field velocity must be finite");
      }
      field.dimension_ = spec.velocity.size();
      field.bound_ = euclidean_norm(spec.velocity);
      break;
    case FieldKind::kClampedRotation:
      if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
        throw std::invalid_argument("clamped_rotation radius must be positive and finite");
      }
      field.dimension_ = 2;
      field.bound_ = spec.radius;
      break;
    case FieldKind::kSmooth1d:
    case FieldKind::kSign:
    case FieldKind::kFixedSign:
      field.dimension_ = 1;
      field.bound_ = 1.0;
      break;
    case FieldKind::kFatCantor:
      if (spec.level < 0) throw std::invalid_argument("fat_cantor level must be >= 0");
      field.dimension_ = 1;
      field.bound_ = 1.0;
      field.cantor_ = std::make_shared<const IntervalSet>(fat_cantor_set(spec.level));
      break;
  }
  return field;
}

void BoundedField::evaluate(double t, std::span<const double> x, std::span<double> out) const {
  if (!std::isfinite(t) || t < 0.0) throw std::domain_error("field evaluated at invalid time");
  if (x.size() != dimension_ || out.size() != dimension_) {
    throw std::domain_error("field dimension mismatch");
  }
  for (double c : x) {
    if (!std::isfinite(c)) throw std::domain_error("field evaluated at non-finite point");
  }
  switch (spec_.kind) {
    case FieldKind::kConstant:
      for (std::size_t a = 0; a < dimension_; ++a) out[a] = spec_.velocity[a];
      return;
    case FieldKind::kClampedRotation: {
      const double r = euclidean_norm(x);
      double vx = -x[1];
      double vy = x[0];
      if (r > spec_.radius) {
        // Radial rescale; shrink by an ulp until the computed norm honours the bound.
        const double scale = spec_.radius / r;
        vx *= scale;
        vy *= scale;
        const double shrink = std::nextafter(1.0, 0.0);
        for (double v[2] = {vx, vy}; euclidean_norm(v) > spec_.radius;) {
          vx *= shrink;
          vy *= shrink;
          v[0] = vx;
          v[1] = vy;
        }
      }
      out[0] = vx;
      out[1] = vy;
      return;
    }
    case FieldKind::kSmooth1d:
      out[0] = std::cos(x[0]);
      return;
    case FieldKind::kSign:
      out[0] = x[0] >= 0.0 ? -1.0 : 1.0;
      return;
    case FieldKind::kFixedSign:
      out[0] = x[0] < 0.0 ? 1.0 : (x[0] > 0.0 ? -1.0 : 0.0);
      return;
    case FieldKind::kFatCantor:
      out[0] = cantor_->contains(x[0]) ? 1.0 : 0.0;
      return;
  }
}

std::vector<double> BoundedField::operator()(double t, std::span<const double> x) const {
  std::vector<double> out(dimension_);
  evaluate(t, x, out);
  return out;
}

std::vector<double> eval_field(const BoundedField& field, double t,
                               std::span<const double> x, double horizon) {
  if (!(t >= 0.0 && t <= horizon)) {
    throw std::domain_error("time " + std::to_string(t) + " outside [0, " +
                            std::to_string(horizon) + "]");
  }
  return field(t, x);
}

}  // namespace charflow
