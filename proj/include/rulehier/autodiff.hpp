// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reverse-mode scalar automatic differentiation.
//
// A Tape records every operation on the scalars it owns. Each node stores the
// local partial derivatives towards its parents; `Tape::gradient` sweeps the
// tape backwards once and returns d(output)/d(variable) for every variable
// created with `Tape::lift`, in creation order.
//
// A DiffScalar without a tape is a constant. Mixing scalars from two different
// tapes is a programming error and trips an assertion.

#include <cstdint>
#include <span>
#include <vector>

#include "rulehier/math.hpp"

namespace rulehier::ad {

class Tape;

class DiffScalar {
 public:
  DiffScalar() = default;
  DiffScalar(double value) : value_(value) {}  // NOLINT: implicit constant

  double value() const { return value_; }
  bool is_constant() const { return tape_ == nullptr; }
  Tape* tape() const { return tape_; }
  std::uint32_t index() const { return index_; }

  DiffScalar& operator+=(const DiffScalar& rhs);
  DiffScalar& operator-=(const DiffScalar& rhs);
  DiffScalar& operator*=(const DiffScalar& rhs);
  DiffScalar& operator/=(const DiffScalar& rhs);

 private:
  friend class Tape;
  DiffScalar(double value, Tape* tape, std::uint32_t index)
      : value_(value), tape_(tape), index_(index) {}

  double value_ = 0.0;
  Tape* tape_ = nullptr;
  std::uint32_t index_ = 0;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Creates one independent variable per value.
  std::vector<DiffScalar> lift(std::span<const double> values);

  /// Gradient of `output` with respect to every lifted variable. Outputs that
  /// do not depend on any variable (constants included) yield a zero vector.
  std::vector<double> gradient(const DiffScalar& output) const;

  std::size_t variable_count() const { return variables_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  // Node construction, used by the operator implementations.
  DiffScalar unary(double value, const DiffScalar& x, double dx);
  DiffScalar binary(double value, const DiffScalar& x, double dx,
                    const DiffScalar& y, double dy);
  DiffScalar nary(double value, std::span<const DiffScalar> xs,
                  std::span<const double> partials);

 private:
  struct Edge {
    std::uint32_t parent;
    double partial;
  };
  struct Node {
    std::uint32_t first_edge;
    std::uint32_t edge_count;
  };

  DiffScalar push(double value, std::uint32_t first_edge);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> variables_;
};

DiffScalar operator+(const DiffScalar& a, const DiffScalar& b);
DiffScalar operator-(const DiffScalar& a, const DiffScalar& b);
DiffScalar operator*(const DiffScalar& a, const DiffScalar& b);
DiffScalar operator/(const DiffScalar& a, const DiffScalar& b);
DiffScalar operator-(const DiffScalar& a);

DiffScalar tanh(const DiffScalar& x);
DiffScalar sigmoid(const DiffScalar& x);
DiffScalar exp(const DiffScalar& x);
DiffScalar log(const DiffScalar& x);
DiffScalar atan(const DiffScalar& x);
DiffScalar sin(const DiffScalar& x);
DiffScalar cos(const DiffScalar& x);
DiffScalar tan(const DiffScalar& x);
DiffScalar sqrt(const DiffScalar& x);

DiffScalar smooth_min(std::span<const DiffScalar> xs, double temperature);
DiffScalar smooth_max(std::span<const DiffScalar> xs, double temperature);
DiffScalar hard_min(std::span<const DiffScalar> xs);
DiffScalar hard_max(std::span<const DiffScalar> xs);

// Value-generic vocabulary (see math.hpp). Selections pick one operand by
// value; the derivative follows the selected branch.
inline double value_of(const DiffScalar& x) { return x.value(); }
inline bool vlt(const DiffScalar& a, const DiffScalar& b) {
  return a.value() < b.value();
}
inline bool vle(const DiffScalar& a, const DiffScalar& b) {
  return a.value() <= b.value();
}
inline DiffScalar vselect(bool mask, const DiffScalar& if_true,
                          const DiffScalar& if_false) {
  return mask ? if_true : if_false;
}
inline DiffScalar vmin(const DiffScalar& a, const DiffScalar& b) {
  return b.value() < a.value() ? b : a;
}
inline DiffScalar vmax(const DiffScalar& a, const DiffScalar& b) {
  return a.value() < b.value() ? b : a;
}
DiffScalar vabs(const DiffScalar& x);
inline DiffScalar vsqrt(const DiffScalar& x) { return sqrt(x); }

}  // namespace rulehier::ad

namespace rulehier {
using ad::DiffScalar;
}  // namespace rulehier
