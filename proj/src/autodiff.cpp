// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/autodiff.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "rulehier/error.hpp"

namespace rulehier::ad {

std::vector<DiffScalar> Tape::lift(std::span<const double> values) {
  std::vector<DiffScalar> out;
  out.reserve(values.size());
  for (double v : values) {
    DiffScalar x = push(v, static_cast<std::uint32_t>(edges_.size()));
    variables_.push_back(x.index_);
    out.push_back(x);
  }
  return out;
}

DiffScalar Tape::push(double value, std::uint32_t first_edge) {
  const auto count = static_cast<std::uint32_t>(edges_.size()) - first_edge;
  nodes_.push_back(Node{first_edge, count});
  return DiffScalar(value, this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

DiffScalar Tape::unary(double value, const DiffScalar& x, double dx) {
  assert(x.tape_ == this);
  const auto first = static_cast<std::uint32_t>(edges_.size());
  edges_.push_back(Edge{x.index_, dx});
  return push(value, first);
}

DiffScalar Tape::binary(double value, const DiffScalar& x, double dx,
                        const DiffScalar& y, double dy) {
  const auto first = static_cast<std::uint32_t>(edges_.size());
  if (x.tape_ != nullptr) {
    assert(x.tape_ == this);
    edges_.push_back(Edge{x.index_, dx});
  }
  if (y.tape_ != nullptr) {
    assert(y.tape_ == this);
    edges_.push_back(Edge{y.index_, dy});
  }
  return push(value, first);
}

DiffScalar Tape::nary(double value, std::span<const DiffScalar> xs,
                      std::span<const double> partials) {
  assert(xs.size() == partials.size());
  const auto first = static_cast<std::uint32_t>(edges_.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].tape_ == nullptr) continue;
    assert(xs[i].tape_ == this);
    edges_.push_back(Edge{xs[i].index_, partials[i]});
  }
  return push(value, first);
}

std::vector<double> Tape::gradient(const DiffScalar& output) const {
  std::vector<double> grad(variables_.size(), 0.0);
  if (output.tape_ != this) return grad;

  std::vector<double> adjoint(output.index_ + 1, 0.0);
  adjoint[output.index_] = 1.0;
  for (std::uint32_t i = output.index_ + 1; i-- > 0;) {
    const double a = adjoint[i];
    if (a == 0.0) continue;
    const Node& node = nodes_[i];
    for (std::uint32_t e = 0; e < node.edge_count; ++e) {
      const Edge& edge = edges_[node.first_edge + e];
      adjoint[edge.parent] += a * edge.partial;
    }
  }
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    if (variables_[k] <= output.index_) grad[k] = adjoint[variables_[k]];
  }
  return grad;
}

namespace {

Tape* common_tape(const DiffScalar& a, const DiffScalar& b) {
  assert(a.tape() == nullptr || b.tape() == nullptr || a.tape() == b.tape());
  return a.tape() != nullptr ? a.tape() : b.tape();
}

[[noreturn]] void domain_error(const std::string& op, const std::string& what) {
  throw Error(ErrorCategory::domain, op + ": " + what);
}

// Builds a unary node unless the input is constant.
DiffScalar lift_unary(const DiffScalar& x, double value, double dx) {
  if (x.is_constant()) return DiffScalar(value);
  return x.tape()->unary(value, x, dx);
}

}  // namespace

DiffScalar operator+(const DiffScalar& a, const DiffScalar& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() + b.value();
  return t ? t->binary(v, a, 1.0, b, 1.0) : DiffScalar(v);
}

DiffScalar operator-(const DiffScalar& a, const DiffScalar& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() - b.value();
  return t ? t->binary(v, a, 1.0, b, -1.0) : DiffScalar(v);
}

DiffScalar operator*(const DiffScalar& a, const DiffScalar& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() * b.value();
  return t ? t->binary(v, a, b.value(), b, a.value()) : DiffScalar(v);
}

DiffScalar operator/(const DiffScalar& a, const DiffScalar& b) {
  if (b.value() == 0.0) domain_error("div", "zero denominator");
  Tape* t = common_tape(a, b);
  const double v = a.value() / b.value();
  return t ? t->binary(v, a, 1.0 / b.value(), b, -v / b.value()) : DiffScalar(v);
}

DiffScalar operator-(const DiffScalar& a) { return lift_unary(a, -a.value(), -1.0); }

DiffScalar& DiffScalar::operator+=(const DiffScalar& rhs) { return *this = *this + rhs; }
DiffScalar& DiffScalar::operator-=(const DiffScalar& rhs) { return *this = *this - rhs; }
DiffScalar& DiffScalar::operator*=(const DiffScalar& rhs) { return *this = *this * rhs; }
DiffScalar& DiffScalar::operator/=(const DiffScalar& rhs) { return *this = *this / rhs; }

DiffScalar tanh(const DiffScalar& x) {
  const double v = std::tanh(x.value());
  return lift_unary(x, v, 1.0 - v * v);
}

DiffScalar sigmoid(const DiffScalar& x) {
  const double v = rulehier::sigmoid(x.value());
  return lift_unary(x, v, v * (1.0 - v));
}

DiffScalar exp(const DiffScalar& x) {
  const double v = std::exp(x.value());
  return lift_unary(x, v, v);
}

DiffScalar log(const DiffScalar& x) {
  if (!(x.value() > 0.0)) domain_error("log", "argument must be positive");
  return lift_unary(x, std::log(x.value()), 1.0 / x.value());
}

DiffScalar atan(const DiffScalar& x) {
  const double u = x.value();
  return lift_unary(x, std::atan(u), 1.0 / (1.0 + u * u));
}

DiffScalar sin(const DiffScalar& x) {
  return lift_unary(x, std::sin(x.value()), std::cos(x.value()));
}

DiffScalar cos(const DiffScalar& x) {
  return lift_unary(x, std::cos(x.value()), -std::sin(x.value()));
}

DiffScalar tan(const DiffScalar& x) {
  const double c = std::cos(x.value());
  if (c == 0.0) domain_error("tan", "argument at a pole");
  return lift_unary(x, std::tan(x.value()), 1.0 / (c * c));
}

DiffScalar sqrt(const DiffScalar& x) {
  if (x.value() < 0.0) domain_error("sqrt", "negative argument");
  const double v = std::sqrt(x.value());
  // d/dx sqrt(x) is unbounded at 0; callers only reach it on branches that
  // a vselect discards.
  return lift_unary(x, v, 0.5 / v);
}

DiffScalar vabs(const DiffScalar& x) {
  return x.value() < 0.0 ? -x : x;
}

namespace {

Tape* tape_of(std::span<const DiffScalar> xs) {
  for (const DiffScalar& x : xs) {
    if (!x.is_constant()) return x.tape();
  }
  return nullptr;
}

std::vector<double> values_of(std::span<const DiffScalar> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i].value();
  return out;
}

// Softmin/softmax weights, i.e. the partials of the log-sum-exp node.
DiffScalar soft_node(std::span<const DiffScalar> xs, double value,
                     std::span<const double> values, double shift,
                     double sign, double temperature) {
  Tape* t = tape_of(xs);
  if (t == nullptr) return DiffScalar(value);
  std::vector<double> w(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    w[i] = exp_portable(sign * (values[i] - shift) / temperature);
    sum += w[i];
  }
  for (double& wi : w) wi /= sum;
  return t->nary(value, xs, w);
}

}  // namespace

DiffScalar smooth_min(std::span<const DiffScalar> xs, double temperature) {
  const std::vector<double> v = values_of(xs);
  const double value = rulehier::smooth_min(v, temperature);
  return soft_node(xs, value, v, rulehier::hard_min(v), -1.0, temperature);
}

DiffScalar smooth_max(std::span<const DiffScalar> xs, double temperature) {
  const std::vector<double> v = values_of(xs);
  const double value = rulehier::smooth_max(v, temperature);
  return soft_node(xs, value, v, rulehier::hard_max(v), 1.0, temperature);
}

DiffScalar hard_min(std::span<const DiffScalar> xs) {
  if (xs.empty()) domain_error("min", "empty argument list");
  DiffScalar m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = vmin(m, xs[i]);
  return m;
}

DiffScalar hard_max(std::span<const DiffScalar> xs) {
  if (xs.empty()) domain_error("max", "empty argument list");
  DiffScalar m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = vmax(m, xs[i]);
  return m;
}

}  // namespace rulehier::ad
