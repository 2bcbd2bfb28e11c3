// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/batch.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "rulehier/error.hpp"

namespace rulehier {

StateBatch::StateBatch(std::size_t count, std::size_t steps)
    : count(count),
      steps(steps),
      px(count * steps),
      py(count * steps),
      psi(count * steps),
      v(count * steps) {}

StateBatch StateBatch::from_trajectories(std::span<const Trajectory> trajectories) {
  if (trajectories.empty()) return {};
  const std::size_t steps = trajectories.front().states.size();
  StateBatch batch(trajectories.size(), steps);
  for (std::size_t b = 0; b < trajectories.size(); ++b) {
    if (trajectories[b].states.size() != steps) {
      throw Error(ErrorCategory::invalid_argument, "batched trajectories must share a length");
    }
    for (std::size_t t = 0; t < steps; ++t) batch.set(t, b, trajectories[b].states[t]);
  }
  return batch;
}

void StateBatch::set(std::size_t t, std::size_t b, const EgoState& x) {
  const std::size_t i = t * count + b;
  px[i] = x.px;
  py[i] = x.py;
  psi[i] = x.psi;
  v[i] = x.v;
}

EgoState StateBatch::get(std::size_t t, std::size_t b) const {
  const std::size_t i = t * count + b;
  return {px[i], py[i], psi[i], v[i]};
}

namespace stl {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Values of a subformula at one step, one entry per distinct block.
struct Row {
  std::vector<double> v;
  std::size_t distinct = 0;
};

struct StateRows {
  std::size_t n = 0;
  const double* px = nullptr;
  const double* py = nullptr;
  const double* psi = nullptr;
  const double* v = nullptr;
  std::vector<double> storage;  ///< gathered rows when blocks are shared
};

class BatchEvaluator {
 public:
  BatchEvaluator(const StateBatch& batch, const WorldScene& scene, Semantics semantics,
                 double temperature, const simd::KernelTable& k)
      : batch_(batch), scene_(scene), semantics_(semantics), temperature_(temperature), k_(k) {}

  const Row& eval(const Formula& phi, std::size_t t) {
    const auto key = std::make_pair(static_cast<const void*>(&phi.node()), t);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Row row = compute(phi, t);
    return memo_.emplace(key, std::move(row)).first->second;
  }

  /// `r` broadcast onto `d` blocks; d must be a multiple of r.distinct.
  static std::vector<double> expand(const Row& r, std::size_t d) {
    if (r.distinct == d) return r.v;
    std::vector<double> out(d);
    const std::size_t f = d / r.distinct;
    for (std::size_t j = 0; j < d; ++j) out[j] = r.v[j / f];
    return out;
  }

 private:
  std::size_t distinct_for(const Formula& phi, std::size_t t) const {
    return batch_.distinct_at(std::min(t + phi.horizon(), batch_.steps - 1));
  }

  Row compute(const Formula& phi, std::size_t t) {
    const std::size_t d = distinct_for(phi, t);
    return std::visit(
        overloaded{
            [&](const PredicateNode& n) { return predicate(n.kind, t); },
            [&](const NotNode& n) {
              const Row& c = eval(n.child, t);
              Row out{std::vector<double>(c.distinct), c.distinct};
              k_.negate(c.v.data(), c.distinct, out.v.data());
              return out;
            },
            [&](const AndNode& n) { return reduce(children_at(n.children, t), true, d); },
            [&](const OrNode& n) { return reduce(children_at(n.children, t), false, d); },
            [&](const AlwaysNode& n) { return reduce(window(n.child, n.window, t), true, d); },
            [&](const EventuallyNode& n) {
              return reduce(window(n.child, n.window, t), false, d);
            },
        },
        phi.node().op);
  }

  std::vector<const Row*> children_at(const std::vector<Formula>& children, std::size_t t) {
    std::vector<const Row*> rows;
    for (const Formula& c : children) rows.push_back(&eval(c, t));
    return rows;
  }

  std::vector<const Row*> window(const Formula& child, Interval w, std::size_t t) {
    std::vector<const Row*> rows;
    for (std::size_t k = w.lo; k <= w.hi; ++k) rows.push_back(&eval(child, t + k));
    return rows;
  }

  Row reduce(const std::vector<const Row*>& rows, bool take_min, std::size_t d) {
    // Children already at d blocks are read in place; coarser ones are
    // broadcast into scratch rows.
    std::vector<std::vector<double>> scratch;
    scratch.reserve(rows.size());
    std::vector<const double*> xs;
    for (const Row* r : rows) {
      if (r->distinct == d) {
        xs.push_back(r->v.data());
      } else {
        scratch.push_back(expand(*r, d));
        xs.push_back(scratch.back().data());
      }
    }
    Row out{std::vector<double>(xs.front(), xs.front() + d), d};
    for (std::size_t i = 1; i < xs.size(); ++i) {
      (take_min ? k_.min_into : k_.max_into)(xs[i], d, out.v.data());
    }
    if (semantics_ == Semantics::hard) return out;
    // Same steps as the scalar smooth_min / smooth_max: hard extreme, then
    // the shifted exponentials summed in child order, then the log.
    std::vector<double> sum(d, 0.0);
    for (const double* x : xs) {
      (take_min ? k_.softmin_accumulate : k_.softmax_accumulate)(x, out.v.data(), d,
                                                                 temperature_, sum.data());
    }
    (take_min ? k_.softmin_finish : k_.softmax_finish)(sum.data(), d, temperature_, out.v.data());
    return out;
  }

  /// State rows at step t, one entry per distinct block.
  const StateRows& states_at(std::size_t t) {
    if (auto it = states_.find(t); it != states_.end()) return it->second;
    const std::size_t d = batch_.distinct_at(t);
    StateRows& s = states_[t];
    s.n = d;
    if (d == batch_.count) {
      s.px = batch_.row(batch_.px, t);
      s.py = batch_.row(batch_.py, t);
      s.psi = batch_.row(batch_.psi, t);
      s.v = batch_.row(batch_.v, t);
      return s;
    }
    const std::size_t block = batch_.count / d;
    s.storage.resize(4 * d);
    const std::vector<double>* fields[] = {&batch_.px, &batch_.py, &batch_.psi, &batch_.v};
    for (std::size_t f = 0; f < 4; ++f) {
      const double* row = batch_.row(*fields[f], t);
      for (std::size_t j = 0; j < d; ++j) s.storage[f * d + j] = row[j * block];
    }
    s.px = s.storage.data();
    s.py = s.px + d;
    s.psi = s.py + d;
    s.v = s.psi + d;
    return s;
  }

  Row predicate(const PredicateKind& kind, std::size_t t) {
    const StateRows& s = states_at(t);
    const std::size_t n = s.n;
    const double* px = s.px;
    const double* py = s.py;
    const double* psi = s.psi;
    const double* v = s.v;
    const MapModel& map = scene_.map;
    Row row{std::vector<double>(n), n};
    double* out = row.v.data();
    std::visit(
        overloaded{
            [&](const SpeedAtLeast& p) { k_.linear(v, n, 1.0, -p.limit, out); },
            [&](const SpeedAtMost& p) { k_.linear(v, n, -1.0, p.limit, out); },
            [&](const LineClearance& p) {
              if (!map.has_lines(p.kind)) {
                throw Error(ErrorCategory::invalid_argument, "missing lane geometry");
              }
              std::vector<double> d2(n, std::numeric_limits<double>::infinity());
              for (const LaneLine& l : map.lane_lines) {
                if (l.kind != p.kind) continue;
                for (const Segment& seg : l.line.segments()) {
                  k_.nearest_segment(px, py, n, seg, d2.data(), out);
                }
              }
            },
            [&](const CollisionClearance& p) {
              if (p.track >= scene_.non_ego.size()) {
                throw Error(ErrorCategory::invalid_argument,
                            "collision predicate names a missing track");
              }
              k_.box_clearance(px, py, n, scene_.non_ego[p.track].keep_out(t), out);
            },
            [&](const HeadingAlignment& p) {
              for (std::size_t b = 0; b < n; ++b) {
                const double h = lane_heading(Vec2{px[b], py[b]}, map);
                out[b] = heading_margin(psi[b], h, p.tolerance);
              }
            },
            [&](const StopZoneDepth&) {
              if (map.stop_zones.empty()) {
                throw Error(ErrorCategory::invalid_argument, "scene has no stop zone");
              }
              k_.box_depth(px, py, n, map.stop_zones.front().box(), out);
              std::vector<double> tmp(n);
              for (std::size_t i = 1; i < map.stop_zones.size(); ++i) {
                k_.box_depth(px, py, n, map.stop_zones[i].box(), tmp.data());
                k_.max_into(tmp.data(), n, out);
              }
            },
            [&](const AffineState& p) { k_.affine(px, py, psi, v, n, p.coefficients, out); },
            [&](const Constant& p) { std::fill(row.v.begin(), row.v.end(), p.value); },
        },
        kind);
    return row;
  }

  const StateBatch& batch_;
  const WorldScene& scene_;
  Semantics semantics_;
  double temperature_;
  const simd::KernelTable& k_;
  std::map<std::pair<const void*, std::size_t>, Row> memo_;
  std::map<std::size_t, StateRows> states_;
};

}  // namespace

std::vector<double> batch_robustness(const Formula& phi, const StateBatch& batch,
                                     const WorldScene& scene, Semantics semantics,
                                     double temperature, const simd::KernelTable& kernels) {
  if (batch.count == 0) return {};
  if (batch.steps == 0 || phi.horizon() > batch.steps - 1) {
    throw Error(ErrorCategory::horizon, "horizon too short for formula");
  }
  if (semantics == Semantics::smooth && !(temperature > 0.0)) {
    throw Error(ErrorCategory::domain, "smooth semantics need a positive temperature");
  }
  if (!batch.distinct.empty()) {
    if (batch.distinct.size() != batch.steps) {
      throw Error(ErrorCategory::invalid_argument, "distinct counts must cover every step");
    }
    for (std::size_t t = 0; t < batch.steps; ++t) {
      const std::size_t d = batch.distinct[t];
      const std::size_t prev = t == 0 ? 1 : batch.distinct[t - 1];
      if (d == 0 || batch.count % d != 0 || d % prev != 0) {
        throw Error(ErrorCategory::invalid_argument, "distinct counts must nest");
      }
    }
  }
  BatchEvaluator evaluator(batch, scene, semantics, temperature, kernels);
  return BatchEvaluator::expand(evaluator.eval(phi, 0), batch.count);
}

}  // namespace stl
}  // namespace rulehier
