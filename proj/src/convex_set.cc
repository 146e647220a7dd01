#include "gammalab/convex_set.h"

#include <algorithm>
#include <cmath>

namespace gammalab {
namespace {

constexpr double kMembershipSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Eigen::Index set_dim(const ConvexSet& set) {
  return std::visit(Overloaded{[](const Ball& b) { return b.center.size(); },
                               [](const Box& b) { return b.lo.size(); },
                               [](const Halfspace& h) { return h.normal.size(); }},
                    set);
}

void validate_set(const ConvexSet& set) {
  std::visit(Overloaded{[](const Ball& b) {
                          require_finite(b.center, "ball center");
                          if (b.center.size() == 0) throw InvalidArgument("ball: empty center");
                          if (!(b.radius > 0.0) || !std::isfinite(b.radius)) {
                            throw InvalidArgument("ball: radius must be positive");
                          }
                        },
                        [](const Box& b) {
                          if (b.lo.size() == 0 || b.lo.size() != b.hi.size()) {
                            throw InvalidArgument("box: lo/hi dimension mismatch");
                          }
                          require_finite(b.lo, "box lo");
                          require_finite(b.hi, "box hi");
                          if ((b.lo.array() > b.hi.array()).any()) {
                            throw InvalidArgument("box: lo exceeds hi");
                          }
                        },
                        [](const Halfspace& h) {
                          require_finite(h.normal, "halfspace normal");
                          if (h.normal.size() == 0 || h.normal.norm() == 0.0) {
                            throw InvalidArgument("halfspace: zero normal");
                          }
                          if (!std::isfinite(h.offset)) throw InvalidArgument("halfspace: bad offset");
                        }},
             set);
}

bool contains(const ConvexSet& set, const Vector& x) {
  return std::visit(
      Overloaded{[&](const Ball& b) { return (x - b.center).norm() <= b.radius * (1.0 + kMembershipSlack); },
                 [&](const Box& b) {
                   const auto lo = b.lo.array() - kMembershipSlack * (1.0 + b.lo.array().abs());
                   const auto hi = b.hi.array() + kMembershipSlack * (1.0 + b.hi.array().abs());
                   return (x.array() >= lo).all() && (x.array() <= hi).all();
                 },
                 [&](const Halfspace& h) { return h.normal.dot(x) <= h.offset + kMembershipSlack * (1.0 + std::abs(h.offset) + x.norm()); }},
      set);
}

Vector project(const ConvexSet& set, const Vector& x) {
  if (contains(set, x)) return x;
  return std::visit(Overloaded{[&](const Ball& b) -> Vector {
                                 const Vector offset = x - b.center;
                                 return b.center + offset * (b.radius / offset.norm());
                               },
                               [&](const Box& b) -> Vector { return x.cwiseMax(b.lo).cwiseMin(b.hi); },
                               [&](const Halfspace& h) -> Vector {
                                 const double nn = h.normal.squaredNorm();
                                 double step = (h.normal.dot(x) - h.offset) / nn;
                                 Vector y = x - step * h.normal;
                                 // Rounding can leave y a few ulps outside; push it in.
                                 double bump = std::max(std::abs(step), 1.0) * 1e-16;
                                 while (h.normal.dot(y) > h.offset) {
                                   step += bump;
                                   bump *= 2.0;
                                   y = x - step * h.normal;
                                 }
                                 return y;
                               }},
                    set);
}

double distance(const ConvexSet& set, const Vector& x) { return (x - project(set, x)).norm(); }

}  // namespace gammalab
