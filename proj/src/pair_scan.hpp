#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "cheeger/certificate.hpp"
#include "cheeger/graph.hpp"

namespace cheeger::detail {

/// Right-hand side of a drop inequality given the drop x_a - x_b (so callers
/// can track ratios), sum_{i<=a} x_i and w([1,a],[b,n]).
using DropBound = std::function<double(double drop, double prefix_sum, double crossing)>;

/// Checks x_a - x_b <= bound(...) over pairs a < b of the descending order of
/// x: every pair when n <= 64, otherwise `samples` random pairs. Pairs with
/// zero crossing weight are vacuous. Fills lhs/rhs/pass and the pair scalars.
CertificateReport drop_pair_scan(const WeightedGraph& g, std::span<const double> x,
                                 std::size_t samples, std::uint64_t seed, Slack slack,
                                 const DropBound& bound, const std::string& label);

}  // namespace cheeger::detail
