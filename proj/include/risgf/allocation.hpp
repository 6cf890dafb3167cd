// Copyright 2026 The risgf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "risgf/channel.hpp"
#include "risgf/complex_matrix.hpp"
#include "risgf/errors.hpp"

namespace risgf {

enum class Scheme { Dedicated, Shared };

inline std::string_view to_string(Scheme s) noexcept
{
    return s == Scheme::Dedicated ? "dedicated" : "shared";
}

inline Scheme parse_scheme(std::string_view text)
{
    if (text == "dedicated") {
        return Scheme::Dedicated;
    }
    if (text == "shared") {
        return Scheme::Shared;
    }
    throw ConfigError("unknown allocation scheme '" + std::string(text) + "'");
}

/// Slot-assignment mask plus per-sensor amplitude split.
///
/// Each sensor spreads a fixed total energy over its T_n transmissions, so the
/// per-transmission amplitude is 1/sqrt(T_n).
class AllocationPlan {
public:
    Scheme scheme() const noexcept { return scheme_; }
    const SystemDims& dims() const noexcept { return dims_; }

    bool assigned(std::size_t slot, std::size_t sensor) const noexcept
    {
        return mask_[slot * dims_.sensors + sensor] != 0;
    }

    std::size_t tx_count(std::size_t sensor) const noexcept { return tx_count_[sensor]; }
    double amplitude_scale(std::size_t sensor) const noexcept { return scale_[sensor]; }

    friend AllocationPlan build_plan(Scheme, const SystemDims&, std::size_t);

private:
    Scheme scheme_ = Scheme::Shared;
    SystemDims dims_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> tx_count_;
    std::vector<double> scale_;
};

/// Dedicated: sensor n gets the contiguous block [n(1+r), (n+1)(1+r)); surplus
/// slots stay unassigned. Shared: every sensor in every slot, r ignored.
inline AllocationPlan build_plan(Scheme scheme, const SystemDims& dims, std::size_t retransmissions)
{
    dims.validate();
    AllocationPlan plan;
    plan.scheme_ = scheme;
    plan.dims_ = dims;
    plan.mask_.assign(dims.slots * dims.sensors, 0);

    if (scheme == Scheme::Dedicated) {
        const std::size_t per_sensor = 1 + retransmissions;
        if (dims.sensors * per_sensor > dims.slots) {
            throw CapacityError("dedicated allocation needs " +
                                std::to_string(dims.sensors * per_sensor) + " slots, only " +
                                std::to_string(dims.slots) + " available");
        }
        for (std::size_t n = 0; n < dims.sensors; ++n) {
            for (std::size_t m = n * per_sensor; m < (n + 1) * per_sensor; ++m) {
                plan.mask_[m * dims.sensors + n] = 1;
            }
        }
        plan.tx_count_.assign(dims.sensors, per_sensor);
    } else {
        plan.mask_.assign(plan.mask_.size(), 1);
        plan.tx_count_.assign(dims.sensors, dims.slots);
    }

    plan.scale_.reserve(dims.sensors);
    for (std::size_t t : plan.tx_count_) {
        plan.scale_.push_back(1.0 / std::sqrt(static_cast<double>(t)));
    }
    return plan;
}

/// Masks H to the assigned slots and scales column n by 1/sqrt(T_n).
inline ComplexMatrix apply_plan(const ComplexMatrix& h, const AllocationPlan& plan)
{
    const auto& d = plan.dims();
    if (h.rows() != d.slots || h.cols() != d.sensors) {
        throw DimensionError("apply_plan: channel is " + std::to_string(h.rows()) + "x" +
                             std::to_string(h.cols()) + ", plan expects " +
                             std::to_string(d.slots) + "x" + std::to_string(d.sensors));
    }
    ComplexMatrix out(h.rows(), h.cols());
    for (std::size_t m = 0; m < h.rows(); ++m) {
        for (std::size_t n = 0; n < h.cols(); ++n) {
            if (plan.assigned(m, n)) {
                out(m, n) = h(m, n) * plan.amplitude_scale(n);
            }
        }
    }
    return out;
}

}  // namespace risgf
