#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "optrec/point.hpp"

namespace optrec {

/// A set-valued reconstruction map, defined on every measurement group of a
/// fixed MeasurementTable. Output sets are non-empty and lexicographically
/// sorted; the deterministic selector is the first (smallest) point.
struct SetValuedDecoder {
    std::vector<std::vector<Point>> outputs;  // parallel to table groups

    const Point& selector(std::size_t group) const {
        return outputs.at(group).front();
    }
};

/// Throws unless the decoder is total on n_groups with non-empty outputs.
inline void validate_decoder(const SetValuedDecoder& dec, std::size_t n_groups) {
    if (dec.outputs.size() != n_groups)
        throw std::invalid_argument("decoder: not total on the measurement groups");
    for (const auto& out : dec.outputs)
        if (out.empty())
            throw std::invalid_argument("decoder: empty output set");
}

}  // namespace optrec
