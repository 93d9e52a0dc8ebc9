#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace twochoice {

// A finite nonincreasing sequence in [0,1] with values[0] == 1: the expected
// (or empirical) proportion of bins with load >= i, truncated at k_max.
struct TailProfile {
    std::vector<double> values;

    std::size_t k_max() const { return values.empty() ? 0 : values.size() - 1; }

    double at(std::size_t i) const { return i < values.size() ? values[i] : 0.0; }

    void validate(double slack = 0.0) const {
        if (values.empty() || values[0] != 1.0)
            throw std::invalid_argument("TailProfile: values[0] must be 1");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] >= -slack && values[i] <= 1.0 + slack))
                throw std::invalid_argument("TailProfile: value out of [0,1]");
            if (i + 1 < values.size() && values[i + 1] > values[i] + slack)
                throw std::invalid_argument("TailProfile: values must be nonincreasing");
        }
    }

    // Profile of the empty system: (1, 0, ..., 0).
    static TailProfile empty_initial(std::size_t k_max) {
        TailProfile p;
        p.values.assign(k_max + 1, 0.0);
        p.values[0] = 1.0;
        return p;
    }
};

} // namespace twochoice
