#pragma once

#include <vector>

#include "cablesail/error.hpp"

namespace cablesail {

/// Real polynomial with coefficients in descending degree order.
struct Polynomial {
    std::vector<double> coefficients;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }

    double operator()(double x) const {
        if (coefficients.empty()) throw InvalidArgument("empty polynomial");
        double acc = 0.0;
        for (double c : coefficients) acc = acc * x + c;
        return acc;
    }

    Polynomial derivative() const {
        Polynomial d;
        const int deg = degree();
        for (int i = 0; i < deg; ++i) d.coefficients.push_back(coefficients[static_cast<std::size_t>(i)] * (deg - i));
        if (d.coefficients.empty()) d.coefficients.push_back(0.0);
        return d;
    }
};

}  // namespace cablesail
