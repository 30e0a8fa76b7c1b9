#pragma once

#include <cstddef>
#include <vector>

#include "kelleyscope/algebra.hpp"
#include "kelleyscope/errors.hpp"
#include "kelleyscope/rational.hpp"

namespace kelleyscope {

// A finitely additive probability measure on the set algebra, given by
// nonnegative atom weights summing exactly to 1.
struct Measure {
    std::vector<Rational> weights;

    Measure() = default;
    explicit Measure(std::vector<Rational> w) : weights(std::move(w)) {
        Rational sum(0);
        for (const auto& x : weights) {
            if (x < 0) throw value_error("measure: negative atom weight");
            sum += x;
        }
        if (sum != 1) throw value_error("measure: atom weights must sum to 1, got " + to_string(sum));
    }

    static Measure uniform(std::size_t n) {
        if (n == 0) throw value_error("measure: empty ground");
        return Measure(std::vector<Rational>(n, Rational(Integer(1), Integer(n))));
    }
    static Measure point_mass(std::size_t n, std::size_t atom) {
        std::vector<Rational> w(n, Rational(0));
        w.at(atom) = 1;
        return Measure(std::move(w));
    }

    std::size_t universe() const { return weights.size(); }

    Rational operator()(const Element& e) const {
        if (e.universe() != weights.size())
            throw structural_error("measure: element lives on a different ground");
        Rational v(0);
        e.atoms.for_each_atom([&](std::size_t x) { v += weights[x]; });
        return v;
    }
};

} // namespace kelleyscope
