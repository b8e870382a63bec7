#pragma once

#include <vector>

namespace mcmin::lp {

enum class Rel { le, eq, ge };

struct Constraint {
    std::vector<double> coeffs;
    Rel rel;
    double rhs;
};

struct Result {
    bool feasible = false;
    double value = 0.0;
    std::vector<double> x;
};

/// Minimise c.x subject to the constraints and x >= 0. Two-phase dense
/// tableau simplex with Bland's rule; intended for the small certification
/// LPs in this library (tens of variables), not for scale.
Result minimize(const std::vector<double>& c, const std::vector<Constraint>& constraints);

} // namespace mcmin::lp
