#include "mcmin/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace mcmin::lp {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
    std::size_t m = 0;      // constraint rows
    std::size_t cols = 0;   // variable columns (rhs excluded)
    std::vector<double> a;  // (m+1) x (cols+1), row-major; row m = objective
    std::vector<int> basis; // basic variable per row

    double& at(std::size_t r, std::size_t c) { return a[r * (cols + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * (cols + 1) + c]; }
    double& rhs(std::size_t r) { return a[r * (cols + 1) + cols]; }
    double rhs(std::size_t r) const { return a[r * (cols + 1) + cols]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= cols; ++c) at(pr, c) /= p;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
        }
        basis[pr] = static_cast<int>(pc);
    }

    // Bland's rule: entering = lowest eligible column, leaving = lowest
    // basis index among minimal ratios. Returns false when optimal,
    // throws nothing; unbounded reported via flag.
    bool iterate(const std::vector<char>& allowed, bool& unbounded) {
        std::size_t enter = cols;
        for (std::size_t c = 0; c < cols; ++c) {
            if (!allowed[c]) continue;
            if (at(m, c) < -kEps) {
                enter = c;
                break;
            }
        }
        if (enter == cols) return false;
        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double coef = at(r, enter);
            if (coef > kEps) {
                const double ratio = rhs(r) / coef;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (leave == m || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave == m) {
            unbounded = true;
            return false;
        }
        pivot(leave, enter);
        return true;
    }
};

} // namespace

Result minimize(const std::vector<double>& c, const std::vector<Constraint>& constraints) {
    const std::size_t n = c.size();
    const std::size_t m = constraints.size();

    // Column layout: structural | slack/surplus | artificial.
    std::size_t n_slack = 0;
    for (const auto& row : constraints) {
        if (row.rel != Rel::eq) ++n_slack;
    }
    std::size_t n_art = 0; // assigned below, one per row lacking a basic slack

    // Normalise to rhs >= 0 first to know which rows need artificials.
    std::vector<std::vector<double>> coeffs(m);
    std::vector<double> rhs(m);
    std::vector<Rel> rel(m);
    for (std::size_t r = 0; r < m; ++r) {
        coeffs[r] = constraints[r].coeffs;
        coeffs[r].resize(n, 0.0);
        rhs[r] = constraints[r].rhs;
        rel[r] = constraints[r].rel;
        if (rhs[r] < 0.0) {
            for (double& v : coeffs[r]) v = -v;
            rhs[r] = -rhs[r];
            rel[r] = rel[r] == Rel::le ? Rel::ge : (rel[r] == Rel::ge ? Rel::le : Rel::eq);
        }
    }
    for (std::size_t r = 0; r < m; ++r) {
        if (rel[r] != Rel::le) ++n_art;
    }

    Tableau t;
    t.m = m;
    t.cols = n + n_slack + n_art;
    t.a.assign((m + 1) * (t.cols + 1), 0.0);
    t.basis.assign(m, -1);

    std::size_t slack_at = n;
    std::size_t art_at = n + n_slack;
    std::vector<char> artificial(t.cols, 0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = coeffs[r][j];
        t.rhs(r) = rhs[r];
        if (rel[r] == Rel::le) {
            t.at(r, slack_at) = 1.0;
            t.basis[r] = static_cast<int>(slack_at);
            ++slack_at;
        } else {
            if (rel[r] == Rel::ge) {
                t.at(r, slack_at) = -1.0;
                ++slack_at;
            }
            t.at(r, art_at) = 1.0;
            t.basis[r] = static_cast<int>(art_at);
            artificial[art_at] = 1;
            ++art_at;
        }
    }

    std::vector<char> allow_all(t.cols, 1);

    // Phase 1: minimise the sum of artificials.
    if (n_art > 0) {
        for (std::size_t r = 0; r < m; ++r) {
            if (artificial[static_cast<std::size_t>(t.basis[r])]) {
                for (std::size_t cidx = 0; cidx <= t.cols; ++cidx) t.at(m, cidx) -= t.at(r, cidx);
            }
        }
        bool unbounded = false;
        while (t.iterate(allow_all, unbounded)) {
        }
        if (-t.rhs(m) > 1e-7) return {}; // infeasible (phase-1 objective > 0)
        // Kick remaining artificials out of the basis where possible.
        for (std::size_t r = 0; r < m; ++r) {
            if (!artificial[static_cast<std::size_t>(t.basis[r])]) continue;
            for (std::size_t cidx = 0; cidx < t.cols; ++cidx) {
                if (!artificial[cidx] && std::abs(t.at(r, cidx)) > kEps) {
                    t.pivot(r, cidx);
                    break;
                }
            }
        }
    }

    // Phase 2: real objective, artificials barred from entering.
    for (std::size_t cidx = 0; cidx <= t.cols; ++cidx) t.at(m, cidx) = 0.0;
    for (std::size_t j = 0; j < n; ++j) t.at(m, j) = c[j];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = static_cast<std::size_t>(t.basis[r]);
        const double cost = b < n ? c[b] : 0.0;
        if (cost == 0.0) continue;
        for (std::size_t cidx = 0; cidx <= t.cols; ++cidx) t.at(m, cidx) -= cost * t.at(r, cidx);
    }
    std::vector<char> allowed(t.cols, 1);
    for (std::size_t cidx = 0; cidx < t.cols; ++cidx) allowed[cidx] = artificial[cidx] ? 0 : 1;
    bool unbounded = false;
    while (t.iterate(allowed, unbounded)) {
    }
    if (unbounded) return {};

    Result result;
    result.feasible = true;
    result.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = static_cast<std::size_t>(t.basis[r]);
        if (b < n) result.x[b] = t.rhs(r);
    }
    result.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) result.value += c[j] * result.x[j];
    return result;
}

} // namespace mcmin::lp
