/// @file testcases.hpp
/// @brief Parametric benchmark geometries: square, L-shape, star, donut,
///        noisy, sharp-feature, plus masks loaded from PGM images. Shape
///        bounds sit on non-lattice coordinates so no grid point ever lies
///        exactly on a shape edge.

#pragma once

#include "ugrid/dataset.hpp"
#include "ugrid/io.hpp"
#include "ugrid/problem.hpp"
#include "ugrid/rng.hpp"

namespace ugrid {

namespace detail {

inline InteriorMask square_mask(int n) {
    InteriorMask m(n);
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j) m.set_interior(i, j);
    return m;
}

/// L region: the big inset square minus its upper-right quadrant.
inline bool inside_l_shape(int n, int i, int j) {
    const double lo = 1.5, hi = n - 2.5;
    const double mid_i = 0.52 * (n - 1), mid_j = 0.48 * (n - 1);
    if (i < lo || i > hi || j < lo || j > hi) return false;
    return !(i < mid_i && j > mid_j);
}

/// k-pointed star polygon around the grid center.
inline std::vector<std::pair<double, double>> star_polygon(int n, int points = 5) {
    const double ci = 0.5 * (n - 1) + 0.131, cj = 0.5 * (n - 1) + 0.077;
    const double router = 0.46 * (n - 1), rinner = 0.21 * (n - 1);
    const double phase = 0.3;
    std::vector<std::pair<double, double>> poly;
    for (int k = 0; k < 2 * points; ++k) {
        const double r = (k % 2 == 0) ? router : rinner;
        const double a = phase + 3.14159265358979323846 * k / points;
        poly.emplace_back(ci + r * std::cos(a), cj + r * std::sin(a));
    }
    return poly;
}

/// Ray casting over the polygon edges (i plays x, j plays y).
inline bool inside_polygon(double x, double y, const std::vector<std::pair<double, double>>& poly) {
    bool in = false;
    for (std::size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++) {
        const auto [xa, ya] = poly[a];
        const auto [xb, yb] = poly[b];
        if ((ya > y) != (yb > y)) {
            const double xcross = xb + (y - yb) / (ya - yb) * (xa - xb);
            if (x < xcross) in = !in;
        }
    }
    return in;
}

/// Perimeter-parameterized boundary profile used by the square-family cases:
/// walks the frame clockwise and evaluates a profile function of arclength.
template <class Profile>
GridField frame_profile(int n, Profile&& profile) {
    GridField b(n);
    const double per = 4.0 * (n - 1);
    auto arc = [&](int i, int j) -> double {
        if (i == 0) return j;                              // top edge, left to right
        if (j == n - 1) return (n - 1) + i;                // right edge downwards
        if (i == n - 1) return 2.0 * (n - 1) + (n - 1 - j);  // bottom, right to left
        return 3.0 * (n - 1) + (n - 1 - i);                // left edge upwards
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1) b(i, j) = profile(arc(i, j) / per);
    return b;
}

}  // namespace detail

/// Testcase names accepted by gen_testcase and the command line.
inline const std::vector<std::string>& testcase_names() {
    static const std::vector<std::string> names = {"square",  "poisson_square", "l_shape", "star",
                                                   "donut",   "noisy",          "sharp_feature"};
    return names;
}

/// Builds a named benchmark problem for the requested family. Family
/// coefficients are drawn from the training distributions with the given
/// seed; geometry and boundary data are deterministic per name.
inline PdeProblem gen_testcase(const std::string& name, PdeFamily family, int n, std::uint64_t seed = 0) {
    require_valid_grid_size(n, "gen_testcase");
    Rng rng(seed ^ 0xabcdef12345ull);

    InteriorMask mask(n);
    GridField b(n), f(n);

    if (name == "square" || name == "poisson_square") {
        mask = detail::square_mask(n);
        b = detail::frame_profile(n, [](double t) {
            return std::sin(2.0 * 3.14159265358979323846 * t) + 0.5 * std::cos(6.28318530717958647692 * 2 * t);
        });
        if (name == "poisson_square") {
            for (int i = 1; i < n - 1; ++i)
                for (int j = 1; j < n - 1; ++j) f(i, j) = 1e-2;
        }
    } else if (name == "l_shape") {
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j)
                if (detail::inside_l_shape(n, i, j)) mask.set_interior(i, j);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!mask.interior(i, j))
                    b(i, j) = std::sin(6.28318530717958647692 * i / (n - 1.0)) -
                              0.5 * std::cos(6.28318530717958647692 * j / (n - 1.0));
    } else if (name == "star") {
        const auto poly = detail::star_polygon(n);
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j)
                if (detail::inside_polygon(i, j, poly)) mask.set_interior(i, j);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!mask.interior(i, j)) b(i, j) = 0.75 * std::sin(6.28318530717958647692 * (i + j) / (n - 1.0));
    } else if (name == "donut") {
        const double c = 0.5 * (n - 1);
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j) {
                const double d = std::hypot(i - c, j - c);
                if (d < 0.42 * (n - 1) && d > 0.15 * (n - 1)) mask.set_interior(i, j);
            }
        const double chole = 0.15 * (n - 1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!mask.interior(i, j)) b(i, j) = std::hypot(i - c, j - c) < chole + 0.5 ? -1.0 : 1.0;
    } else if (name == "noisy") {
        // donut with extra punched holes, i.i.d. boundary values, noisy f
        const double c = 0.5 * (n - 1);
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j) {
                const double d = std::hypot(i - c, j - c);
                if (d < 0.44 * (n - 1) && d > 0.10 * (n - 1)) mask.set_interior(i, j);
            }
        for (int hole = 0; hole < 3; ++hole) {
            const double hi = (n - 1) * rng.uniform(0.2, 0.8);
            const double hj = (n - 1) * rng.uniform(0.2, 0.8);
            const double hr = (n - 1) * rng.uniform(0.03, 0.08);
            for (int i = 1; i < n - 1; ++i)
                for (int j = 1; j < n - 1; ++j)
                    if (std::hypot(i - hi, j - hj) < hr) mask.set_interior(i, j, false);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!mask.interior(i, j))
                    b(i, j) = rng.uniform(-1.0, 1.0);
                else
                    f(i, j) = rng.uniform(-0.05, 0.05);
            }
    } else if (name == "sharp_feature") {
        // square interior; boundary profile mixes two sharp steps with two
        // smooth bumps along the frame arclength
        mask = detail::square_mask(n);
        b = detail::frame_profile(n, [](double t) {
            double v = 0.2;
            if (t > 0.11 && t < 0.175) v += 0.9;   // sharp
            if (t > 0.60 && t < 0.665) v -= 0.9;   // sharp
            const double g1 = (t - 0.40) / 0.045;  // smooth
            const double g2 = (t - 0.86) / 0.045;  // smooth
            v += 0.8 * std::exp(-g1 * g1) + 0.8 * std::exp(-g2 * g2);
            return v;
        });
    } else {
        throw std::invalid_argument("unknown testcase: " + name);
    }

    switch (family) {
        case PdeFamily::Poisson:
            return PdeProblem::poisson(std::move(f), std::move(b), std::move(mask));
        case PdeFamily::Helmholtz: {
            GridField k2(n);
            for (double& v : k2.data()) v = rng.uniform(0.0, 2.0);
            return PdeProblem::helmholtz(std::move(f), std::move(b), std::move(mask), std::move(k2));
        }
        case PdeFamily::ConvDiffReact: {
            GridField vx(n), vy(n);
            for (double& v : vx.data()) v = rng.uniform(-1.0, 1.0);
            for (double& v : vy.data()) v = rng.uniform(-1.0, 1.0);
            return PdeProblem::convection_diffusion(std::move(f), std::move(b), std::move(mask),
                                                    std::move(vx), std::move(vy), rng.uniform(0.5, 2.0),
                                                    rng.uniform(0.0, 1.0));
        }
    }
    throw std::logic_error("gen_testcase: bad family");
}

/// Mask from a PGM image (nonzero -> interior); boundary values default to a
/// smooth profile, f == 0.
inline PdeProblem testcase_from_pgm(const std::string& path, PdeFamily family, std::uint64_t seed = 0) {
    InteriorMask mask = read_mask(path);
    const int n = mask.n();
    GridField b(n), f(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!mask.interior(i, j)) b(i, j) = std::sin(6.28318530717958647692 * i / (n - 1.0));
    Rng rng(seed ^ 0x77ull);
    switch (family) {
        case PdeFamily::Poisson: return PdeProblem::poisson(std::move(f), std::move(b), std::move(mask));
        case PdeFamily::Helmholtz: {
            GridField k2(n);
            for (double& v : k2.data()) v = rng.uniform(0.0, 2.0);
            return PdeProblem::helmholtz(std::move(f), std::move(b), std::move(mask), std::move(k2));
        }
        case PdeFamily::ConvDiffReact: {
            GridField vx(n), vy(n);
            for (double& v : vx.data()) v = rng.uniform(-1.0, 1.0);
            for (double& v : vy.data()) v = rng.uniform(-1.0, 1.0);
            return PdeProblem::convection_diffusion(std::move(f), std::move(b), std::move(mask),
                                                    std::move(vx), std::move(vy), rng.uniform(0.5, 2.0),
                                                    rng.uniform(0.0, 1.0));
        }
    }
    throw std::logic_error("testcase_from_pgm: bad family");
}

}  // namespace ugrid
