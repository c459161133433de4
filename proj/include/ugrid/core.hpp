/// @file core.hpp
/// @brief Square grid fields, interior masks, and the masked-composition /
///        norm primitives shared by every solver component.
///
/// All fields are n-by-n, row-major, double precision, with n = 2^k + 1
/// (k >= 2) so that every coarsening step halves the grid cleanly.
/// Masks store the *interior* indicator: 1 marks an unknown interior point,
/// 0 marks a fixed Dirichlet boundary point. The outermost frame of the grid
/// is always boundary.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ugrid {

/// True iff n = 2^k + 1 for some k >= 2 (5, 9, 17, 33, ...).
inline bool is_valid_grid_size(int n) {
    if (n < 5) return false;
    int m = n - 1;
    return (m & (m - 1)) == 0;
}

inline void require_valid_grid_size(int n, const char* what) {
    if (!is_valid_grid_size(n)) {
        throw std::invalid_argument(std::string(what) + ": grid size " + std::to_string(n) +
                                    " is not 2^k+1 with k >= 2");
    }
}

/// n x n scalar field, row-major, double precision.
class GridField {
public:
    GridField() = default;

    explicit GridField(int n, double fill = 0.0) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {
        require_valid_grid_size(n, "GridField");
    }

    GridField(int n, std::vector<double> data) : n_(n), data_(std::move(data)) {
        require_valid_grid_size(n, "GridField");
        if (data_.size() != static_cast<std::size_t>(n_) * n_) {
            throw std::invalid_argument("GridField: data size does not match n*n");
        }
    }

    int n() const { return n_; }
    std::size_t size() const { return data_.size(); }

    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }

    const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * n_; }
    double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * n_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    int n_ = 0;
    std::vector<double> data_;
};

/// n x n interior indicator: 1 = interior unknown, 0 = Dirichlet boundary.
/// The outermost frame is forced to boundary at construction.
class InteriorMask {
public:
    InteriorMask() = default;

    explicit InteriorMask(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0) {
        require_valid_grid_size(n, "InteriorMask");
    }

    InteriorMask(int n, std::vector<std::uint8_t> data) : n_(n), data_(std::move(data)) {
        require_valid_grid_size(n, "InteriorMask");
        if (data_.size() != static_cast<std::size_t>(n_) * n_) {
            throw std::invalid_argument("InteriorMask: data size does not match n*n");
        }
        for (std::uint8_t v : data_) {
            if (v > 1) throw std::invalid_argument("InteriorMask: values must be 0 or 1");
        }
        enforce_frame();
    }

    int n() const { return n_; }

    bool interior(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j] != 0; }

    /// Marks (i, j) interior; frame points stay boundary.
    void set_interior(int i, int j, bool on = true) {
        if (i <= 0 || j <= 0 || i >= n_ - 1 || j >= n_ - 1) return;
        data_[static_cast<std::size_t>(i) * n_ + j] = on ? 1 : 0;
    }

    const std::uint8_t* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * n_; }
    const std::vector<std::uint8_t>& data() const { return data_; }

    int interior_count() const {
        int c = 0;
        for (std::uint8_t v : data_) c += v;
        return c;
    }

private:
    void enforce_frame() {
        for (int j = 0; j < n_; ++j) {
            data_[j] = 0;
            data_[static_cast<std::size_t>(n_ - 1) * n_ + j] = 0;
        }
        for (int i = 0; i < n_; ++i) {
            data_[static_cast<std::size_t>(i) * n_] = 0;
            data_[static_cast<std::size_t>(i) * n_ + n_ - 1] = 0;
        }
    }

    int n_ = 0;
    std::vector<std::uint8_t> data_;
};

/// 3x3 stencil kernel, row-major.
struct Kernel3x3 {
    double w[9];
    double operator()(int a, int b) const { return w[a * 3 + b]; }
};

inline void require_same_n(int a, int b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
    }
}

/// Elementwise select: x where the mask is interior, b where boundary.
/// Boundary values are copied bit-exactly, never recomputed arithmetically.
inline GridField masked_compose(const GridField& x, const GridField& b, const InteriorMask& mask) {
    require_same_n(x.n(), b.n(), "masked_compose");
    require_same_n(x.n(), mask.n(), "masked_compose");
    const int n = x.n();
    GridField out(n);
    for (int i = 0; i < n; ++i) {
        const double* xr = x.row(i);
        const double* br = b.row(i);
        const std::uint8_t* mr = mask.row(i);
        double* or_ = out.row(i);
        for (int j = 0; j < n; ++j) or_[j] = mr[j] ? xr[j] : br[j];
    }
    return out;
}

/// Zeroes every boundary entry of x in place.
inline void gate(GridField& x, const InteriorMask& mask) {
    require_same_n(x.n(), mask.n(), "gate");
    const int n = x.n();
    for (int i = 0; i < n; ++i) {
        double* xr = x.row(i);
        const std::uint8_t* mr = mask.row(i);
        for (int j = 0; j < n; ++j) {
            if (!mr[j]) xr[j] = 0.0;
        }
    }
}

inline GridField gated(GridField x, const InteriorMask& mask) {
    gate(x, mask);
    return x;
}

inline double l2_norm(const GridField& x) {
    double s = 0.0;
    for (double v : x.data()) s += v * v;
    return std::sqrt(s);
}

inline double linf_norm(const GridField& x) {
    double s = 0.0;
    for (double v : x.data()) s = std::max(s, std::abs(v));
    return s;
}

/// ||r|| / ||f_eff||, where f_eff is the solver's effective right-hand side
/// (interior f with the boundary contribution folded in). Throws on a zero
/// denominator so callers can fall back to absolute residuals.
inline double relative_residual(const GridField& r, const GridField& f_eff) {
    require_same_n(r.n(), f_eff.n(), "relative_residual");
    const double denom = l2_norm(f_eff);
    if (denom == 0.0) {
        throw std::domain_error("relative_residual: effective right-hand side has zero norm");
    }
    return l2_norm(r) / denom;
}

inline void axpy(GridField& y, double a, const GridField& x) {
    require_same_n(y.n(), x.n(), "axpy");
    double* yd = y.data().data();
    const double* xd = x.data().data();
    const std::size_t m = y.size();
    for (std::size_t k = 0; k < m; ++k) yd[k] += a * xd[k];
}

inline GridField operator+(GridField a, const GridField& b) {
    axpy(a, 1.0, b);
    return a;
}

inline GridField operator-(GridField a, const GridField& b) {
    axpy(a, -1.0, b);
    return a;
}

inline GridField operator*(double a, GridField x) {
    for (double& v : x.data()) v *= a;
    return x;
}

}  // namespace ugrid
