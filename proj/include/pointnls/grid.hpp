#ifndef POINTNLS_GRID_HPP
#define POINTNLS_GRID_HPP

#include <cmath>
#include <string>
#include <vector>

#include "pointnls/errors.hpp"

namespace pointnls {

/// Uniform periodic grid on [-L, L) with M a power of two, so that x_{M/2} = 0
/// is a node and the impurity at the origin sits exactly on the grid.
class Grid1D {
public:
    Grid1D(double half_width, int num_points)
        : half_width_(half_width), num_points_(num_points) {
        if (!(half_width > 0.0))
            throw ValidationError("Grid1D: half_width must be positive, got L=" +
                                  std::to_string(half_width));
        if (num_points < 2 || (num_points & (num_points - 1)) != 0)
            throw ValidationError("Grid1D: num_points must be a power of two >= 2, got M=" +
                                  std::to_string(num_points));
        spacing_ = 2.0 * half_width_ / static_cast<double>(num_points_);
    }

    double half_width() const { return half_width_; }
    int num_points() const { return num_points_; }
    double spacing() const { return spacing_; }

    /// x_j = -L + j h, j = 0..M-1.
    double node(int j) const { return -half_width_ + spacing_ * static_cast<double>(j); }

    /// Index of the node at x = 0.
    int origin_index() const { return num_points_ / 2; }

    /// k_m = pi m / L with m in the symmetric FFT ordering
    /// (m for m < M/2, m - M otherwise).
    double wavenumber(int m) const {
        const int wrapped = (m < num_points_ / 2) ? m : m - num_points_;
        return M_PI * static_cast<double>(wrapped) / half_width_;
    }

    std::vector<double> nodes() const {
        std::vector<double> xs(static_cast<std::size_t>(num_points_));
        for (int j = 0; j < num_points_; ++j) xs[static_cast<std::size_t>(j)] = node(j);
        return xs;
    }

    std::vector<double> wavenumbers() const {
        std::vector<double> ks(static_cast<std::size_t>(num_points_));
        for (int m = 0; m < num_points_; ++m) ks[static_cast<std::size_t>(m)] = wavenumber(m);
        return ks;
    }

    friend bool operator==(const Grid1D& a, const Grid1D& b) {
        return a.half_width_ == b.half_width_ && a.num_points_ == b.num_points_;
    }
    friend bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }

private:
    double half_width_;
    int num_points_;
    double spacing_;
};

}  // namespace pointnls

#endif
