#pragma once

#include <utility>
#include <vector>

#include "error.hpp"

namespace selseg {

/// Scalar field on an nx x ny cell-centred grid over the unit square,
/// so hx = 1/nx and hy = 1/ny. Index i runs along x, j along y; storage
/// is row-major in j (a fixed-j line is contiguous).
struct Field2D {
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    std::vector<double> v;

    Field2D() = default;
    Field2D(int width, int height, double fill = 0.0)
        : nx(width), ny(height), hx(1.0 / width), hy(1.0 / height),
          v(static_cast<size_t>(width) * height, fill) {
        if (width < 1 || height < 1)
            throw Error(ErrorCode::Dimension, "Field2D: dimensions must be positive");
    }

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    double& at(int i, int j) { return v[idx(i, j)]; }
    double at(int i, int j) const { return v[idx(i, j)]; }

    /// Read with mirrored (Neumann) ghost values outside the grid.
    double at_mirrored(int i, int j) const {
        if (i < 0) i = 0;
        if (i >= nx) i = nx - 1;
        if (j < 0) j = 0;
        if (j >= ny) j = ny - 1;
        return at(i, j);
    }

    size_t size() const { return v.size(); }
    bool same_shape(const Field2D& o) const { return nx == o.nx && ny == o.ny; }
};

double norm_l2(const Field2D& f);
double norm_max(const Field2D& f);
bool all_finite(const Field2D& f);

/// Full-weighting restriction to the (nx/2) x (ny/2) grid. Interior coarse
/// pixels use the 1/16 [1 2 1; 2 4 2; 1 2 1] stencil centred on the fine
/// pixel (2i+1, 2j+1); the last coarse row/column average the two adjacent
/// fine pixels, and the corner averages both boundary rules.
Field2D restrict_full_weighting(const Field2D& fine);

/// Bilinear interpolation to the 2nx x 2ny grid: copy at (2i, 2j),
/// two-point averages at (2i+1, 2j) and (2i, 2j+1), four-point average at
/// (2i+1, 2j+1). Stencil legs falling off the grid replicate the nearest
/// valid coarse value.
Field2D interpolate_bilinear(const Field2D& coarse);

/// Dimension chain from finest (level 0) down to the coarsest level whose
/// min dimension is still >= coarsest_size.
struct GridHierarchy {
    std::vector<std::pair<int, int>> levels;
    int coarsest_size = 32;

    int num_levels() const { return static_cast<int>(levels.size()); }
};

/// True when (nx, ny) halves cleanly all the way down to the coarsest level.
bool hierarchy_compatible(int nx, int ny, int coarsest);

/// Largest (by area) crop of (nx, ny) that is hierarchy-compatible.
std::pair<int, int> largest_compatible_crop(int nx, int ny, int coarsest);

/// Builds the level chain; throws a dimension error naming the largest
/// compatible crop when the size does not halve cleanly.
GridHierarchy build_hierarchy(int nx, int ny, int coarsest);

} // namespace selseg
