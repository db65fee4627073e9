#include "field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace selseg {

double norm_l2(const Field2D& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s);
}

double norm_max(const Field2D& f) {
    double s = 0.0;
    for (double x : f.v) s = std::max(s, std::fabs(x));
    return s;
}

bool all_finite(const Field2D& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

Field2D restrict_full_weighting(const Field2D& fine) {
    if (fine.nx % 2 != 0 || fine.ny % 2 != 0)
        throw Error(ErrorCode::Dimension,
                    "restrict: dimensions must be even, got " +
                        std::to_string(fine.nx) + "x" + std::to_string(fine.ny));
    const int ncx = fine.nx / 2;
    const int ncy = fine.ny / 2;
    Field2D coarse(ncx, ncy);

    for (int j = 0; j < ncy; ++j) {
        const int fj = 2 * j + 1;
        const bool last_row = (j == ncy - 1);
        for (int i = 0; i < ncx; ++i) {
            const int fi = 2 * i + 1;
            const bool last_col = (i == ncx - 1);
            if (!last_col && !last_row) {
                coarse.at(i, j) =
                    (fine.at(fi - 1, fj - 1) + 2.0 * fine.at(fi, fj - 1) + fine.at(fi + 1, fj - 1) +
                     2.0 * fine.at(fi - 1, fj) + 4.0 * fine.at(fi, fj) + 2.0 * fine.at(fi + 1, fj) +
                     fine.at(fi - 1, fj + 1) + 2.0 * fine.at(fi, fj + 1) + fine.at(fi + 1, fj + 1)) /
                    16.0;
            } else if (last_row && !last_col) {
                coarse.at(i, j) = 0.5 * (fine.at(fi, fj - 1) + fine.at(fi, fj));
            } else if (last_col && !last_row) {
                coarse.at(i, j) = 0.5 * (fine.at(fi - 1, fj) + fine.at(fi, fj));
            } else {
                // corner: mean of the row rule and the column rule
                coarse.at(i, j) = 0.25 * fine.at(fi, fj - 1) + 0.25 * fine.at(fi - 1, fj) +
                                  0.5 * fine.at(fi, fj);
            }
        }
    }
    return coarse;
}

Field2D interpolate_bilinear(const Field2D& coarse) {
    if (coarse.nx < 2 || coarse.ny < 2)
        throw Error(ErrorCode::Dimension, "interpolate: coarse grid must be at least 2x2");
    const int nfx = 2 * coarse.nx;
    const int nfy = 2 * coarse.ny;
    Field2D fine(nfx, nfy);

    auto c = [&](int i, int j) {
        return coarse.at(std::min(i, coarse.nx - 1), std::min(j, coarse.ny - 1));
    };
    for (int j = 0; j < coarse.ny; ++j) {
        for (int i = 0; i < coarse.nx; ++i) {
            fine.at(2 * i, 2 * j) = c(i, j);
            fine.at(2 * i + 1, 2 * j) = 0.5 * (c(i, j) + c(i + 1, j));
            fine.at(2 * i, 2 * j + 1) = 0.5 * (c(i, j) + c(i, j + 1));
            fine.at(2 * i + 1, 2 * j + 1) =
                0.25 * (c(i, j) + c(i + 1, j) + c(i, j + 1) + c(i + 1, j + 1));
        }
    }
    return fine;
}

namespace {

// Number of halvings needed until the next one would drop min(nx, ny)
// below the coarsest size.
int required_halvings(int nx, int ny, int coarsest) {
    int d = 0;
    int m = std::min(nx, ny);
    while (m / 2 >= coarsest && m % 2 == 0) {
        m /= 2;
        ++d;
    }
    return d;
}

} // namespace

bool hierarchy_compatible(int nx, int ny, int coarsest) {
    if (nx < 1 || ny < 1 || coarsest < 1) return false;
    if (std::min(nx, ny) < coarsest) return false;
    int cx = nx, cy = ny;
    while (std::min(cx, cy) / 2 >= coarsest) {
        if (cx % 2 != 0 || cy % 2 != 0) return false;
        cx /= 2;
        cy /= 2;
    }
    return true;
}

std::pair<int, int> largest_compatible_crop(int nx, int ny, int coarsest) {
    std::pair<int, int> best{0, 0};
    long best_area = -1;
    for (int d = 0; d < 24; ++d) {
        const long step = 1L << d;
        const int cx = static_cast<int>(nx / step * step);
        const int cy = static_cast<int>(ny / step * step);
        if (cx < coarsest || cy < coarsest) break;
        if (!hierarchy_compatible(cx, cy, coarsest)) continue;
        const long area = static_cast<long>(cx) * cy;
        if (area > best_area) {
            best_area = area;
            best = {cx, cy};
        }
    }
    return best;
}

GridHierarchy build_hierarchy(int nx, int ny, int coarsest) {
    if (coarsest < 1)
        throw Error(ErrorCode::Param, "build_hierarchy: coarsest size must be positive");
    if (!hierarchy_compatible(nx, ny, coarsest)) {
        auto crop = largest_compatible_crop(nx, ny, coarsest);
        std::string hint = (crop.first > 0)
                               ? "largest compatible crop is " + std::to_string(crop.first) + "x" +
                                     std::to_string(crop.second)
                               : "no compatible crop exists";
        throw Error(ErrorCode::Dimension, "build_hierarchy: " + std::to_string(nx) + "x" +
                                              std::to_string(ny) +
                                              " does not halve cleanly to the coarsest level (" +
                                              hint + ")");
    }
    GridHierarchy h;
    h.coarsest_size = coarsest;
    const int depth = required_halvings(nx, ny, coarsest);
    int cx = nx, cy = ny;
    for (int t = 0; t <= depth; ++t) {
        h.levels.emplace_back(cx, cy);
        cx /= 2;
        cy /= 2;
    }
    return h;
}

} // namespace selseg
