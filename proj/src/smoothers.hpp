#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "model.hpp"

namespace selseg {

enum class SmootherKind {
    GslexI,   // lexicographic Gauss-Seidel, coefficients fixed per sweep
    GslexII,  // lexicographic Gauss-Seidel, per-pixel coefficient refresh
    GslineI,  // line Gauss-Seidel (tridiagonal along i), fixed coefficients
    GslineII, // line Gauss-Seidel, per-line coefficient refresh
    NewtI,    // pointwise Newton, fixed coefficients
    NewtII,   // pointwise Newton, per-pixel refresh
    Hybrid1,  // line sweep + overlapping 4x4 collective updates on jumps
    Hybrid2,  // four directional sweeps with partial line solves on jumps
};

enum class LagLabel : std::uint8_t { A = 0, B = 1, C = 2, D = 3, None = 4 };

/// Jump-set membership and the per-pixel smallest-coefficient label.
struct CaseMap {
    int nx = 0;
    int ny = 0;
    double sigma_threshold = 1.5;
    std::vector<std::uint8_t> in_jump; // 0/1
    std::vector<std::uint8_t> smallest; // LagLabel

    bool in_jump_set(int i, int j) const { return in_jump[idx(i, j)] != 0; }
    LagLabel smallest_at(int i, int j) const {
        return static_cast<LagLabel>(smallest[idx(i, j)]);
    }
    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    size_t jump_count() const;
};

/// Maximal run of jump pixels sharing the same smallest coefficient along
/// the coupled direction (A/B: along j at fixed i; C/D: along i at fixed j).
struct Superpixel {
    LagLabel lag = LagLabel::None;
    int line_index = 0; // the fixed coordinate
    int start = 0;      // inclusive, along the run direction
    int end = 0;        // inclusive

    int length() const { return end - start + 1; }
};

enum class CoeffMode { Global, Local };

/// Refreshes the coefficient row (and forcing) at one pixel; used by the
/// local (-II) smoother variants.
using RowRefresher = std::function<void(int i, int j)>;

/// Newton curvature term Q'(phi_ij); zero when absent.
using NewtonCurvature = std::function<double(int i, int j)>;

/// Thomas algorithm for a tridiagonal system. lower[k] couples row k to
/// k-1 (lower[0] unused), upper[k] couples row k to k+1 (last unused).
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs);

/// Solves the 4x4 arrow system (dense first row/column, diagonal rest) by a
/// Schur complement on the (0,0) entry.
std::array<double, 4> solve_arrow4(const std::array<std::array<double, 4>, 4>& m,
                                   const std::array<double, 4>& rhs);

/// Membership rule: max(A,B,C,D) / max(min(A,B,C,D), tiny) > sigma_threshold;
/// smallest label = argmin with ties broken in order A, B, C, D.
CaseMap detect_jump_set(const StencilField& coeffs, double sigma_threshold);

/// Large/small pattern of the four coefficients, classified against the
/// midpoint of the pixel's min and max; returns the case index 1..14.
int classify_case14(double a, double b, double c, double d);

/// phi <- (A phi_E + B phi_W + C phi_N + D phi_S - f) / S with newest
/// available neighbours; Neumann boundaries fold into the diagonal.
void gslex_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f, CoeffMode mode,
                 const RowRefresher* refresher = nullptr);

/// One pass of line relaxation: for each j in increasing order solve the
/// tridiagonal system along i with F = -C phi_N - D phi_S + f (old north,
/// new south neighbours). A positive `damping` turns each line solve into
/// the backward-Euler step of the pseudo-time flow (diagonal shifted by
/// damping, previous value on the right-hand side); solved states stay
/// fixed for any damping.
void gsline_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f, CoeffMode mode,
                  const RowRefresher* refresher = nullptr, double damping = 0.0);

/// phi <- phi - (S phi - P + Q) / (S + Q'); the assembled forcing carries
/// the Q part, `curvature` supplies Q'. Falls back to halving Q' when the
/// denominator vanishes.
void newton_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f,
                  const NewtonCurvature* curvature, CoeffMode mode,
                  const RowRefresher* refresher = nullptr);

/// Step I: one global line sweep. Step II: for every jump pixel in
/// lexicographic order, solve the 4x4 collective system with its smallest
/// coefficient lagged and write all four unknowns (updates may overlap).
void hybrid1_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f,
                   const CaseMap& casemap);

/// Runs of jump pixels with `lag` smallest; singleton runs are extended by
/// the next in-line neighbour in the traversal direction (falling back to
/// the previous one at line ends).
std::vector<Superpixel> build_superpixels(const CaseMap& casemap, LagLabel lag);

/// Four directional sub-sweeps (lag A, B, C, D in order). Starred pixels are
/// solved collectively per superpixel with the lagged neighbour read from
/// values prior to the sub-sweep; all other pixels get the pointwise
/// Gauss-Seidel update in the lag's traversal order. Each pixel is updated
/// exactly once per sub-sweep; `visit_counts`, when given, receives the
/// per-sub-sweep update counters.
void hybrid2_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f,
                   const CaseMap& casemap, std::array<size_t, 4>* visit_counts = nullptr);

} // namespace selseg
