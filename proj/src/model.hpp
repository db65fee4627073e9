#pragma once

#include <utility>
#include <vector>

#include "field.hpp"

namespace selseg {

enum class ModelKind {
    RadaChen,    // edge-weighted length + intensity fitting + polygon-area penalty
    SpencerChen, // edge-weighted length + intensity fitting + standalone distance penalty
};

struct ModelParams {
    double mu = 0.5;            // regularisation weight
    double lambda1 = 1e-4;      // inside fitting weight
    double lambda2 = 1e-4;      // outside fitting weight
    double nu = 1.0;            // area weight (Rada-Chen only)
    double theta = 1.0;         // distance weight (Spencer-Chen only)
    double beta = 0.005;        // edge detector parameter, for unit-square gradients
    double sigma = 0.02;        // distance function width, in domain units
    double eps_heaviside = 1.0; // Heaviside regularisation
    double eps_grad = 1e-6;     // |grad phi| regularisation

    void validate() const;
};

/// Ordered user-picked points, in pixel coordinates (x right, y down).
struct MarkerSet {
    std::vector<std::pair<double, double>> points;

    size_t size() const { return points.size(); }
    void validate(int nx = 0, int ny = 0) const; // bounds checked when dims given
};

/// Per-pixel coefficients of the 5-point scheme:
/// A (east), B (west), C (north, j+1), D (south, j-1), S = A+B+C+D.
struct StencilField {
    Field2D A, B, C, D, S;

    StencilField() = default;
    StencilField(int nx, int ny) : A(nx, ny), B(nx, ny), C(nx, ny), D(nx, ny), S(nx, ny) {}
    int nx() const { return A.nx; }
    int ny() const { return A.ny; }
};

// Regularised Heaviside 1/2 + arctan(phi/eps)/pi and its derivatives.
double heaviside(double phi, double eps);
double delta(double phi, double eps);
double delta_prime(double phi, double eps);

/// d(x,y) = prod_k (1 - exp(-(x_k-x)^2/(2 sigma^2)) exp(-(y_k-y)^2/(2 sigma^2))),
/// evaluated at pixel positions (i*hx, j*hy); zero exactly at marker pixels.
Field2D distance_map(const MarkerSet& markers, double sigma, int nx, int ny);

/// g = 1/(1 + beta |grad z|^2), central differences (one-sided at the
/// boundary) in domain units.
Field2D edge_detector(const Field2D& z, double beta);

/// Intensity averages weighted by H_eps(phi) and 1 - H_eps(phi).
std::pair<double, double> region_means(const Field2D& z, const Field2D& phi, double eps);

/// Shoelace area of the marker polygon with pixel coordinates scaled by
/// (hx, hy); positive regardless of orientation.
double polygon_area(const MarkerSet& markers, double hx, double hy);

/// Diffusivity G = w / |grad phi|_eps with w = d*g (Rada-Chen) or g
/// (Spencer-Chen); |grad phi|_eps = sqrt(phix^2 + phiy^2 + eps_grad^2) with
/// mirrored ghosts.
Field2D diffusivity(const Field2D& phi, const Field2D& d, const Field2D& g,
                    const ModelParams& params, ModelKind kind);

/// A,B,C,D from mu * delta_eps(phi) / h^2 times half-index means of G; S is
/// their sum.
StencilField assemble_coefficients(const Field2D& phi, const Field2D& d, const Field2D& g,
                                   const ModelParams& params, ModelKind kind);

/// Recompute one pixel's row of coeffs (and G at that pixel) in place.
void refresh_coefficient_row(int i, int j, const Field2D& phi, Field2D& G,
                             const Field2D& d, const Field2D& g, const ModelParams& params,
                             ModelKind kind, StencilField& coeffs);

/// Area bracket of the Rada-Chen forcing: 2 nu (hx hy sum H_eps(phi) - A1).
double rc_area_bracket(const Field2D& phi, const ModelParams& params, double area_a1);

/// Pointwise forcing f given a precomputed area bracket (Rada-Chen) or the
/// distance penalty (Spencer-Chen).
double rhs_at(int i, int j, const Field2D& phi, const Field2D& z, const Field2D& d,
              double c1, double c2, const ModelParams& params, ModelKind kind,
              double area_bracket);

/// Full forcing field; the Rada-Chen global sum is computed once per call.
Field2D rhs(const Field2D& phi, const Field2D& z, const Field2D& d, double c1, double c2,
            const ModelParams& params, ModelKind kind, double area_a1);

/// A phi_E + B phi_W + C phi_N + D phi_S - S phi - f with mirrored ghosts;
/// the residual is the negation.
Field2D apply_operator(const Field2D& phi, const StencilField& coeffs, const Field2D& rhs_field);

/// Discrete model energy (pixel sums times hx hy).
double energy(const Field2D& phi, const Field2D& z, const Field2D& d, const Field2D& g,
              double c1, double c2, const ModelParams& params, ModelKind kind, double area_a1);

/// True when (x, y) lies inside (or on the boundary of) the marker polygon.
bool point_in_polygon(double x, double y, const MarkerSet& markers);

/// +1 inside the marker polygon, -1 outside, smoothed by one
/// restrict/interpolate round trip when the dimensions allow it.
Field2D initial_phi(const MarkerSet& markers, int nx, int ny);

} // namespace selseg
