#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace selseg {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateWeight = 1e-12;
} // namespace

void ModelParams::validate() const {
    auto nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
    if (!nonneg(mu) || !nonneg(lambda1) || !nonneg(lambda2) || !nonneg(nu) || !nonneg(theta) ||
        !nonneg(beta))
        throw Error(ErrorCode::Param, "model parameters must be finite and non-negative");
    if (!(sigma > 0.0) || !(eps_heaviside > 0.0) || !(eps_grad > 0.0))
        throw Error(ErrorCode::Param, "sigma, eps_heaviside and eps_grad must be positive");
}

void MarkerSet::validate(int nx, int ny) const {
    if (points.size() < 3)
        throw Error(ErrorCode::Param, "marker set needs at least 3 points, got " +
                                          std::to_string(points.size()));
    if (nx > 0 && ny > 0) {
        for (size_t k = 0; k < points.size(); ++k) {
            const auto [x, y] = points[k];
            if (!(x >= 0.0 && x <= nx - 1 && y >= 0.0 && y <= ny - 1))
                throw Error(ErrorCode::Param, "marker " + std::to_string(k + 1) + " (" +
                                                  std::to_string(x) + ", " + std::to_string(y) +
                                                  ") lies outside the image");
        }
    }
}

double heaviside(double phi, double eps) {
    return 0.5 + std::atan(phi / eps) / kPi;
}

double delta(double phi, double eps) {
    return eps / (kPi * (eps * eps + phi * phi));
}

double delta_prime(double phi, double eps) {
    const double q = eps * eps + phi * phi;
    return -2.0 * eps * phi / (kPi * q * q);
}

Field2D distance_map(const MarkerSet& markers, double sigma, int nx, int ny) {
    if (markers.points.empty())
        throw Error(ErrorCode::Param, "distance_map: empty marker set");
    if (!(sigma > 0.0))
        throw Error(ErrorCode::Param, "distance_map: sigma must be positive");
    Field2D d(nx, ny, 1.0);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int j = 0; j < ny; ++j) {
        const double y = j * d.hy;
        for (int i = 0; i < nx; ++i) {
            const double x = i * d.hx;
            double prod = 1.0;
            for (const auto& [mx, my] : markers.points) {
                const double dx = mx * d.hx - x;
                const double dy = my * d.hy - y;
                prod *= 1.0 - std::exp(-dx * dx * inv2s2) * std::exp(-dy * dy * inv2s2);
            }
            d.at(i, j) = prod;
        }
    }
    return d;
}

Field2D edge_detector(const Field2D& z, double beta) {
    Field2D g(z.nx, z.ny);
    for (int j = 0; j < z.ny; ++j) {
        for (int i = 0; i < z.nx; ++i) {
            double zx, zy;
            if (i == 0)
                zx = (z.at(1 % z.nx, j) - z.at(0, j)) / z.hx;
            else if (i == z.nx - 1)
                zx = (z.at(i, j) - z.at(i - 1, j)) / z.hx;
            else
                zx = (z.at(i + 1, j) - z.at(i - 1, j)) / (2.0 * z.hx);
            if (j == 0)
                zy = (z.at(i, 1 % z.ny) - z.at(i, 0)) / z.hy;
            else if (j == z.ny - 1)
                zy = (z.at(i, j) - z.at(i, j - 1)) / z.hy;
            else
                zy = (z.at(i, j + 1) - z.at(i, j - 1)) / (2.0 * z.hy);
            g.at(i, j) = 1.0 / (1.0 + beta * (zx * zx + zy * zy));
        }
    }
    return g;
}

std::pair<double, double> region_means(const Field2D& z, const Field2D& phi, double eps) {
    if (!z.same_shape(phi))
        throw Error(ErrorCode::Dimension, "region_means: shape mismatch");
    double num1 = 0.0, den1 = 0.0, num2 = 0.0, den2 = 0.0;
    for (size_t k = 0; k < z.size(); ++k) {
        const double h = heaviside(phi.v[k], eps);
        num1 += h * z.v[k];
        den1 += h;
        num2 += (1.0 - h) * z.v[k];
        den2 += 1.0 - h;
    }
    if (den1 < kDegenerateWeight || den2 < kDegenerateWeight)
        throw Error(ErrorCode::Degenerate, "region_means: a region has vanishing weight");
    return {num1 / den1, num2 / den2};
}

double polygon_area(const MarkerSet& markers, double hx, double hy) {
    if (markers.points.size() < 3)
        throw Error(ErrorCode::Param, "polygon_area: need at least 3 markers");
    double twice = 0.0;
    const size_t k = markers.points.size();
    for (size_t a = 0; a < k; ++a) {
        const size_t b = (a + 1) % k;
        const double xa = markers.points[a].first * hx, ya = markers.points[a].second * hy;
        const double xb = markers.points[b].first * hx, yb = markers.points[b].second * hy;
        twice += xa * yb - xb * ya;
    }
    const double area = 0.5 * std::fabs(twice);
    if (area < 1e-12)
        throw Error(ErrorCode::Param, "polygon_area: markers are collinear");
    return area;
}

namespace {

double grad_norm_eps(const Field2D& phi, int i, int j, double eps_grad) {
    const double px = (phi.at_mirrored(i + 1, j) - phi.at_mirrored(i - 1, j)) / (2.0 * phi.hx);
    const double py = (phi.at_mirrored(i, j + 1) - phi.at_mirrored(i, j - 1)) / (2.0 * phi.hy);
    return std::sqrt(px * px + py * py + eps_grad * eps_grad);
}

double weight_at(const Field2D& d, const Field2D& g, ModelKind kind, size_t k) {
    return kind == ModelKind::RadaChen ? d.v[k] * g.v[k] : g.v[k];
}

} // namespace

Field2D diffusivity(const Field2D& phi, const Field2D& d, const Field2D& g,
                    const ModelParams& params, ModelKind kind) {
    if (!phi.same_shape(d) || !phi.same_shape(g))
        throw Error(ErrorCode::Dimension, "diffusivity: shape mismatch");
    Field2D G(phi.nx, phi.ny);
    for (int j = 0; j < phi.ny; ++j)
        for (int i = 0; i < phi.nx; ++i)
            G.at(i, j) = weight_at(d, g, kind, G.idx(i, j)) / grad_norm_eps(phi, i, j, params.eps_grad);
    return G;
}

namespace {

void coefficient_row(int i, int j, const Field2D& phi, const Field2D& G,
                     const ModelParams& params, StencilField& coeffs) {
    const double de = delta(phi.at(i, j), params.eps_heaviside);
    const double cx = params.mu * de / (phi.hx * phi.hx);
    const double cy = params.mu * de / (phi.hy * phi.hy);
    auto Gm = [&](int ii, int jj) {
        return G.at_mirrored(ii, jj);
    };
    const double a = cx * 0.5 * (Gm(i, j) + Gm(i + 1, j));
    const double b = cx * 0.5 * (Gm(i, j) + Gm(i - 1, j));
    const double c = cy * 0.5 * (Gm(i, j) + Gm(i, j + 1));
    const double e = cy * 0.5 * (Gm(i, j) + Gm(i, j - 1));
    coeffs.A.at(i, j) = a;
    coeffs.B.at(i, j) = b;
    coeffs.C.at(i, j) = c;
    coeffs.D.at(i, j) = e;
    coeffs.S.at(i, j) = a + b + c + e;
}

} // namespace

StencilField assemble_coefficients(const Field2D& phi, const Field2D& d, const Field2D& g,
                                   const ModelParams& params, ModelKind kind) {
    if (!all_finite(phi))
        throw Error(ErrorCode::Numeric, "assemble_coefficients: phi has non-finite values");
    const Field2D G = diffusivity(phi, d, g, params, kind);
    StencilField coeffs(phi.nx, phi.ny);
    for (int j = 0; j < phi.ny; ++j)
        for (int i = 0; i < phi.nx; ++i)
            coefficient_row(i, j, phi, G, params, coeffs);
    return coeffs;
}

void refresh_coefficient_row(int i, int j, const Field2D& phi, Field2D& G,
                             const Field2D& d, const Field2D& g, const ModelParams& params,
                             ModelKind kind, StencilField& coeffs) {
    G.at(i, j) =
        weight_at(d, g, kind, G.idx(i, j)) / grad_norm_eps(phi, i, j, params.eps_grad);
    coefficient_row(i, j, phi, G, params, coeffs);
}

double rc_area_bracket(const Field2D& phi, const ModelParams& params, double area_a1) {
    double sum_h = 0.0;
    for (double p : phi.v) sum_h += heaviside(p, params.eps_heaviside);
    return 2.0 * params.nu * (phi.hx * phi.hy * sum_h - area_a1);
}

double rhs_at(int i, int j, const Field2D& phi, const Field2D& z, const Field2D& d,
              double c1, double c2, const ModelParams& params, ModelKind kind,
              double area_bracket) {
    const size_t k = phi.idx(i, j);
    const double zd1 = z.v[k] - c1;
    const double zd2 = z.v[k] - c2;
    double bracket = params.lambda1 * zd1 * zd1 - params.lambda2 * zd2 * zd2;
    if (kind == ModelKind::RadaChen)
        bracket += area_bracket;
    else
        bracket += params.theta * d.v[k];
    return delta(phi.v[k], params.eps_heaviside) * bracket;
}

Field2D rhs(const Field2D& phi, const Field2D& z, const Field2D& d, double c1, double c2,
            const ModelParams& params, ModelKind kind, double area_a1) {
    if (!phi.same_shape(z) || !phi.same_shape(d))
        throw Error(ErrorCode::Dimension, "rhs: shape mismatch");
    const double bracket =
        kind == ModelKind::RadaChen ? rc_area_bracket(phi, params, area_a1) : 0.0;
    Field2D f(phi.nx, phi.ny);
    for (int j = 0; j < phi.ny; ++j)
        for (int i = 0; i < phi.nx; ++i)
            f.at(i, j) = rhs_at(i, j, phi, z, d, c1, c2, params, kind, bracket);
    return f;
}

Field2D apply_operator(const Field2D& phi, const StencilField& coeffs, const Field2D& rhs_field) {
    if (!phi.same_shape(coeffs.A) || !phi.same_shape(rhs_field))
        throw Error(ErrorCode::Dimension, "apply_operator: shape mismatch");
    Field2D out(phi.nx, phi.ny);
    for (int j = 0; j < phi.ny; ++j) {
        for (int i = 0; i < phi.nx; ++i) {
            out.at(i, j) = coeffs.A.at(i, j) * phi.at_mirrored(i + 1, j) +
                           coeffs.B.at(i, j) * phi.at_mirrored(i - 1, j) +
                           coeffs.C.at(i, j) * phi.at_mirrored(i, j + 1) +
                           coeffs.D.at(i, j) * phi.at_mirrored(i, j - 1) -
                           coeffs.S.at(i, j) * phi.at(i, j) - rhs_field.at(i, j);
        }
    }
    return out;
}

double energy(const Field2D& phi, const Field2D& z, const Field2D& d, const Field2D& g,
              double c1, double c2, const ModelParams& params, ModelKind kind, double area_a1) {
    const double cell = phi.hx * phi.hy;
    double length = 0.0, fit1 = 0.0, fit2 = 0.0, sum_h = 0.0, dist = 0.0;
    for (int j = 0; j < phi.ny; ++j) {
        for (int i = 0; i < phi.nx; ++i) {
            const size_t k = phi.idx(i, j);
            const double h = heaviside(phi.v[k], params.eps_heaviside);
            const double de = delta(phi.v[k], params.eps_heaviside);
            length += weight_at(d, g, kind, k) * de * grad_norm_eps(phi, i, j, params.eps_grad);
            const double zd1 = z.v[k] - c1;
            const double zd2 = z.v[k] - c2;
            fit1 += zd1 * zd1 * h;
            fit2 += zd2 * zd2 * (1.0 - h);
            sum_h += h;
            dist += d.v[k] * h;
        }
    }
    double e = params.mu * length * cell + params.lambda1 * fit1 * cell +
               params.lambda2 * fit2 * cell;
    if (kind == ModelKind::RadaChen) {
        const double a1_dev = cell * sum_h - area_a1;
        const double a2_dev = (1.0 - cell * sum_h) - (1.0 - area_a1);
        e += params.nu * (a1_dev * a1_dev + a2_dev * a2_dev);
    } else {
        e += params.theta * dist * cell;
    }
    return e;
}

bool point_in_polygon(double x, double y, const MarkerSet& markers) {
    const auto& p = markers.points;
    const size_t k = p.size();
    bool inside = false;
    for (size_t a = 0, b = k - 1; a < k; b = a++) {
        const double xa = p[a].first, ya = p[a].second;
        const double xb = p[b].first, yb = p[b].second;
        // on-edge counts as inside
        const double cross = (xb - xa) * (y - ya) - (yb - ya) * (x - xa);
        const double dot = (x - xa) * (x - xb) + (y - ya) * (y - yb);
        if (std::fabs(cross) < 1e-12 && dot <= 1e-12) return true;
        if ((ya > y) != (yb > y)) {
            const double xc = xa + (y - ya) / (yb - ya) * (xb - xa);
            if (x < xc) inside = !inside;
        }
    }
    return inside;
}

Field2D initial_phi(const MarkerSet& markers, int nx, int ny) {
    markers.validate();
    Field2D phi(nx, ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            phi.at(i, j) = point_in_polygon(static_cast<double>(i), static_cast<double>(j), markers)
                               ? 1.0
                               : -1.0;
    if (nx % 2 == 0 && ny % 2 == 0 && nx >= 4 && ny >= 4)
        phi = interpolate_bilinear(restrict_full_weighting(phi));
    return phi;
}

} // namespace selseg
