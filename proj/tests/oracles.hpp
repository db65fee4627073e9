// Independent reference implementations used to freeze expected values.
// Everything here is deliberately naive: dense matrices, explicit index
// arithmetic, std::complex, O(N^2) transforms.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "field.hpp"
#include "model.hpp"

namespace oracle {

using selseg::Field2D;

// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (size_t r = col + 1; r < n; ++r) {
            const double m = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (size_t r = n; r-- > 0;) {
        double s = b[r];
        for (size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

// Full-weighting restriction as an explicit dense weight table.
inline Field2D dense_restrict(const Field2D& fine) {
    const int ncx = fine.nx / 2, ncy = fine.ny / 2;
    Field2D out(ncx, ncy);
    for (int J = 0; J < ncy; ++J) {
        for (int I = 0; I < ncx; ++I) {
            std::vector<double> w(fine.size(), 0.0);
            const int fi = 2 * I + 1, fj = 2 * J + 1;
            const bool lr = J == ncy - 1, lc = I == ncx - 1;
            auto at = [&](int a, int b) -> double& { return w[fine.idx(a, b)]; };
            if (!lr && !lc) {
                const double st[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di)
                        at(fi + di, fj + dj) += st[dj + 1][di + 1] / 16.0;
            } else if (lr && !lc) {
                at(fi, fj - 1) += 0.5;
                at(fi, fj) += 0.5;
            } else if (lc && !lr) {
                at(fi - 1, fj) += 0.5;
                at(fi, fj) += 0.5;
            } else {
                at(fi, fj - 1) += 0.25;
                at(fi - 1, fj) += 0.25;
                at(fi, fj) += 0.5;
            }
            double s = 0.0;
            for (size_t k = 0; k < w.size(); ++k) s += w[k] * fine.v[k];
            out.at(I, J) = s;
        }
    }
    return out;
}

// Bilinear interpolation as an explicit weight table with clamped legs.
inline Field2D dense_interpolate(const Field2D& coarse) {
    const int nfx = 2 * coarse.nx, nfy = 2 * coarse.ny;
    Field2D out(nfx, nfy);
    auto cl = [&](int a, int lim) { return std::min(a, lim - 1); };
    for (int b = 0; b < nfy; ++b) {
        for (int a = 0; a < nfx; ++a) {
            std::vector<double> w(coarse.size(), 0.0);
            const int I = a / 2, J = b / 2;
            if (a % 2 == 0 && b % 2 == 0) {
                w[coarse.idx(I, J)] += 1.0;
            } else if (a % 2 == 1 && b % 2 == 0) {
                w[coarse.idx(I, J)] += 0.5;
                w[coarse.idx(cl(I + 1, coarse.nx), J)] += 0.5;
            } else if (a % 2 == 0 && b % 2 == 1) {
                w[coarse.idx(I, J)] += 0.5;
                w[coarse.idx(I, cl(J + 1, coarse.ny))] += 0.5;
            } else {
                w[coarse.idx(I, J)] += 0.25;
                w[coarse.idx(cl(I + 1, coarse.nx), J)] += 0.25;
                w[coarse.idx(I, cl(J + 1, coarse.ny))] += 0.25;
                w[coarse.idx(cl(I + 1, coarse.nx), cl(J + 1, coarse.ny))] += 0.25;
            }
            double s = 0.0;
            for (size_t k = 0; k < w.size(); ++k) s += w[k] * coarse.v[k];
            out.at(a, b) = s;
        }
    }
    return out;
}

// The 5-point operator with mirrored ghosts as a dense matrix.
inline std::vector<std::vector<double>> dense_operator_matrix(const selseg::StencilField& K) {
    const int nx = K.nx(), ny = K.ny();
    const size_t n = static_cast<size_t>(nx) * ny;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    auto idx = [&](int i, int j) { return static_cast<size_t>(j) * nx + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const size_t r = idx(i, j);
            m[r][r] -= K.S.at(i, j);
            auto couple = [&](double coef, int ti, int tj) {
                const int ci = std::clamp(ti, 0, nx - 1);
                const int cj = std::clamp(tj, 0, ny - 1);
                m[r][idx(ci, cj)] += coef;
            };
            couple(K.A.at(i, j), i + 1, j);
            couple(K.B.at(i, j), i - 1, j);
            couple(K.C.at(i, j), i, j + 1);
            couple(K.D.at(i, j), i, j - 1);
        }
    }
    return m;
}

inline Field2D dense_apply_operator(const Field2D& phi, const selseg::StencilField& K,
                                    const Field2D& f) {
    const auto m = dense_operator_matrix(K);
    Field2D out(phi.nx, phi.ny);
    for (size_t r = 0; r < phi.size(); ++r) {
        double s = -f.v[r];
        for (size_t c = 0; c < phi.size(); ++c) s += m[r][c] * phi.v[c];
        out.v[r] = s;
    }
    return out;
}

// Central finite difference.
template <typename Fn>
double fd(Fn&& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Brute-force amplification over the same frequency set, evaluated with
// std::complex instead of trig tables. lagged bit order: A, B, C, D.
inline double dense_amp(double A, double B, double C, double D, double S, unsigned lagged,
                        const std::vector<std::pair<double, double>>& samples) {
    using cplx = std::complex<double>;
    const double k[4] = {A, B, C, D};
    double best = 0.0;
    for (const auto& [a1, a2] : samples) {
        const cplx ph[4] = {std::polar(1.0, a1), std::polar(1.0, -a1), std::polar(1.0, a2),
                            std::polar(1.0, -a2)};
        cplx num(0.0, 0.0), den(S, 0.0);
        for (int t = 0; t < 4; ++t) {
            if (lagged & (1u << t))
                num += k[t] * ph[t];
            else
                den -= k[t] * ph[t];
        }
        if (std::abs(den) < 1e-14 * S) continue;
        best = std::max(best, std::abs(num) / std::abs(den));
    }
    return best;
}

// Uniform high-frequency sample set, built the straightforward way.
inline std::vector<std::pair<double, double>> hf_samples(int q) {
    const double pi = 3.14159265358979323846;
    std::vector<double> ax;
    for (int k = 0; k < q; ++k) ax.push_back(-pi + 2.0 * pi * k / q);
    for (double e : {-pi, -pi / 2, 0.0, pi / 2})
        if (std::find(ax.begin(), ax.end(), e) == ax.end()) ax.push_back(e);
    std::vector<std::pair<double, double>> out;
    for (double x : ax)
        for (double y : ax)
            if (!(x >= -pi / 2 && x < pi / 2 && y >= -pi / 2 && y < pi / 2))
                out.emplace_back(x, y);
    return out;
}

// Power of the discrete Fourier transform outside the low-frequency box.
inline double dft_highfreq_power(const Field2D& e) {
    const double pi = 3.14159265358979323846;
    const int nx = e.nx, ny = e.ny;
    double power = 0.0;
    for (int t1 = -nx / 2; t1 < nx / 2; ++t1) {
        for (int t2 = -ny / 2; t2 < ny / 2; ++t2) {
            const double a1 = 2.0 * pi * t1 / nx;
            const double a2 = 2.0 * pi * t2 / ny;
            if (a1 >= -pi / 2 && a1 < pi / 2 && a2 >= -pi / 2 && a2 < pi / 2) continue;
            std::complex<double> acc(0.0, 0.0);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    acc += e.at(i, j) * std::polar(1.0, -(a1 * i + a2 * j));
            power += std::norm(acc);
        }
    }
    return power;
}

inline Field2D random_field(int nx, int ny, std::mt19937& rng, double lo = -1.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field2D f(nx, ny);
    for (double& x : f.v) x = dist(rng);
    return f;
}

} // namespace oracle
