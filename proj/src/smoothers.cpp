#include "smoothers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace selseg {

namespace {

constexpr double kPivotTiny = 1e-300;

// Diagonal with the Neumann boundary couplings folded in: the mirrored
// ghost equals the pixel itself, so out-of-grid couplings move onto S.
double s_eff(const StencilField& K, int i, int j) {
    double s = K.S.at(i, j);
    if (i == K.nx() - 1) s -= K.A.at(i, j);
    if (i == 0) s -= K.B.at(i, j);
    if (j == K.ny() - 1) s -= K.C.at(i, j);
    if (j == 0) s -= K.D.at(i, j);
    return s;
}

void check_divisor(double s) {
    if (!(std::fabs(s) > kPivotTiny))
        throw Error(ErrorCode::Numeric, "smoother: vanishing diagonal (S = 0 at a pixel)");
}

// Newest-available pointwise update with boundary folding.
void gs_update(Field2D& phi, const StencilField& K, const Field2D& f, int i, int j) {
    const int nx = phi.nx, ny = phi.ny;
    double num = -f.at(i, j);
    if (i + 1 < nx) num += K.A.at(i, j) * phi.at(i + 1, j);
    if (i - 1 >= 0) num += K.B.at(i, j) * phi.at(i - 1, j);
    if (j + 1 < ny) num += K.C.at(i, j) * phi.at(i, j + 1);
    if (j - 1 >= 0) num += K.D.at(i, j) * phi.at(i, j - 1);
    const double s = s_eff(K, i, j);
    check_divisor(s);
    phi.at(i, j) = num / s;
}

// Traversal orders used by the hybrid sub-sweeps: lines along j at fixed i
// (column order) or along i at fixed j (row order), forward or backward.
struct SweepOrder {
    bool lines_along_j; // true: outer loop over i, inner over j
    bool forward;       // false reverses both loops
};

template <typename PixelFn>
void traverse(int nx, int ny, SweepOrder order, PixelFn&& fn) {
    const int no = order.lines_along_j ? nx : ny;
    const int ni = order.lines_along_j ? ny : nx;
    for (int o = 0; o < no; ++o) {
        const int oo = order.forward ? o : no - 1 - o;
        for (int q = 0; q < ni; ++q) {
            const int qq = order.forward ? q : ni - 1 - q;
            if (order.lines_along_j)
                fn(oo, qq);
            else
                fn(qq, oo);
        }
    }
}

} // namespace

size_t CaseMap::jump_count() const {
    size_t n = 0;
    for (auto b : in_jump) n += b;
    return n;
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs) {
    const size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0)
        throw Error(ErrorCode::Dimension, "solve_tridiagonal: band size mismatch");
    std::vector<double> cp(n), dp(n);
    double piv = diag[0];
    if (!(std::fabs(piv) > kPivotTiny))
        throw Error(ErrorCode::Singular, "solve_tridiagonal: zero pivot at row 0");
    cp[0] = upper[0] / piv;
    dp[0] = rhs[0] / piv;
    for (size_t k = 1; k < n; ++k) {
        piv = diag[k] - lower[k] * cp[k - 1];
        if (!(std::fabs(piv) > kPivotTiny))
            throw Error(ErrorCode::Singular,
                        "solve_tridiagonal: zero pivot at row " + std::to_string(k));
        cp[k] = upper[k] / piv;
        dp[k] = (rhs[k] - lower[k] * dp[k - 1]) / piv;
    }
    std::vector<double> x(n);
    x[n - 1] = dp[n - 1];
    for (size_t k = n - 1; k-- > 0;) x[k] = dp[k] - cp[k] * x[k + 1];
    return x;
}

std::array<double, 4> solve_arrow4(const std::array<std::array<double, 4>, 4>& m,
                                   const std::array<double, 4>& rhs) {
    double schur = m[0][0];
    double b0 = rhs[0];
    for (int k = 1; k < 4; ++k) {
        if (!(std::fabs(m[k][k]) > kPivotTiny))
            throw Error(ErrorCode::Singular, "solve_arrow4: zero diagonal entry");
        schur -= m[0][k] * m[k][0] / m[k][k];
        b0 -= m[0][k] * rhs[k] / m[k][k];
    }
    if (!(std::fabs(schur) > kPivotTiny))
        throw Error(ErrorCode::Singular, "solve_arrow4: singular Schur pivot");
    std::array<double, 4> x{};
    x[0] = b0 / schur;
    for (int k = 1; k < 4; ++k) x[k] = (rhs[k] - m[k][0] * x[0]) / m[k][k];
    return x;
}

CaseMap detect_jump_set(const StencilField& coeffs, double sigma_threshold) {
    if (!(sigma_threshold > 1.0))
        throw Error(ErrorCode::Param, "detect_jump_set: sigma threshold must exceed 1");
    CaseMap cm;
    cm.nx = coeffs.nx();
    cm.ny = coeffs.ny();
    cm.sigma_threshold = sigma_threshold;
    cm.in_jump.assign(coeffs.A.size(), 0);
    cm.smallest.assign(coeffs.A.size(), static_cast<std::uint8_t>(LagLabel::None));
    for (size_t k = 0; k < coeffs.A.size(); ++k) {
        const double c[4] = {coeffs.A.v[k], coeffs.B.v[k], coeffs.C.v[k], coeffs.D.v[k]};
        int arg_min = 0;
        double lo = c[0], hi = c[0];
        for (int t = 1; t < 4; ++t) {
            if (c[t] < lo) {
                lo = c[t];
                arg_min = t;
            }
            hi = std::max(hi, c[t]);
        }
        if (hi / std::max(lo, std::numeric_limits<double>::min()) > sigma_threshold) {
            cm.in_jump[k] = 1;
            cm.smallest[k] = static_cast<std::uint8_t>(arg_min);
        }
    }
    return cm;
}

int classify_case14(double a, double b, double c, double d) {
    const double lo = std::min(std::min(a, b), std::min(c, d));
    const double hi = std::max(std::max(a, b), std::max(c, d));
    if (!(hi > lo))
        throw Error(ErrorCode::Param, "classify_case14: coefficients are all equal");
    const double mid = 0.5 * (lo + hi);
    const int pattern = (a > mid ? 8 : 0) | (b > mid ? 4 : 0) | (c > mid ? 2 : 0) | (d > mid ? 1 : 0);
    // bit order A B C D, L = 1
    switch (pattern) {
        case 0b0110: return 1;  // S L L S
        case 0b0101: return 2;  // S L S L
        case 0b1010: return 3;  // L S L S
        case 0b1001: return 4;  // L S S L
        case 0b1100: return 5;  // L L S S
        case 0b0011: return 6;  // S S L L
        case 0b1000: return 7;  // L S S S
        case 0b0010: return 8;  // S S L S
        case 0b0100: return 9;  // S L S S
        case 0b0001: return 10; // S S S L
        case 0b1101: return 11; // L L S L
        case 0b1011: return 12; // L S L L
        case 0b1110: return 13; // L L L S
        case 0b0111: return 14; // S L L L
        default:
            throw Error(ErrorCode::Param, "classify_case14: degenerate large/small pattern");
    }
}

void gslex_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f, CoeffMode mode,
                 const RowRefresher* refresher) {
    for (int j = 0; j < phi.ny; ++j) {
        for (int i = 0; i < phi.nx; ++i) {
            gs_update(phi, coeffs, f, i, j);
            if (mode == CoeffMode::Local && refresher) (*refresher)(i, j);
        }
    }
}

void gsline_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f, CoeffMode mode,
                  const RowRefresher* refresher, double damping) {
    const int nx = phi.nx, ny = phi.ny;
    std::vector<double> lower(nx), diag(nx), upper(nx), rhs(nx);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            lower[i] = (i > 0) ? coeffs.B.at(i, j) : 0.0;
            upper[i] = (i + 1 < nx) ? coeffs.A.at(i, j) : 0.0;
            diag[i] = -(s_eff(coeffs, i, j) + damping);
            double F = f.at(i, j) - damping * phi.at(i, j);
            if (j + 1 < ny) F -= coeffs.C.at(i, j) * phi.at(i, j + 1);
            if (j - 1 >= 0) F -= coeffs.D.at(i, j) * phi.at(i, j - 1);
            rhs[i] = F;
        }
        const std::vector<double> x = solve_tridiagonal(lower, diag, upper, rhs);
        for (int i = 0; i < nx; ++i) phi.at(i, j) = x[i];
        if (mode == CoeffMode::Local && refresher)
            for (int i = 0; i < nx; ++i) (*refresher)(i, j);
    }
}

void newton_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f,
                  const NewtonCurvature* curvature, CoeffMode mode,
                  const RowRefresher* refresher) {
    const int nx = phi.nx, ny = phi.ny;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double nb = 0.0;
            if (i + 1 < nx) nb += coeffs.A.at(i, j) * phi.at(i + 1, j);
            if (i - 1 >= 0) nb += coeffs.B.at(i, j) * phi.at(i - 1, j);
            if (j + 1 < ny) nb += coeffs.C.at(i, j) * phi.at(i, j + 1);
            if (j - 1 >= 0) nb += coeffs.D.at(i, j) * phi.at(i, j - 1);
            const double s = s_eff(coeffs, i, j);
            const double g = s * phi.at(i, j) - nb + f.at(i, j);
            double qp = curvature ? (*curvature)(i, j) : 0.0;
            double denom = s + qp;
            for (int t = 0; t < 64 && std::fabs(denom) < 1e-12; ++t) {
                qp *= 0.5; // damp the curvature term until the guard passes
                denom = s + qp;
            }
            check_divisor(denom);
            phi.at(i, j) -= g / denom;
            if (mode == CoeffMode::Local && refresher) (*refresher)(i, j);
        }
    }
}

namespace {

struct Direction {
    int di, dj;
};

// Coefficient lookup per direction label (A east, B west, C north, D south).
const Direction kDir[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

double coeff_at(const StencilField& K, LagLabel which, int i, int j) {
    switch (which) {
        case LagLabel::A: return K.A.at(i, j);
        case LagLabel::B: return K.B.at(i, j);
        case LagLabel::C: return K.C.at(i, j);
        case LagLabel::D: return K.D.at(i, j);
        default: return 0.0;
    }
}

// Collective update of a jump pixel and its three non-lagged neighbours.
// The block matrix keeps the printed symmetric arrow shape: the centre
// pixel's own couplings sit on the first row and column, each neighbour
// keeps its own diagonal -S, and every coupling leaving the block goes to
// the right-hand side (mirrored onto the diagonal outside the grid).
void arrow_update(Field2D& phi, const StencilField& K, const Field2D& f, int ci, int cj,
                  LagLabel lag) {
    const int nx = phi.nx, ny = phi.ny;

    std::array<std::array<double, 4>, 4> m{};
    std::array<double, 4> b{};
    std::array<int, 4> pi{}, pj{};
    pi[0] = ci;
    pj[0] = cj;
    m[0][0] = -K.S.at(ci, cj);
    b[0] = f.at(ci, cj);

    int rows = 1;
    for (int t = 0; t < 4; ++t) {
        const LagLabel label = static_cast<LagLabel>(t);
        const int niq = ci + kDir[t].di;
        const int njq = cj + kDir[t].dj;
        const double k_centre = coeff_at(K, label, ci, cj);
        const bool inside = niq >= 0 && niq < nx && njq >= 0 && njq < ny;
        if (label == lag) {
            if (inside)
                b[0] -= k_centre * phi.at(niq, njq); // lagged neighbour stays explicit
            else
                m[0][0] += k_centre;
            continue;
        }
        if (!inside) {
            m[0][0] += k_centre;
            continue;
        }
        const int r = rows++;
        pi[r] = niq;
        pj[r] = njq;
        m[0][r] = k_centre;
        m[r][0] = k_centre;
        m[r][r] = -K.S.at(niq, njq);
        b[r] = f.at(niq, njq);
        // the neighbour's own couplings: back to the centre is the matrix
        // entry, everything else leaves the block
        for (int u = 0; u < 4; ++u) {
            const int ti = niq + kDir[u].di;
            const int tj = njq + kDir[u].dj;
            if (ti == ci && tj == cj) continue;
            const double k_n = coeff_at(K, static_cast<LagLabel>(u), niq, njq);
            if (ti >= 0 && ti < nx && tj >= 0 && tj < ny)
                b[r] -= k_n * phi.at(ti, tj);
            else
                m[r][r] += k_n;
        }
    }

    // pad unused rows so the 4x4 arrow solve stays well posed
    for (int r = rows; r < 4; ++r) {
        m[r][r] = -1.0;
        b[r] = 0.0;
    }
    const std::array<double, 4> x = solve_arrow4(m, b);
    for (int r = 0; r < rows; ++r) phi.at(pi[r], pj[r]) = x[r];
}

} // namespace

void hybrid1_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f,
                   const CaseMap& casemap) {
    gsline_sweep(phi, coeffs, f, CoeffMode::Global);
    for (int j = 0; j < phi.ny; ++j)
        for (int i = 0; i < phi.nx; ++i)
            if (casemap.in_jump_set(i, j))
                arrow_update(phi, coeffs, f, i, j, casemap.smallest_at(i, j));
}

std::vector<Superpixel> build_superpixels(const CaseMap& casemap, LagLabel lag) {
    const bool along_j = (lag == LagLabel::A || lag == LagLabel::B);
    const bool forward = (lag == LagLabel::A || lag == LagLabel::C);
    const int n_lines = along_j ? casemap.nx : casemap.ny;
    const int len = along_j ? casemap.ny : casemap.nx;

    std::vector<Superpixel> out;
    std::vector<char> taken(len);
    auto starred = [&](int line, int p) {
        const int i = along_j ? line : p;
        const int j = along_j ? p : line;
        return casemap.in_jump_set(i, j) && casemap.smallest_at(i, j) == lag;
    };

    for (int line = 0; line < n_lines; ++line) {
        std::fill(taken.begin(), taken.end(), 0);
        std::vector<Superpixel> runs;
        for (int p = 0; p < len;) {
            if (!starred(line, p)) {
                ++p;
                continue;
            }
            int e = p;
            while (e + 1 < len && starred(line, e + 1)) ++e;
            runs.push_back({lag, line, p, e});
            for (int t = p; t <= e; ++t) taken[t] = 1;
            p = e + 1;
        }
        // singleton runs pull in the next in-line neighbour along the
        // traversal direction, falling back to the previous one
        for (auto& r : runs) {
            if (r.length() > 1) continue;
            const int next = forward ? r.end + 1 : r.start - 1;
            const int prev = forward ? r.start - 1 : r.end + 1;
            if (next >= 0 && next < len && !taken[next]) {
                taken[next] = 1;
                r.start = std::min(r.start, next);
                r.end = std::max(r.end, next);
            } else if (prev >= 0 && prev < len && !taken[prev]) {
                taken[prev] = 1;
                r.start = std::min(r.start, prev);
                r.end = std::max(r.end, prev);
            }
        }
        out.insert(out.end(), runs.begin(), runs.end());
    }
    return out;
}

namespace {

// Partial line solve over the superpixel's pixels. In-line couplings inside
// the run build the tridiagonal; everything else (including the lagged
// neighbour, untouched so far in this sub-sweep) goes to the right-hand
// side at its current value.
void superpixel_solve(Field2D& phi, const StencilField& K, const Field2D& f,
                      const Superpixel& sp) {
    const bool along_j = (sp.lag == LagLabel::A || sp.lag == LagLabel::B);
    const int n = sp.length();
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    for (int t = 0; t < n; ++t) {
        const int p = sp.start + t;
        const int i = along_j ? sp.line_index : p;
        const int j = along_j ? p : sp.line_index;
        diag[t] = -s_eff(K, i, j);
        double F = f.at(i, j);
        if (along_j) {
            lower[t] = (t > 0) ? K.D.at(i, j) : 0.0;
            upper[t] = (t + 1 < n) ? K.C.at(i, j) : 0.0;
            if (t == 0 && j - 1 >= 0) F -= K.D.at(i, j) * phi.at(i, j - 1);
            if (t == n - 1 && j + 1 < phi.ny) F -= K.C.at(i, j) * phi.at(i, j + 1);
            if (i + 1 < phi.nx) F -= K.A.at(i, j) * phi.at(i + 1, j);
            if (i - 1 >= 0) F -= K.B.at(i, j) * phi.at(i - 1, j);
        } else {
            lower[t] = (t > 0) ? K.B.at(i, j) : 0.0;
            upper[t] = (t + 1 < n) ? K.A.at(i, j) : 0.0;
            if (t == 0 && i - 1 >= 0) F -= K.B.at(i, j) * phi.at(i - 1, j);
            if (t == n - 1 && i + 1 < phi.nx) F -= K.A.at(i, j) * phi.at(i + 1, j);
            if (j + 1 < phi.ny) F -= K.C.at(i, j) * phi.at(i, j + 1);
            if (j - 1 >= 0) F -= K.D.at(i, j) * phi.at(i, j - 1);
        }
        rhs[t] = F;
    }
    const std::vector<double> x = solve_tridiagonal(lower, diag, upper, rhs);
    for (int t = 0; t < n; ++t) {
        const int p = sp.start + t;
        if (along_j)
            phi.at(sp.line_index, p) = x[t];
        else
            phi.at(p, sp.line_index) = x[t];
    }
}

} // namespace

void hybrid2_sweep(Field2D& phi, const StencilField& coeffs, const Field2D& f,
                   const CaseMap& casemap, std::array<size_t, 4>* visit_counts) {
    const int nx = phi.nx, ny = phi.ny;
    std::vector<std::int32_t> sp_of(phi.size());
    std::vector<char> solved;

    for (int lagi = 0; lagi < 4; ++lagi) {
        const LagLabel lag = static_cast<LagLabel>(lagi);
        const std::vector<Superpixel> sps = build_superpixels(casemap, lag);
        std::fill(sp_of.begin(), sp_of.end(), -1);
        solved.assign(sps.size(), 0);
        const bool along_j = (lag == LagLabel::A || lag == LagLabel::B);
        for (size_t s = 0; s < sps.size(); ++s) {
            const auto& sp = sps[s];
            for (int p = sp.start; p <= sp.end; ++p) {
                const size_t k = along_j ? phi.idx(sp.line_index, p) : phi.idx(p, sp.line_index);
                sp_of[k] = static_cast<std::int32_t>(s);
            }
        }

        const SweepOrder order{along_j, lag == LagLabel::A || lag == LagLabel::C};
        size_t visited = 0;
        traverse(nx, ny, order, [&](int i, int j) {
            const std::int32_t s = sp_of[phi.idx(i, j)];
            if (s < 0) {
                gs_update(phi, coeffs, f, i, j);
                ++visited;
            } else if (!solved[s]) {
                superpixel_solve(phi, coeffs, f, sps[s]);
                solved[s] = 1;
                visited += static_cast<size_t>(sps[s].length());
            }
        });
        if (visit_counts) (*visit_counts)[lagi] = visited;
    }
}

} // namespace selseg
