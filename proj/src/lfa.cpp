#include "lfa.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <unordered_map>

namespace selseg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 0.5 * kPi;

bool in_low_box_half_open(double x, double y) {
    return x >= -kHalfPi && x < kHalfPi && y >= -kHalfPi && y < kHalfPi;
}

} // namespace

FrequencyGrid FrequencyGrid::uniform(int q) {
    if (q < 16) throw Error(ErrorCode::Param, "FrequencyGrid: need at least 16 samples per axis");
    std::set<double> axis;
    for (int k = 0; k < q; ++k) axis.insert(-kPi + 2.0 * kPi * k / q);
    axis.insert(-kPi);
    axis.insert(-kHalfPi);
    axis.insert(0.0);
    axis.insert(kHalfPi);

    FrequencyGrid g;
    g.q = q;
    for (double x : axis) {
        for (double y : axis) {
            if (in_low_box_half_open(x, y)) continue;
            g.a1.push_back(x);
            g.a2.push_back(y);
        }
    }
    g.c1.resize(g.a1.size());
    g.s1.resize(g.a1.size());
    g.c2.resize(g.a1.size());
    g.s2.resize(g.a1.size());
    for (size_t k = 0; k < g.a1.size(); ++k) {
        g.c1[k] = std::cos(g.a1[k]);
        g.s1[k] = std::sin(g.a1[k]);
        g.c2[k] = std::cos(g.a2[k]);
        g.s2[k] = std::sin(g.a2[k]);
    }
    return g;
}

FrequencyGrid FrequencyGrid::image_lattice(int n) {
    if (n < 4 || n % 2 != 0)
        throw Error(ErrorCode::Param, "FrequencyGrid: image lattice needs an even size >= 4");
    FrequencyGrid g;
    g.q = n;
    const double tol = 1e-12;
    for (int t1 = -n / 2; t1 <= n / 2; ++t1) {
        const double x = 2.0 * kPi * t1 / n;
        for (int t2 = -n / 2; t2 <= n / 2; ++t2) {
            const double y = 2.0 * kPi * t2 / n;
            if (std::fabs(x) <= kHalfPi + tol && std::fabs(y) <= kHalfPi + tol) continue;
            g.a1.push_back(x);
            g.a2.push_back(y);
        }
    }
    g.c1.resize(g.a1.size());
    g.s1.resize(g.a1.size());
    g.c2.resize(g.a1.size());
    g.s2.resize(g.a1.size());
    for (size_t k = 0; k < g.a1.size(); ++k) {
        g.c1[k] = std::cos(g.a1[k]);
        g.s1[k] = std::sin(g.a1[k]);
        g.c2[k] = std::cos(g.a2[k]);
        g.s2[k] = std::sin(g.a2[k]);
    }
    return g;
}

AmpResult amp_adapted(double A, double B, double C, double D, double S, unsigned lagged,
                      const FrequencyGrid& freq) {
    if (lagged == 0 || lagged >= 0xF)
        throw Error(ErrorCode::Param, "amp_adapted: lagged set must be a non-empty proper subset");
    if (!(S > 0.0)) throw Error(ErrorCode::Param, "amp_adapted: S must be positive");

    const double k[4] = {A, B, C, D};
    double num_coef[4] = {0, 0, 0, 0};
    double den_coef[4] = {0, 0, 0, 0};
    for (int t = 0; t < 4; ++t) {
        if (lagged & (1u << t))
            num_coef[t] = k[t];
        else
            den_coef[t] = k[t];
    }

    AmpResult best;
    double best_sq = -1.0;
    const double den_guard_sq = (1e-14 * S) * (1e-14 * S);
    for (size_t p = 0; p < freq.size(); ++p) {
        // phases: A -> e^{+i a1}, B -> e^{-i a1}, C -> e^{+i a2}, D -> e^{-i a2}
        const double nr = num_coef[0] * freq.c1[p] + num_coef[1] * freq.c1[p] +
                          num_coef[2] * freq.c2[p] + num_coef[3] * freq.c2[p];
        const double ni = num_coef[0] * freq.s1[p] - num_coef[1] * freq.s1[p] +
                          num_coef[2] * freq.s2[p] - num_coef[3] * freq.s2[p];
        const double dr = S - (den_coef[0] * freq.c1[p] + den_coef[1] * freq.c1[p] +
                               den_coef[2] * freq.c2[p] + den_coef[3] * freq.c2[p]);
        const double di = -(den_coef[0] * freq.s1[p] - den_coef[1] * freq.s1[p] +
                            den_coef[2] * freq.s2[p] - den_coef[3] * freq.s2[p]);
        const double den_sq = dr * dr + di * di;
        if (den_sq < den_guard_sq) {
            ++best.skipped;
            continue;
        }
        const double r_sq = (nr * nr + ni * ni) / den_sq;
        if (r_sq > best_sq) {
            best_sq = r_sq;
            best.arg1 = freq.a1[p];
            best.arg2 = freq.a2[p];
        }
    }
    best.value = best_sq > 0.0 ? std::sqrt(best_sq) : 0.0;
    return best;
}

AmpResult amp_lex(double A, double B, double C, double D, double S, const FrequencyGrid& freq) {
    return amp_adapted(A, B, C, D, S, 0b0101u, freq); // A and C lagged
}

AmpResult amp_line(double A, double B, double C, double D, double S, const FrequencyGrid& freq) {
    return amp_adapted(A, B, C, D, S, 0b0100u, freq); // C lagged
}

namespace {

struct RateKey {
    double a, b, c, d;
    unsigned lag;
    bool operator==(const RateKey& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d && lag == o.lag;
    }
};

struct RateKeyHash {
    size_t operator()(const RateKey& k) const {
        auto mix = [](size_t h, double x) {
            size_t bits;
            static_assert(sizeof(bits) == sizeof(x));
            std::memcpy(&bits, &x, sizeof(bits));
            return h * 1099511628211ull ^ bits;
        };
        size_t h = 14695981039346656037ull;
        h = mix(h, k.a);
        h = mix(h, k.b);
        h = mix(h, k.c);
        h = mix(h, k.d);
        return h * 1099511628211ull ^ k.lag;
    }
};

unsigned lag_bit(LagLabel l) { return 1u << static_cast<unsigned>(l); }

} // namespace

LfaReport rate_report(const StencilField& coeffs, SmootherKind kind, const CaseMap& casemap,
                      const FrequencyGrid& freq) {
    const int nx = coeffs.nx(), ny = coeffs.ny();
    LfaReport rep;
    rep.rate_map = Field2D(nx, ny);

    // The ratio is scale invariant, so normalise by S and memoise; assembled
    // fields repeat coefficient rows heavily.
    std::unordered_map<RateKey, double, RateKeyHash> cache;

    double sum = 0.0, sum_d = 0.0, sum_nd = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double a = coeffs.A.at(i, j), b = coeffs.B.at(i, j);
            const double c = coeffs.C.at(i, j), d = coeffs.D.at(i, j);
            const double s = coeffs.S.at(i, j);
            const bool in_d = casemap.in_jump_set(i, j);

            unsigned lag;
            switch (kind) {
                case SmootherKind::GslineI:
                case SmootherKind::GslineII:
                    lag = 0b0100u;
                    break;
                case SmootherKind::Hybrid1:
                    lag = in_d ? lag_bit(casemap.smallest_at(i, j)) : 0b0100u;
                    break;
                case SmootherKind::Hybrid2:
                    lag = in_d ? lag_bit(casemap.smallest_at(i, j)) : 0b0101u;
                    break;
                default: // pointwise kinds share the lexicographic rate
                    lag = 0b0101u;
                    break;
            }

            double mu;
            if (!(s > 0.0)) {
                mu = 0.0; // fully degenerate row relaxes nothing
            } else {
                const RateKey key{a / s, b / s, c / s, d / s, lag};
                auto it = cache.find(key);
                if (it != cache.end()) {
                    mu = it->second;
                } else {
                    const AmpResult r = amp_adapted(key.a, key.b, key.c, key.d, 1.0, lag, freq);
                    rep.singular_samples += r.skipped;
                    mu = r.value;
                    cache.emplace(key, mu);
                }
            }

            rep.rate_map.at(i, j) = mu;
            sum += mu;
            rep.mu_max = std::max(rep.mu_max, mu);
            if (in_d) {
                ++rep.count_D;
                sum_d += mu;
                rep.mu_max_D = std::max(rep.mu_max_D, mu);
            } else {
                sum_nd += mu;
                rep.mu_max_notD = std::max(rep.mu_max_notD, mu);
            }
        }
    }

    const size_t total = static_cast<size_t>(nx) * ny;
    rep.mu_avg = sum / static_cast<double>(total);
    if (rep.count_D > 0) rep.mu_avg_D = sum_d / static_cast<double>(rep.count_D);
    if (total > rep.count_D)
        rep.mu_avg_notD = sum_nd / static_cast<double>(total - rep.count_D);
    rep.flagged = rep.singular_samples > 0;

    std::vector<size_t> order(total);
    for (size_t k = 0; k < total; ++k) order[k] = k;
    const size_t keep = std::min<size_t>(10, total);
    std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](size_t x, size_t y) {
        return rep.rate_map.v[x] > rep.rate_map.v[y];
    });
    for (size_t t = 0; t < keep; ++t) {
        const size_t k = order[t];
        const int i = static_cast<int>(k % nx);
        const int j = static_cast<int>(k / nx);
        rep.worst.push_back({i, j, rep.rate_map.v[k], coeffs.A.v[k], coeffs.B.v[k],
                             coeffs.C.v[k], coeffs.D.v[k]});
    }
    return rep;
}

} // namespace selseg
