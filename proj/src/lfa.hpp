#pragma once

#include <array>
#include <vector>

#include "smoothers.hpp"

namespace selseg {

/// Sample set over the high-frequency range of [-pi, pi)^2. `uniform`
/// places q points per axis plus the exact values {0, +-pi/2, -pi} and
/// keeps everything outside the half-open box [-pi/2, pi/2)^2. The
/// `image_lattice` variant uses the discrete modes 2 pi theta / n of an
/// n x n grid and drops the closed box |alpha| <= pi/2 on both axes,
/// which is how published per-pixel rate tables are evaluated.
struct FrequencyGrid {
    int q = 0;
    std::vector<double> a1, a2;       // sample coordinates
    std::vector<double> c1, s1, c2, s2; // their cosines/sines

    static FrequencyGrid uniform(int q);
    static FrequencyGrid image_lattice(int n);

    size_t size() const { return a1.size(); }
};

struct AmpResult {
    double value = 0.0;   // max modulus ratio over the grid
    double arg1 = 0.0;    // maximiser
    double arg2 = 0.0;
    int skipped = 0;      // samples dropped for a vanishing denominator

    operator double() const { return value; }
};

/// Lagged-coefficient amplification: lagged terms form the numerator with
/// phases e^{+i a1}, e^{-i a1}, e^{+i a2}, e^{-i a2} for A, B, C, D; the
/// others are subtracted from S in the denominator. `lagged` must be a
/// non-empty proper subset (bit t set = label t lagged, order A,B,C,D).
AmpResult amp_adapted(double A, double B, double C, double D, double S, unsigned lagged,
                      const FrequencyGrid& freq);

/// Pointwise lexicographic rate (east and north neighbours old):
/// max |A e^{i a1} + C e^{i a2}| / |B e^{-i a1} + D e^{-i a2} - S|.
AmpResult amp_lex(double A, double B, double C, double D, double S, const FrequencyGrid& freq);

/// Line-relaxation rate (only the north neighbour old):
/// max |C e^{i a2}| / |A e^{i a1} + B e^{-i a1} + D e^{-i a2} - S|.
AmpResult amp_line(double A, double B, double C, double D, double S, const FrequencyGrid& freq);

struct WorstPixel {
    int i = 0, j = 0;
    double mu = 0.0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

struct LfaReport {
    double mu_max = 0.0, mu_avg = 0.0;
    double mu_max_D = 0.0, mu_avg_D = 0.0;
    double mu_max_notD = 0.0, mu_avg_notD = 0.0;
    size_t count_D = 0;
    std::vector<WorstPixel> worst; // 10 largest rates, descending
    Field2D rate_map;
    int singular_samples = 0;
    bool flagged = false; // any samples skipped
};

/// Per-pixel rates for the given smoother over an assembled coefficient
/// field. Hybrid kinds use the lag-smallest adapted rate on jump pixels and
/// the line (Hybrid 1) or lexicographic (Hybrid 2) rate elsewhere.
LfaReport rate_report(const StencilField& coeffs, SmootherKind kind, const CaseMap& casemap,
                      const FrequencyGrid& freq);

} // namespace selseg
