#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "lfa.hpp"
#include "smoothers.hpp"

namespace selseg {

struct CycleConfig {
    int gamma = 1;              // cycle shape, 1 = V-cycle
    int nu1 = 3;                // pre-smoothing steps
    int nu2 = 3;                // post-smoothing steps
    int coarsest = 32;          // coarsest grid size
    int coarse_iters = 100;     // line sweeps of the coarsest-level solver
    SmootherKind smoother = SmootherKind::Hybrid2;
    double eta = 1e-4;          // relative-change stopping tolerance
    int max_cycles = 50;
    double sigma_jump = 1.5;    // jump-set detection threshold

    void validate() const;
};

struct SolveStats {
    int cycles_run = 0;
    std::vector<double> energy_per_cycle;
    std::vector<double> rel_change_per_cycle;
    std::vector<double> residual_norm_per_cycle;
    double wall_time_setup = 0.0;
    double wall_time_solve = 0.0;
    double wall_time_total = 0.0;
    bool converged = false;
    bool degenerate_contrast = false; // the image had no usable contrast
};

/// Supplies the per-level nonlinear operator pieces for the cycle: stencil
/// coefficients and the forcing (without the coarse-grid tail).
class FasProblem {
public:
    virtual ~FasProblem() = default;
    virtual int num_levels() const = 0;
    virtual std::pair<int, int> level_dims(int level) const = 0;
    virtual void assemble(int level, const Field2D& phi, StencilField& coeffs,
                          Field2D& f) = 0;
    /// Per-pixel coefficient/forcing refresh for the local (-II) smoothers.
    virtual void refresh_row(int level, const Field2D& phi, int i, int j, StencilField& coeffs,
                             Field2D& f) {
        (void)level;
        (void)phi;
        (void)i;
        (void)j;
        (void)coeffs;
        (void)f;
    }
    /// Newton curvature Q' at a pixel, relative to the last assembly.
    virtual double newton_curvature(int level, const Field2D& phi, int i, int j) {
        (void)level;
        (void)phi;
        (void)i;
        (void)j;
        return 0.0;
    }
    /// Band the iterate is projected into between sweeps. Where the
    /// weighted regulariser vanishes the stationary equations push |phi|
    /// without bound (the saturated Heaviside no longer distinguishes
    /// values); infinity disables the projection.
    virtual double state_bound() const { return std::numeric_limits<double>::infinity(); }
    /// Objective the finest level descends (NaN when there is none). Used
    /// to pick the coarse-grid correction step on the finest level.
    virtual double objective(const Field2D& phi) {
        (void)phi;
        return std::numeric_limits<double>::quiet_NaN();
    }
};

/// One smoothing step: assemble from the current phi, then run one sweep of
/// the requested smoother against forcing + tail.
void smoother_step(FasProblem& problem, int level, Field2D& phi, const Field2D& tail,
                   SmootherKind kind, double sigma_jump);

/// tail - (N(phi) - f), assembled at the current phi.
Field2D problem_residual(FasProblem& problem, int level, const Field2D& phi, const Field2D& tail);

/// Full Approximation Scheme cycle from `level` downwards; a single level
/// reduces to the coarsest-level solve.
void fas_vcycle(FasProblem& problem, int level, Field2D& phi, const Field2D& tail,
                const CycleConfig& config);

/// Coarsest-level solver: `iters` line sweeps with coefficients refreshed
/// every sweep, plus a divergence watchdog on the residual norm.
void coarse_solve(FasProblem& problem, int level, Field2D& phi, const Field2D& tail, int iters);

/// z, d, g restricted once per level by full weighting.
struct LevelData {
    Field2D z, d, g;
};
std::vector<LevelData> restrict_problem(const Field2D& z, const Field2D& d, const Field2D& g,
                                        int num_levels);

/// Segmentation-model problem over a grid hierarchy; the intensity means
/// stay fixed within a cycle and are updated by the outer loop.
class SegmentationProblem : public FasProblem {
public:
    SegmentationProblem(const Field2D& z, const Field2D& d, const Field2D& g,
                        const GridHierarchy& hierarchy, const ModelParams& params, ModelKind kind,
                        double area_a1);

    void set_means(double c1, double c2);
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    const LevelData& level(int l) const { return levels_[l]; }

    int num_levels() const override;
    std::pair<int, int> level_dims(int level) const override;
    void assemble(int level, const Field2D& phi, StencilField& coeffs, Field2D& f) override;
    void refresh_row(int level, const Field2D& phi, int i, int j, StencilField& coeffs,
                     Field2D& f) override;
    double newton_curvature(int level, const Field2D& phi, int i, int j) override;
    double state_bound() const override;
    double objective(const Field2D& phi) override;

private:
    std::vector<LevelData> levels_;
    std::vector<Field2D> diffusivity_;   // last assembled G per level
    std::vector<double> area_bracket_;   // last assembled forcing bracket per level
    ModelParams params_;
    ModelKind kind_;
    double area_a1_;
    double c1_ = 0.0, c2_ = 0.0;
};

struct SegmentResult {
    Field2D phi;
    std::vector<std::uint8_t> mask; // 0 / 255, same layout as phi
    SolveStats stats;
};

/// Full solve: initialise phi from the marker polygon, cycle until the
/// relative change drops below eta, update the intensity means once per
/// cycle, and record per-cycle statistics.
SegmentResult segment(const Field2D& z, const MarkerSet& markers, const ModelParams& params,
                      ModelKind kind, const CycleConfig& config);

struct TuneResult {
    std::vector<std::pair<int, int>> rows; // (nu, cycles to converge)
    int recommended_nu = 0;                // first plateau of the cycle count
};

/// Runs segment for each nu1 = nu2 = nu in [nu_min, nu_max].
TuneResult tune_smoothing(const Field2D& z, const MarkerSet& markers, const ModelParams& params,
                          ModelKind kind, const CycleConfig& config, int nu_min, int nu_max);

/// Overlap score 2|X n Y| / (|X| + |Y|) between 0/255 masks.
double dice_score(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

} // namespace selseg
