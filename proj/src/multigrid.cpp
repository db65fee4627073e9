#include "multigrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

namespace selseg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

void CycleConfig::validate() const {
    if (gamma < 1) throw Error(ErrorCode::Param, "cycle config: gamma must be >= 1");
    if (nu1 < 0 || nu2 < 0 || nu1 + nu2 < 1)
        throw Error(ErrorCode::Param, "cycle config: nu1 + nu2 must be >= 1");
    if (!(eta > 0.0)) throw Error(ErrorCode::Param, "cycle config: eta must be positive");
    if (max_cycles < 1) throw Error(ErrorCode::Param, "cycle config: max_cycles must be >= 1");
    if (coarse_iters < 0) throw Error(ErrorCode::Param, "cycle config: coarse_iters must be >= 0");
    if (coarsest < 1) throw Error(ErrorCode::Param, "cycle config: coarsest must be >= 1");
    if (!(sigma_jump > 1.0))
        throw Error(ErrorCode::Param, "cycle config: sigma_jump must exceed 1");
}

namespace {

void project_band(Field2D& phi, double bound) {
    if (!std::isfinite(bound)) return;
    for (double& x : phi.v) x = std::clamp(x, -bound, bound);
}

// Residual scaled row-wise by the stencil diagonal, so the norm reflects
// solution-space error instead of being dominated by the stiffest rows.
double scaled_residual_norm(FasProblem& problem, int level, const Field2D& phi,
                            const Field2D& tail) {
    StencilField coeffs(phi.nx, phi.ny);
    Field2D f(phi.nx, phi.ny);
    problem.assemble(level, phi, coeffs, f);
    for (size_t k = 0; k < f.size(); ++k) f.v[k] += tail.v[k];
    const Field2D op = apply_operator(phi, coeffs, f);
    double sum = 0.0;
    for (int j = 0; j < phi.ny; ++j) {
        for (int i = 0; i < phi.nx; ++i) {
            double s = coeffs.S.at(i, j);
            if (i == phi.nx - 1) s -= coeffs.A.at(i, j);
            if (i == 0) s -= coeffs.B.at(i, j);
            if (j == phi.ny - 1) s -= coeffs.C.at(i, j);
            if (j == 0) s -= coeffs.D.at(i, j);
            const double e = op.at(i, j) / (1.0 + s);
            sum += e * e;
        }
    }
    return std::sqrt(sum);
}

} // namespace

void smoother_step(FasProblem& problem, int level, Field2D& phi, const Field2D& tail,
                   SmootherKind kind, double sigma_jump) {
    StencilField coeffs(phi.nx, phi.ny);
    Field2D f(phi.nx, phi.ny);
    problem.assemble(level, phi, coeffs, f);

    Field2D f_tot(phi.nx, phi.ny);
    for (size_t k = 0; k < f.size(); ++k) f_tot.v[k] = f.v[k] + tail.v[k];

    const RowRefresher refresher = [&](int i, int j) {
        problem.refresh_row(level, phi, i, j, coeffs, f);
        f_tot.at(i, j) = f.at(i, j) + tail.at(i, j);
    };

    switch (kind) {
        case SmootherKind::GslexI:
            gslex_sweep(phi, coeffs, f_tot, CoeffMode::Global);
            break;
        case SmootherKind::GslexII:
            gslex_sweep(phi, coeffs, f_tot, CoeffMode::Local, &refresher);
            break;
        case SmootherKind::GslineI:
            gsline_sweep(phi, coeffs, f_tot, CoeffMode::Global);
            break;
        case SmootherKind::GslineII:
            gsline_sweep(phi, coeffs, f_tot, CoeffMode::Local, &refresher);
            break;
        case SmootherKind::NewtI:
        case SmootherKind::NewtII: {
            const NewtonCurvature curvature = [&](int i, int j) {
                return problem.newton_curvature(level, phi, i, j);
            };
            newton_sweep(phi, coeffs, f_tot, &curvature,
                         kind == SmootherKind::NewtII ? CoeffMode::Local : CoeffMode::Global,
                         &refresher);
            break;
        }
        case SmootherKind::Hybrid1: {
            const CaseMap cm = detect_jump_set(coeffs, sigma_jump);
            hybrid1_sweep(phi, coeffs, f_tot, cm);
            break;
        }
        case SmootherKind::Hybrid2: {
            const CaseMap cm = detect_jump_set(coeffs, sigma_jump);
            hybrid2_sweep(phi, coeffs, f_tot, cm);
            break;
        }
    }
    project_band(phi, problem.state_bound());
}

Field2D problem_residual(FasProblem& problem, int level, const Field2D& phi,
                         const Field2D& tail) {
    StencilField coeffs(phi.nx, phi.ny);
    Field2D f(phi.nx, phi.ny);
    problem.assemble(level, phi, coeffs, f);
    for (size_t k = 0; k < f.size(); ++k) f.v[k] += tail.v[k];
    Field2D r = apply_operator(phi, coeffs, f);
    for (double& x : r.v) x = -x;
    return r;
}

void fas_vcycle(FasProblem& problem, int level, Field2D& phi, const Field2D& tail,
                const CycleConfig& config) {
    if (level == problem.num_levels() - 1) {
        coarse_solve(problem, level, phi, tail, config.coarse_iters);
        return;
    }

    for (int s = 0; s < config.nu1; ++s)
        smoother_step(problem, level, phi, tail, config.smoother, config.sigma_jump);

    const Field2D residual = problem_residual(problem, level, phi, tail);
    const Field2D residual_coarse = restrict_full_weighting(residual);
    Field2D phi_coarse = restrict_full_weighting(phi);

    // coarse tail: N(restricted phi) - f(restricted phi) + restricted residual
    Field2D tail_coarse(phi_coarse.nx, phi_coarse.ny);
    {
        StencilField kc(phi_coarse.nx, phi_coarse.ny);
        Field2D fc(phi_coarse.nx, phi_coarse.ny);
        problem.assemble(level + 1, phi_coarse, kc, fc);
        const Field2D op = apply_operator(phi_coarse, kc, fc);
        for (size_t k = 0; k < op.size(); ++k)
            tail_coarse.v[k] = op.v[k] + residual_coarse.v[k];
    }

    const Field2D phi_saved = phi_coarse;
    for (int g = 0; g < config.gamma; ++g)
        fas_vcycle(problem, level + 1, phi_coarse, tail_coarse, config);

    Field2D err_coarse(phi_coarse.nx, phi_coarse.ny);
    for (size_t k = 0; k < err_coarse.size(); ++k)
        err_coarse.v[k] = phi_coarse.v[k] - phi_saved.v[k];
    const Field2D err = interpolate_bilinear(err_coarse);

    // On the finest level of a problem with an objective, the correction
    // step is chosen by the objective after post-smoothing: the levels
    // assemble the nonlinearity independently and full corrections can
    // overshoot, while pure residual norms barely register the large-scale
    // error the coarse grid is supposed to remove. Everywhere else the
    // plain full correction applies.
    const bool search = level == 0 && std::isfinite(problem.objective(phi));
    if (!search) {
        for (size_t k = 0; k < phi.size(); ++k) phi.v[k] += err.v[k];
        project_band(phi, problem.state_bound());
        if (!all_finite(phi))
            throw Error(ErrorCode::Diverged, "fas_vcycle: non-finite coarse-grid correction");
        for (int s = 0; s < config.nu2; ++s)
            smoother_step(problem, level, phi, tail, config.smoother, config.sigma_jump);
        return;
    }

    const Field2D base = phi;
    double best_obj = std::numeric_limits<double>::infinity();
    Field2D best_phi;
    for (double omega : {1.0, 0.5, 0.25, 0.0}) {
        Field2D trial = base;
        for (size_t k = 0; k < trial.size(); ++k) trial.v[k] += omega * err.v[k];
        project_band(trial, problem.state_bound());
        if (!all_finite(trial)) continue;
        for (int s = 0; s < config.nu2; ++s)
            smoother_step(problem, level, trial, tail, config.smoother, config.sigma_jump);
        const double obj = problem.objective(trial);
        if (obj < best_obj) {
            best_obj = obj;
            best_phi = std::move(trial);
        }
    }
    phi = std::move(best_phi);
    if (!all_finite(phi))
        throw Error(ErrorCode::Diverged, "fas_vcycle: non-finite coarse-grid correction");
}

// Pseudo-time shift of the coarsest-level line sweeps. It bounds the
// per-sweep updates where the assembled rows degenerate (the operator's
// scale collapses with growing |phi|, so undamped sweeps overshoot), while
// leaving rows with healthy diagonals essentially untouched.
constexpr double kCoarseDamping = 4.0;

void coarse_solve(FasProblem& problem, int level, Field2D& phi, const Field2D& tail, int iters) {
    StencilField coeffs(phi.nx, phi.ny);
    Field2D f(phi.nx, phi.ny);
    // Trust box around the entry state: rows whose transferred residual is
    // not attainable (degenerate regulariser) park at the box instead of
    // drifting, so the damped iteration stays bounded.
    const Field2D entry = phi;
    const double box = 2.0 * (1.0 + norm_max(entry));
    for (int it = 0; it < iters; ++it) {
        problem.assemble(level, phi, coeffs, f);
        for (size_t k = 0; k < f.size(); ++k) f.v[k] += tail.v[k];
        gsline_sweep(phi, coeffs, f, CoeffMode::Global, nullptr, kCoarseDamping);
        for (size_t k = 0; k < phi.size(); ++k)
            phi.v[k] = std::clamp(phi.v[k], entry.v[k] - box, entry.v[k] + box);
        project_band(phi, problem.state_bound());
        if (!all_finite(phi))
            throw Error(ErrorCode::Diverged, "coarse_solve: non-finite iterate");
    }
}

std::vector<LevelData> restrict_problem(const Field2D& z, const Field2D& d, const Field2D& g,
                                        int num_levels) {
    std::vector<LevelData> out;
    out.push_back({z, d, g});
    for (int l = 1; l < num_levels; ++l) {
        const LevelData& prev = out.back();
        out.push_back({restrict_full_weighting(prev.z), restrict_full_weighting(prev.d),
                       restrict_full_weighting(prev.g)});
    }
    return out;
}

SegmentationProblem::SegmentationProblem(const Field2D& z, const Field2D& d, const Field2D& g,
                                         const GridHierarchy& hierarchy,
                                         const ModelParams& params, ModelKind kind,
                                         double area_a1)
    : params_(params), kind_(kind), area_a1_(area_a1) {
    levels_ = restrict_problem(z, d, g, hierarchy.num_levels());
    diffusivity_.resize(levels_.size());
    area_bracket_.assign(levels_.size(), 0.0);
    for (size_t l = 0; l < levels_.size(); ++l)
        diffusivity_[l] = Field2D(levels_[l].z.nx, levels_[l].z.ny);
}

void SegmentationProblem::set_means(double c1, double c2) {
    c1_ = c1;
    c2_ = c2;
}

int SegmentationProblem::num_levels() const { return static_cast<int>(levels_.size()); }

std::pair<int, int> SegmentationProblem::level_dims(int level) const {
    return {levels_[level].z.nx, levels_[level].z.ny};
}

void SegmentationProblem::assemble(int level, const Field2D& phi, StencilField& coeffs,
                                   Field2D& f) {
    const LevelData& lv = levels_[level];
    diffusivity_[level] = diffusivity(phi, lv.d, lv.g, params_, kind_);
    const double bracket =
        kind_ == ModelKind::RadaChen ? rc_area_bracket(phi, params_, area_a1_) : 0.0;
    area_bracket_[level] = bracket;
    for (int j = 0; j < phi.ny; ++j) {
        for (int i = 0; i < phi.nx; ++i) {
            refresh_coefficient_row(i, j, phi, diffusivity_[level], lv.d, lv.g, params_, kind_,
                                    coeffs);
            f.at(i, j) = rhs_at(i, j, phi, lv.z, lv.d, c1_, c2_, params_, kind_, bracket);
        }
    }
}

void SegmentationProblem::refresh_row(int level, const Field2D& phi, int i, int j,
                                      StencilField& coeffs, Field2D& f) {
    const LevelData& lv = levels_[level];
    refresh_coefficient_row(i, j, phi, diffusivity_[level], lv.d, lv.g, params_, kind_, coeffs);
    f.at(i, j) = rhs_at(i, j, phi, lv.z, lv.d, c1_, c2_, params_, kind_, area_bracket_[level]);
}

double SegmentationProblem::newton_curvature(int level, const Field2D& phi, int i, int j) {
    if (kind_ != ModelKind::RadaChen || params_.nu == 0.0) return 0.0;
    const double p = phi.at(i, j);
    const double de = delta(p, params_.eps_heaviside);
    const double dp = delta_prime(p, params_.eps_heaviside);
    const double cell = phi.hx * phi.hy;
    const double area_dev = area_bracket_[level] / (2.0 * params_.nu);
    return 2.0 * params_.nu * (de * de * cell + dp * area_dev);
}

double SegmentationProblem::state_bound() const {
    // Bounded level-set band matching the +-1 initial profile: the sign
    // carries the segmentation, and a wider band only lets the iterate
    // wander where the stationary equations have no finite root.
    return 1.0 * params_.eps_heaviside;
}

double SegmentationProblem::objective(const Field2D& phi) {
    return energy(phi, levels_[0].z, levels_[0].d, levels_[0].g, c1_, c2_, params_, kind_,
                  area_a1_);
}

namespace {

double relative_change(const Field2D& now, const Field2D& before) {
    double diff = 0.0, base = 0.0;
    for (size_t k = 0; k < now.size(); ++k) {
        const double d = now.v[k] - before.v[k];
        diff += d * d;
        base += before.v[k] * before.v[k];
    }
    if (base < 1e-300) return std::sqrt(diff);
    return std::sqrt(diff / base);
}

} // namespace

SegmentResult segment(const Field2D& z, const MarkerSet& markers, const ModelParams& params,
                      ModelKind kind, const CycleConfig& config) {
    params.validate();
    config.validate();
    markers.validate(z.nx, z.ny);

    const auto t_start = Clock::now();
    const GridHierarchy hierarchy = build_hierarchy(z.nx, z.ny, config.coarsest);

    SegmentResult result;
    SolveStats& stats = result.stats;

    const Field2D d = distance_map(markers, params.sigma, z.nx, z.ny);
    const Field2D g = edge_detector(z, params.beta);
    const double a1 = polygon_area(markers, z.hx, z.hy);
    Field2D phi = initial_phi(markers, z.nx, z.ny);
    SegmentationProblem problem(z, d, g, hierarchy, params, kind, a1);

    auto means = region_means(z, phi, params.eps_heaviside);
    stats.wall_time_setup = seconds_since(t_start);

    const auto t_solve = Clock::now();
    if (std::fabs(means.first - means.second) < 1e-14) {
        // no contrast: the fitting force vanishes identically
        stats.degenerate_contrast = true;
        stats.converged = true;
    } else {
        const Field2D tail(z.nx, z.ny, 0.0);
        for (int cycle = 1; cycle <= config.max_cycles; ++cycle) {
            const Field2D phi_before = phi;
            problem.set_means(means.first, means.second);
            fas_vcycle(problem, 0, phi, tail, config);
            if (!all_finite(phi))
                throw Error(ErrorCode::Diverged, "segment: solution became non-finite");

            means = region_means(z, phi, params.eps_heaviside);
            stats.cycles_run = cycle;
            stats.energy_per_cycle.push_back(
                energy(phi, z, d, g, means.first, means.second, params, kind, a1));
            const double rel = relative_change(phi, phi_before);
            stats.rel_change_per_cycle.push_back(rel);
            problem.set_means(means.first, means.second);
            stats.residual_norm_per_cycle.push_back(
                norm_l2(problem_residual(problem, 0, phi, tail)));
            if (rel < config.eta) {
                stats.converged = true;
                break;
            }
        }
    }
    stats.wall_time_solve = seconds_since(t_solve);
    stats.wall_time_total = seconds_since(t_start);

    result.mask.resize(phi.size());
    for (size_t k = 0; k < phi.size(); ++k) result.mask[k] = phi.v[k] > 0.0 ? 255 : 0;
    result.phi = std::move(phi);
    return result;
}

TuneResult tune_smoothing(const Field2D& z, const MarkerSet& markers, const ModelParams& params,
                          ModelKind kind, const CycleConfig& config, int nu_min, int nu_max) {
    if (nu_min < 1)
        throw Error(ErrorCode::Param, "tune_smoothing: nu range must start at 1 (nu1 + nu2 >= 1)");
    if (nu_max < nu_min) throw Error(ErrorCode::Param, "tune_smoothing: empty nu range");

    TuneResult out;
    for (int nu = nu_min; nu <= nu_max; ++nu) {
        CycleConfig c = config;
        c.nu1 = nu;
        c.nu2 = nu;
        const SegmentResult r = segment(z, markers, params, kind, c);
        out.rows.emplace_back(nu, r.stats.cycles_run);
    }
    out.recommended_nu = out.rows.back().first;
    for (size_t k = 0; k + 1 < out.rows.size(); ++k) {
        if (out.rows[k + 1].second >= out.rows[k].second) {
            out.recommended_nu = out.rows[k].first;
            break;
        }
    }
    return out;
}

double dice_score(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::Dimension, "dice_score: size mismatch");
    size_t na = 0, nb = 0, both = 0;
    for (size_t k = 0; k < a.size(); ++k) {
        const bool xa = a[k] != 0, xb = b[k] != 0;
        na += xa;
        nb += xb;
        both += xa && xb;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

} // namespace selseg
