#include "selseg/selseg.h"

#include <cstring>
#include <string>

#include "multigrid.hpp"
#include "pgm.hpp"
#include "textio.hpp"

using namespace selseg;

struct selseg_image {
    Field2D field;
};

struct selseg_markers {
    MarkerSet set;
};

struct selseg_result {
    SegmentResult r;
};

struct selseg_lfa_report {
    LfaReport rep;
};

namespace {

thread_local std::string g_last_error;

selseg_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::Param: return SELSEG_ERR_PARAM;
        case ErrorCode::Dimension: return SELSEG_ERR_DIMENSION;
        case ErrorCode::Format: return SELSEG_ERR_FORMAT;
        case ErrorCode::Io: return SELSEG_ERR_IO;
        case ErrorCode::Numeric: return SELSEG_ERR_NUMERIC;
        case ErrorCode::Singular: return SELSEG_ERR_SINGULAR;
        case ErrorCode::Degenerate: return SELSEG_ERR_DEGENERATE;
        case ErrorCode::Diverged: return SELSEG_ERR_DIVERGED;
    }
    return SELSEG_ERR_UNKNOWN;
}

template <typename Fn>
selseg_status guarded(Fn&& fn) {
    try {
        fn();
        return SELSEG_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SELSEG_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return SELSEG_ERR_UNKNOWN;
    }
}

selseg_status invalid(const char* msg) {
    g_last_error = msg;
    return SELSEG_ERR_PARAM;
}

ModelKind to_model(selseg_model m) {
    return m == SELSEG_MODEL_SPENCER_CHEN ? ModelKind::SpencerChen : ModelKind::RadaChen;
}

SmootherKind to_smoother(selseg_smoother s) {
    switch (s) {
        case SELSEG_SMOOTHER_GSLEX1: return SmootherKind::GslexI;
        case SELSEG_SMOOTHER_GSLEX2: return SmootherKind::GslexII;
        case SELSEG_SMOOTHER_GSLINE1: return SmootherKind::GslineI;
        case SELSEG_SMOOTHER_GSLINE2: return SmootherKind::GslineII;
        case SELSEG_SMOOTHER_NEWT1: return SmootherKind::NewtI;
        case SELSEG_SMOOTHER_NEWT2: return SmootherKind::NewtII;
        case SELSEG_SMOOTHER_HYBRID1: return SmootherKind::Hybrid1;
        case SELSEG_SMOOTHER_HYBRID2: return SmootherKind::Hybrid2;
    }
    throw Error(ErrorCode::Param, "unknown smoother id");
}

ModelParams to_params(const selseg_params& p) {
    ModelParams mp;
    mp.mu = p.mu;
    mp.lambda1 = p.lambda1;
    mp.lambda2 = p.lambda2;
    mp.nu = p.nu;
    mp.theta = p.theta;
    mp.beta = p.beta;
    mp.sigma = p.sigma;
    mp.eps_heaviside = p.eps_heaviside;
    mp.eps_grad = p.eps_grad;
    return mp;
}

CycleConfig to_config(const selseg_solve_config& c) {
    CycleConfig cc;
    cc.smoother = to_smoother(c.smoother);
    cc.gamma = c.gamma;
    cc.nu1 = c.nu1;
    cc.nu2 = c.nu2;
    cc.coarsest = c.coarsest;
    cc.coarse_iters = c.coarse_iters;
    cc.max_cycles = c.max_cycles;
    cc.eta = c.eta;
    cc.sigma_jump = c.sigma_jump;
    return cc;
}

} // namespace

extern "C" {

void selseg_params_init(selseg_params* params) {
    if (!params) return;
    const ModelParams d;
    params->model = SELSEG_MODEL_RADA_CHEN;
    params->mu = d.mu;
    params->lambda1 = d.lambda1;
    params->lambda2 = d.lambda2;
    params->nu = d.nu;
    params->theta = d.theta;
    params->beta = d.beta;
    params->sigma = d.sigma;
    params->eps_heaviside = d.eps_heaviside;
    params->eps_grad = d.eps_grad;
}

void selseg_solve_config_init(selseg_solve_config* config) {
    if (!config) return;
    const CycleConfig d;
    config->smoother = SELSEG_SMOOTHER_HYBRID2;
    config->gamma = d.gamma;
    config->nu1 = d.nu1;
    config->nu2 = d.nu2;
    config->coarsest = d.coarsest;
    config->coarse_iters = d.coarse_iters;
    config->max_cycles = d.max_cycles;
    config->eta = d.eta;
    config->sigma_jump = d.sigma_jump;
}

const char* selseg_status_message(selseg_status status) {
    switch (status) {
        case SELSEG_OK: return "ok";
        case SELSEG_ERR_PARAM: return "invalid parameter";
        case SELSEG_ERR_DIMENSION: return "incompatible dimensions";
        case SELSEG_ERR_FORMAT: return "malformed input";
        case SELSEG_ERR_IO: return "i/o failure";
        case SELSEG_ERR_NUMERIC: return "numeric failure";
        case SELSEG_ERR_SINGULAR: return "singular system";
        case SELSEG_ERR_DEGENERATE: return "degenerate region";
        case SELSEG_ERR_DIVERGED: return "iteration diverged";
        case SELSEG_ERR_UNKNOWN: break;
    }
    return "unknown failure";
}

const char* selseg_last_error(void) { return g_last_error.c_str(); }

selseg_status selseg_image_load_pgm(const char* path, selseg_image** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new selseg_image{load_pgm(path)}; });
}

selseg_status selseg_image_create(int width, int height, const double* values,
                                  selseg_image** out) {
    if (!out || !values) return invalid("null argument");
    return guarded([&] {
        Field2D f(width, height);
        std::memcpy(f.v.data(), values, f.size() * sizeof(double));
        *out = new selseg_image{std::move(f)};
    });
}

void selseg_image_free(selseg_image* image) { delete image; }

int selseg_image_width(const selseg_image* image) { return image ? image->field.nx : 0; }
int selseg_image_height(const selseg_image* image) { return image ? image->field.ny : 0; }
const double* selseg_image_data(const selseg_image* image) {
    return image ? image->field.v.data() : nullptr;
}

selseg_status selseg_image_write_pgm(const selseg_image* image, const char* path, int maxval) {
    if (!image || !path) return invalid("null argument");
    return guarded([&] { write_pgm(image->field, path, maxval); });
}

selseg_status selseg_image_resize(const selseg_image* image, int width, int height,
                                  selseg_image** out) {
    if (!image || !out) return invalid("null argument");
    return guarded([&] { *out = new selseg_image{resize_bilinear(image->field, width, height)}; });
}

selseg_status selseg_image_crop(const selseg_image* image, int width, int height,
                                selseg_image** out) {
    if (!image || !out) return invalid("null argument");
    return guarded([&] { *out = new selseg_image{crop_centered(image->field, width, height)}; });
}

selseg_status selseg_compatible_crop(int width, int height, int coarsest, int* out_width,
                                     int* out_height) {
    if (!out_width || !out_height) return invalid("null argument");
    return guarded([&] {
        const auto [w, h] = largest_compatible_crop(width, height, coarsest);
        if (w == 0)
            throw Error(ErrorCode::Dimension, "no compatible crop exists for this size");
        *out_width = w;
        *out_height = h;
    });
}

selseg_status selseg_markers_load(const char* path, selseg_markers** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new selseg_markers{load_markers(path)}; });
}

selseg_status selseg_markers_create(const double* xy, int count, selseg_markers** out) {
    if (!xy || !out) return invalid("null argument");
    return guarded([&] {
        MarkerSet set;
        for (int k = 0; k < count; ++k) set.points.emplace_back(xy[2 * k], xy[2 * k + 1]);
        set.validate();
        *out = new selseg_markers{std::move(set)};
    });
}

void selseg_markers_free(selseg_markers* markers) { delete markers; }

int selseg_markers_count(const selseg_markers* markers) {
    return markers ? static_cast<int>(markers->set.size()) : 0;
}

selseg_status selseg_markers_get(const selseg_markers* markers, int index, double* x, double* y) {
    if (!markers || !x || !y) return invalid("null argument");
    if (index < 0 || index >= static_cast<int>(markers->set.size()))
        return invalid("marker index out of range");
    *x = markers->set.points[index].first;
    *y = markers->set.points[index].second;
    return SELSEG_OK;
}

selseg_status selseg_segment(const selseg_image* image, const selseg_markers* markers,
                             const selseg_params* params, const selseg_solve_config* config,
                             selseg_result** out) {
    if (!image || !markers || !params || !config || !out) return invalid("null argument");
    return guarded([&] {
        *out = new selseg_result{segment(image->field, markers->set, to_params(*params),
                                         to_model(params->model), to_config(*config))};
    });
}

int selseg_result_cycles(const selseg_result* result) {
    return result ? result->r.stats.cycles_run : 0;
}
int selseg_result_converged(const selseg_result* result) {
    return result && result->r.stats.converged ? 1 : 0;
}
double selseg_result_wall_time(const selseg_result* result) {
    return result ? result->r.stats.wall_time_total : 0.0;
}
double selseg_result_solve_time(const selseg_result* result) {
    return result ? result->r.stats.wall_time_solve : 0.0;
}
const double* selseg_result_energy_history(const selseg_result* result, int* length) {
    if (!result) return nullptr;
    if (length) *length = static_cast<int>(result->r.stats.energy_per_cycle.size());
    return result->r.stats.energy_per_cycle.data();
}
const double* selseg_result_rel_change_history(const selseg_result* result, int* length) {
    if (!result) return nullptr;
    if (length) *length = static_cast<int>(result->r.stats.rel_change_per_cycle.size());
    return result->r.stats.rel_change_per_cycle.data();
}
const double* selseg_result_phi(const selseg_result* result) {
    return result ? result->r.phi.v.data() : nullptr;
}
const unsigned char* selseg_result_mask(const selseg_result* result) {
    return result ? result->r.mask.data() : nullptr;
}

selseg_status selseg_result_write_mask(const selseg_result* result, const char* path) {
    if (!result || !path) return invalid("null argument");
    return guarded(
        [&] { write_mask_pgm(result->r.mask, result->r.phi.nx, result->r.phi.ny, path); });
}

selseg_status selseg_result_write_overlay(const selseg_result* result, const char* path) {
    if (!result || !path) return invalid("null argument");
    return guarded([&] {
        write_mask_pgm(zero_level_overlay(result->r.phi), result->r.phi.nx, result->r.phi.ny,
                       path);
    });
}

selseg_status selseg_result_write_report(const selseg_result* result, const char* path) {
    if (!result || !path) return invalid("null argument");
    return guarded([&] { write_text_file(path, format_solve_report(result->r.stats)); });
}

void selseg_result_free(selseg_result* result) { delete result; }

selseg_status selseg_lfa_analyze(const selseg_image* image, const selseg_markers* markers,
                                 const selseg_params* params,
                                 const selseg_solve_config* config, int q, const double* phi,
                                 selseg_lfa_report** out) {
    if (!image || !markers || !params || !config || !out) return invalid("null argument");
    return guarded([&] {
        const Field2D& z = image->field;
        const ModelParams mp = to_params(*params);
        mp.validate();
        markers->set.validate(z.nx, z.ny);
        Field2D phi_field(z.nx, z.ny);
        if (phi)
            std::memcpy(phi_field.v.data(), phi, phi_field.size() * sizeof(double));
        else
            phi_field = initial_phi(markers->set, z.nx, z.ny);
        const Field2D d = distance_map(markers->set, mp.sigma, z.nx, z.ny);
        const Field2D g = edge_detector(z, mp.beta);
        const StencilField coeffs =
            assemble_coefficients(phi_field, d, g, mp, to_model(params->model));
        const CaseMap cm = detect_jump_set(coeffs, config->sigma_jump);
        const FrequencyGrid freq = FrequencyGrid::uniform(q);
        *out = new selseg_lfa_report{
            rate_report(coeffs, to_smoother(config->smoother), cm, freq)};
    });
}

double selseg_lfa_mu_max(const selseg_lfa_report* report) { return report ? report->rep.mu_max : 0; }
double selseg_lfa_mu_avg(const selseg_lfa_report* report) { return report ? report->rep.mu_avg : 0; }
double selseg_lfa_mu_max_jump(const selseg_lfa_report* report) {
    return report ? report->rep.mu_max_D : 0;
}
double selseg_lfa_mu_avg_jump(const selseg_lfa_report* report) {
    return report ? report->rep.mu_avg_D : 0;
}
double selseg_lfa_mu_max_smooth(const selseg_lfa_report* report) {
    return report ? report->rep.mu_max_notD : 0;
}
double selseg_lfa_mu_avg_smooth(const selseg_lfa_report* report) {
    return report ? report->rep.mu_avg_notD : 0;
}

int selseg_lfa_worst_count(const selseg_lfa_report* report) {
    return report ? static_cast<int>(report->rep.worst.size()) : 0;
}

selseg_status selseg_lfa_worst_row(const selseg_lfa_report* report, int index, int* i, int* j,
                                   double* mu, double abcd[4]) {
    if (!report) return invalid("null argument");
    if (index < 0 || index >= static_cast<int>(report->rep.worst.size()))
        return invalid("worst-pixel index out of range");
    const WorstPixel& w = report->rep.worst[index];
    if (i) *i = w.i;
    if (j) *j = w.j;
    if (mu) *mu = w.mu;
    if (abcd) {
        abcd[0] = w.a;
        abcd[1] = w.b;
        abcd[2] = w.c;
        abcd[3] = w.d;
    }
    return SELSEG_OK;
}

selseg_status selseg_lfa_write_report(const selseg_lfa_report* report, const char* path) {
    if (!report || !path) return invalid("null argument");
    return guarded([&] { write_text_file(path, format_lfa_report(report->rep)); });
}

selseg_status selseg_lfa_write_rate_map(const selseg_lfa_report* report, double threshold,
                                        const char* path) {
    if (!report || !path) return invalid("null argument");
    return guarded([&] {
        const Field2D& rm = report->rep.rate_map;
        std::vector<std::uint8_t> mask(rm.size());
        for (size_t k = 0; k < rm.size(); ++k) mask[k] = rm.v[k] > threshold ? 255 : 0;
        write_mask_pgm(mask, rm.nx, rm.ny, path);
    });
}

void selseg_lfa_report_free(selseg_lfa_report* report) { delete report; }

selseg_status selseg_tune(const selseg_image* image, const selseg_markers* markers,
                          const selseg_params* params, const selseg_solve_config* config,
                          int nu_min, int nu_max, int* cycles_out, int* recommended) {
    if (!image || !markers || !params || !config || !cycles_out) return invalid("null argument");
    return guarded([&] {
        const TuneResult t = tune_smoothing(image->field, markers->set, to_params(*params),
                                            to_model(params->model), to_config(*config), nu_min,
                                            nu_max);
        for (size_t k = 0; k < t.rows.size(); ++k) cycles_out[k] = t.rows[k].second;
        if (recommended) *recommended = t.recommended_nu;
    });
}

} // extern "C"
