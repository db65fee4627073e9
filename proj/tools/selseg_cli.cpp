// Command-line front end for the selseg shared library.
//
// Subcommands: segment (full solve to mask/report), lfa (smoother rate
// analysis), bench (timing across sizes), tune (smoothing-step sweep).

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selseg/selseg.h"

namespace {

struct ImagePtr {
    selseg_image* p = nullptr;
    ~ImagePtr() { selseg_image_free(p); }
};
struct MarkersPtr {
    selseg_markers* p = nullptr;
    ~MarkersPtr() { selseg_markers_free(p); }
};
struct ResultPtr {
    selseg_result* p = nullptr;
    ~ResultPtr() { selseg_result_free(p); }
};
struct LfaPtr {
    selseg_lfa_report* p = nullptr;
    ~LfaPtr() { selseg_lfa_report_free(p); }
};

[[noreturn]] void fail(selseg_status status) {
    std::fprintf(stderr, "error: %s: %s\n", selseg_status_message(status), selseg_last_error());
    std::exit(1);
}

void check(selseg_status status) {
    if (status != SELSEG_OK) fail(status);
}

struct CommonOptions {
    std::string image_path;
    std::string marker_path;
    std::string model = "rada-chen";
    std::string smoother = "hybrid2";
    selseg_params params{};
    selseg_solve_config config{};
    bool auto_crop = false;
    CLI::Option* nu1_opt = nullptr;
    CLI::Option* nu2_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_markers) {
    selseg_params_init(&o.params);
    selseg_solve_config_init(&o.config);
    cmd->add_option("--image", o.image_path, "input image (PGM P2/P5)")->required();
    auto* markers = cmd->add_option("--markers", o.marker_path,
                                    "marker file, one 'x y' pixel pair per line");
    if (needs_markers) markers->required();
    cmd->add_option("--model", o.model, "rada-chen | spencer-chen")
        ->check(CLI::IsMember({"rada-chen", "spencer-chen"}));
    cmd->add_option("--smoother", o.smoother,
                    "gslex1|gslex2|gsline1|gsline2|newt1|newt2|hybrid1|hybrid2")
        ->check(CLI::IsMember({"gslex1", "gslex2", "gsline1", "gsline2", "newt1", "newt2",
                               "hybrid1", "hybrid2"}));
    cmd->add_option("--mu", o.params.mu, "regularisation weight");
    cmd->add_option("--lambda1", o.params.lambda1, "inside fitting weight");
    cmd->add_option("--lambda2", o.params.lambda2, "outside fitting weight");
    cmd->add_option("--nu", o.params.nu, "area weight (rada-chen)");
    cmd->add_option("--theta", o.params.theta, "distance weight (spencer-chen)");
    cmd->add_option("--beta", o.params.beta, "edge detector parameter");
    cmd->add_option("--sigma", o.params.sigma, "distance width (domain units)");
    cmd->add_option("--eps", o.params.eps_heaviside, "Heaviside regularisation");
    cmd->add_option("--eps-grad", o.params.eps_grad, "gradient regularisation");
    o.nu1_opt = cmd->add_option("--nu1", o.config.nu1, "pre-smoothing steps");
    o.nu2_opt = cmd->add_option("--nu2", o.config.nu2, "post-smoothing steps");
    cmd->add_option("--gamma", o.config.gamma, "cycle shape (1 = V-cycle)");
    cmd->add_option("--coarsest", o.config.coarsest, "coarsest grid size");
    cmd->add_option("--coarse-iters", o.config.coarse_iters, "coarsest-level sweeps");
    cmd->add_option("--eta", o.config.eta, "stopping tolerance");
    cmd->add_option("--max-cycles", o.config.max_cycles, "cycle limit");
    cmd->add_option("--sigma-jump", o.config.sigma_jump, "jump-set threshold");
    cmd->add_flag("--auto-crop", o.auto_crop,
                  "crop to the largest size compatible with the grid hierarchy");
}

selseg_smoother parse_smoother(const std::string& name) {
    if (name == "gslex1") return SELSEG_SMOOTHER_GSLEX1;
    if (name == "gslex2") return SELSEG_SMOOTHER_GSLEX2;
    if (name == "gsline1") return SELSEG_SMOOTHER_GSLINE1;
    if (name == "gsline2") return SELSEG_SMOOTHER_GSLINE2;
    if (name == "newt1") return SELSEG_SMOOTHER_NEWT1;
    if (name == "newt2") return SELSEG_SMOOTHER_NEWT2;
    if (name == "hybrid1") return SELSEG_SMOOTHER_HYBRID1;
    return SELSEG_SMOOTHER_HYBRID2;
}

// Line and pointwise smoothers want more smoothing steps per cycle than the
// hybrids; apply the recommended counts unless the user set them.
void finalize_options(CommonOptions& o) {
    o.params.model =
        o.model == "spencer-chen" ? SELSEG_MODEL_SPENCER_CHEN : SELSEG_MODEL_RADA_CHEN;
    o.config.smoother = parse_smoother(o.smoother);
    const bool hybrid = o.config.smoother == SELSEG_SMOOTHER_HYBRID1 ||
                        o.config.smoother == SELSEG_SMOOTHER_HYBRID2;
    const int recommended = hybrid ? 3 : 5;
    if (o.nu1_opt && o.nu1_opt->count() == 0) o.config.nu1 = recommended;
    if (o.nu2_opt && o.nu2_opt->count() == 0) o.config.nu2 = recommended;
}

void load_inputs(const CommonOptions& o, ImagePtr& image, MarkersPtr& markers) {
    check(selseg_image_load_pgm(o.image_path.c_str(), &image.p));
    if (!o.marker_path.empty()) check(selseg_markers_load(o.marker_path.c_str(), &markers.p));

    if (o.auto_crop) {
        const int w = selseg_image_width(image.p);
        const int h = selseg_image_height(image.p);
        int cw = 0, ch = 0;
        check(selseg_compatible_crop(w, h, o.config.coarsest, &cw, &ch));
        if (cw != w || ch != h) {
            selseg_image* cropped = nullptr;
            check(selseg_image_crop(image.p, cw, ch, &cropped));
            selseg_image_free(image.p);
            image.p = cropped;
            if (markers.p) {
                const double ox = (w - cw) / 2, oy = (h - ch) / 2;
                const int n = selseg_markers_count(markers.p);
                std::vector<double> xy;
                for (int k = 0; k < n; ++k) {
                    double x, y;
                    check(selseg_markers_get(markers.p, k, &x, &y));
                    xy.push_back(x - ox);
                    xy.push_back(y - oy);
                }
                selseg_markers* shifted = nullptr;
                check(selseg_markers_create(xy.data(), n, &shifted));
                selseg_markers_free(markers.p);
                markers.p = shifted;
            }
            std::printf("auto-crop: %dx%d -> %dx%d\n", w, h, cw, ch);
        }
    }
}

int run_segment(const CommonOptions& o, const std::string& mask_path,
                const std::string& overlay_path, const std::string& report_path) {
    ImagePtr image;
    MarkersPtr markers;
    load_inputs(o, image, markers);

    ResultPtr result;
    check(selseg_segment(image.p, markers.p, &o.params, &o.config, &result.p));

    check(selseg_result_write_mask(result.p, mask_path.c_str()));
    if (!overlay_path.empty())
        check(selseg_result_write_overlay(result.p, overlay_path.c_str()));
    check(selseg_result_write_report(result.p, report_path.c_str()));

    std::printf("cycles: %d (%s), solve %.3f s, total %.3f s\n",
                selseg_result_cycles(result.p),
                selseg_result_converged(result.p) ? "converged" : "cycle limit",
                selseg_result_solve_time(result.p), selseg_result_wall_time(result.p));
    std::printf("mask: %s  report: %s\n", mask_path.c_str(), report_path.c_str());
    return 0;
}

int run_lfa(const CommonOptions& o, int q, double threshold, const std::string& phi_path,
            const std::string& report_path, const std::string& map_path) {
    ImagePtr image;
    MarkersPtr markers;
    load_inputs(o, image, markers);

    std::vector<double> phi;
    if (!phi_path.empty()) {
        // a 16-bit PGM remapped from [0,1] to [-1,1]
        ImagePtr phi_img;
        check(selseg_image_load_pgm(phi_path.c_str(), &phi_img.p));
        const int n = selseg_image_width(phi_img.p) * selseg_image_height(phi_img.p);
        const double* data = selseg_image_data(phi_img.p);
        phi.assign(data, data + n);
        for (double& x : phi) x = 2.0 * x - 1.0;
    }

    LfaPtr rep;
    check(selseg_lfa_analyze(image.p, markers.p, &o.params, &o.config, q,
                             phi.empty() ? nullptr : phi.data(), &rep.p));
    check(selseg_lfa_write_report(rep.p, report_path.c_str()));
    check(selseg_lfa_write_rate_map(rep.p, threshold, map_path.c_str()));

    std::printf("smoother %s: mu_max %.4f  mu_avg %.4f  (jump set: max %.4f avg %.4f)\n",
                o.smoother.c_str(), selseg_lfa_mu_max(rep.p), selseg_lfa_mu_avg(rep.p),
                selseg_lfa_mu_max_jump(rep.p), selseg_lfa_mu_avg_jump(rep.p));
    std::printf("worst pixels (i, j, rate, A, B, C, D):\n");
    for (int k = 0; k < selseg_lfa_worst_count(rep.p); ++k) {
        int i, j;
        double mu, abcd[4];
        check(selseg_lfa_worst_row(rep.p, k, &i, &j, &mu, abcd));
        std::printf("  %4d %4d  %.4f  %12.1f %12.1f %12.1f %12.1f\n", i, j, mu, abcd[0], abcd[1],
                    abcd[2], abcd[3]);
    }
    std::printf("report: %s  rate map: %s\n", report_path.c_str(), map_path.c_str());
    return 0;
}

int run_bench(const CommonOptions& o, const std::vector<int>& sizes, int fixed_cycles) {
    ImagePtr image;
    MarkersPtr markers;
    load_inputs(o, image, markers);
    const int w0 = selseg_image_width(image.p);
    const int h0 = selseg_image_height(image.p);
    const int n_markers = selseg_markers_count(markers.p);

    selseg_solve_config config = o.config;
    if (fixed_cycles > 0) {
        config.max_cycles = fixed_cycles;
        config.eta = 1e-300; // run exactly fixed_cycles cycles
    }

    std::printf("%10s %12s %8s %12s %10s\n", "size", "unknowns", "cycles", "solve (s)", "ratio");
    double prev = 0.0;
    for (int size : sizes) {
        ImagePtr scaled;
        check(selseg_image_resize(image.p, size, size, &scaled.p));
        std::vector<double> xy;
        for (int k = 0; k < n_markers; ++k) {
            double x, y;
            check(selseg_markers_get(markers.p, k, &x, &y));
            xy.push_back(x * size / w0);
            xy.push_back(y * size / h0);
        }
        MarkersPtr scaled_markers;
        check(selseg_markers_create(xy.data(), n_markers, &scaled_markers.p));

        ResultPtr result;
        check(selseg_segment(scaled.p, scaled_markers.p, &o.params, &config, &result.p));
        const double t = selseg_result_solve_time(result.p);
        if (prev > 0.0)
            std::printf("%6dx%-4d %12lld %8d %12.3f %10.2f\n", size, size,
                        1LL * size * size, selseg_result_cycles(result.p), t, t / prev);
        else
            std::printf("%6dx%-4d %12lld %8d %12.3f %10s\n", size, size, 1LL * size * size,
                        selseg_result_cycles(result.p), t, "-");
        prev = t;
    }
    return 0;
}

int run_tune(const CommonOptions& o, int nu_min, int nu_max) {
    ImagePtr image;
    MarkersPtr markers;
    load_inputs(o, image, markers);

    std::vector<int> cycles(static_cast<size_t>(nu_max - nu_min + 1));
    int recommended = 0;
    check(selseg_tune(image.p, markers.p, &o.params, &o.config, nu_min, nu_max, cycles.data(),
                      &recommended));
    std::printf("%6s %8s\n", "nu", "cycles");
    for (int nu = nu_min; nu <= nu_max; ++nu)
        std::printf("%6d %8d\n", nu, cycles[static_cast<size_t>(nu - nu_min)]);
    std::printf("recommended smoothing steps: %d\n", recommended);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"selective segmentation by nonlinear multigrid"};
    app.require_subcommand(1);

    CommonOptions seg_opts, lfa_opts, bench_opts, tune_opts;

    auto* seg = app.add_subcommand("segment", "segment an image and write mask/report");
    add_common(seg, seg_opts, true);
    std::string mask_path = "mask.pgm", overlay_path, report_path = "report.txt";
    seg->add_option("--out-mask", mask_path, "output mask (P5 PGM)");
    seg->add_option("--out-overlay", overlay_path, "optional zero-level-set overlay PGM");
    seg->add_option("--out-report", report_path, "output report");

    auto* lfa = app.add_subcommand("lfa", "smoothing-rate analysis of the configured smoother");
    add_common(lfa, lfa_opts, true);
    int q = 256;
    double threshold = 0.6;
    std::string phi_path, lfa_report_path = "report.txt", map_path = "rate_map.pgm";
    lfa->add_option("--q", q, "frequency samples per axis");
    lfa->add_option("--threshold", threshold, "rate-map threshold");
    lfa->add_option("--phi", phi_path, "level-set PGM remapped to [-1, 1] (default: marker init)");
    lfa->add_option("--out-report", lfa_report_path, "output report");
    lfa->add_option("--out-rate-map", map_path, "output binary rate map PGM");

    auto* bench = app.add_subcommand("bench", "timing table across image sizes");
    add_common(bench, bench_opts, true);
    std::vector<int> sizes{128, 256, 512};
    int fixed_cycles = 0;
    bench->add_option("--sizes", sizes, "square sizes to run")->delimiter(',');
    bench->add_option("--cycles", fixed_cycles, "run exactly this many cycles per size");

    auto* tune = app.add_subcommand("tune", "cycle counts against smoothing steps");
    add_common(tune, tune_opts, true);
    int nu_min = 1, nu_max = 6;
    tune->add_option("--nu-min", nu_min, "smallest smoothing-step count");
    tune->add_option("--nu-max", nu_max, "largest smoothing-step count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (seg->parsed()) {
        finalize_options(seg_opts);
        return run_segment(seg_opts, mask_path, overlay_path, report_path);
    }
    if (lfa->parsed()) {
        finalize_options(lfa_opts);
        return run_lfa(lfa_opts, q, threshold, phi_path, lfa_report_path, map_path);
    }
    if (bench->parsed()) {
        finalize_options(bench_opts);
        return run_bench(bench_opts, sizes, fixed_cycles);
    }
    finalize_options(tune_opts);
    return run_tune(tune_opts, nu_min, nu_max);
}
