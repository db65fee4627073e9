#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "selseg/selseg.h"

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("selseg_capi_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

// 64x64 bright disk on black, centred, radius 20.
std::vector<double> disk_pixels(int n) {
    std::vector<double> z(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if ((i - n / 2.0) * (i - n / 2.0) + (j - n / 2.0) * (j - n / 2.0) <= 400.0)
                z[static_cast<size_t>(j) * n + i] = 1.0;
    return z;
}

} // namespace

TEST_CASE("defaults are populated") {
    selseg_params p;
    selseg_params_init(&p);
    CHECK(p.mu == 0.5);
    CHECK(p.lambda1 == 1e-4);
    CHECK(p.eps_heaviside == 1.0);
    selseg_solve_config c;
    selseg_solve_config_init(&c);
    CHECK(c.smoother == SELSEG_SMOOTHER_HYBRID2);
    CHECK(c.gamma == 1);
    CHECK(c.coarsest == 32);
    CHECK(c.coarse_iters == 100);
    CHECK(c.eta == 1e-4);
    CHECK(c.sigma_jump == 1.5);
}

TEST_CASE("errors carry a status and a message") {
    selseg_image* img = nullptr;
    const selseg_status s = selseg_image_load_pgm("definitely_missing.pgm", &img);
    CHECK(s == SELSEG_ERR_IO);
    CHECK(std::strlen(selseg_last_error()) > 0);
    CHECK(img == nullptr);

    selseg_markers* m = nullptr;
    const double two[4] = {1, 1, 2, 2};
    CHECK(selseg_markers_create(two, 2, &m) == SELSEG_ERR_PARAM);

    CHECK(std::string(selseg_status_message(SELSEG_ERR_SINGULAR)) == "singular system");
}

TEST_CASE("segment a disk through the shared-library surface") {
    const int n = 64;
    const auto z = disk_pixels(n);
    selseg_image* img = nullptr;
    REQUIRE(selseg_image_create(n, n, z.data(), &img) == SELSEG_OK);
    CHECK(selseg_image_width(img) == n);
    CHECK(selseg_image_height(img) == n);

    const double xy[] = {22, 32, 32, 22, 42, 32, 32, 42};
    selseg_markers* markers = nullptr;
    REQUIRE(selseg_markers_create(xy, 4, &markers) == SELSEG_OK);
    CHECK(selseg_markers_count(markers) == 4);
    double mx = 0, my = 0;
    REQUIRE(selseg_markers_get(markers, 1, &mx, &my) == SELSEG_OK);
    CHECK(mx == 32);
    CHECK(my == 22);

    selseg_params params;
    selseg_params_init(&params);
    params.lambda1 = params.lambda2 = 50.0;
    selseg_solve_config config;
    selseg_solve_config_init(&config);

    selseg_result* result = nullptr;
    REQUIRE(selseg_segment(img, markers, &params, &config, &result) == SELSEG_OK);
    CHECK(selseg_result_cycles(result) >= 1);
    CHECK(selseg_result_converged(result) == 1);
    CHECK(selseg_result_wall_time(result) > 0.0);

    int len = 0;
    const double* energy = selseg_result_energy_history(result, &len);
    REQUIRE(energy != nullptr);
    CHECK(len == selseg_result_cycles(result));

    const unsigned char* mask = selseg_result_mask(result);
    REQUIRE(mask != nullptr);
    size_t inside = 0, correct = 0, truth_count = 0;
    for (size_t k = 0; k < z.size(); ++k) {
        const bool truth = z[k] > 0.5;
        truth_count += truth;
        inside += mask[k] != 0;
        correct += (mask[k] != 0) && truth;
    }
    const double dice = 2.0 * correct / static_cast<double>(inside + truth_count);
    CHECK(dice >= 0.95);

    TempFile mask_file("mask.pgm");
    TempFile report_file("report.txt");
    TempFile overlay_file("overlay.pgm");
    CHECK(selseg_result_write_mask(result, mask_file.path.c_str()) == SELSEG_OK);
    CHECK(selseg_result_write_overlay(result, overlay_file.path.c_str()) == SELSEG_OK);
    CHECK(selseg_result_write_report(result, report_file.path.c_str()) == SELSEG_OK);

    selseg_image* reread = nullptr;
    REQUIRE(selseg_image_load_pgm(mask_file.path.c_str(), &reread) == SELSEG_OK);
    CHECK(selseg_image_width(reread) == n);
    selseg_image_free(reread);

    selseg_result_free(result);
    selseg_markers_free(markers);
    selseg_image_free(img);
}

TEST_CASE("rate analysis through the shared-library surface") {
    const int n = 64;
    const auto z = disk_pixels(n);
    selseg_image* img = nullptr;
    REQUIRE(selseg_image_create(n, n, z.data(), &img) == SELSEG_OK);
    const double xy[] = {22, 32, 32, 22, 42, 32, 32, 42};
    selseg_markers* markers = nullptr;
    REQUIRE(selseg_markers_create(xy, 4, &markers) == SELSEG_OK);

    selseg_params params;
    selseg_params_init(&params);
    selseg_solve_config config;
    selseg_solve_config_init(&config);
    config.smoother = SELSEG_SMOOTHER_GSLINE1;

    selseg_lfa_report* line = nullptr;
    REQUIRE(selseg_lfa_analyze(img, markers, &params, &config, 64, nullptr, &line) == SELSEG_OK);
    config.smoother = SELSEG_SMOOTHER_HYBRID2;
    selseg_lfa_report* hybrid = nullptr;
    REQUIRE(selseg_lfa_analyze(img, markers, &params, &config, 64, nullptr, &hybrid) == SELSEG_OK);

    CHECK(selseg_lfa_mu_max(line) <= 1.0 + 1e-9);
    CHECK(selseg_lfa_mu_avg(line) <= selseg_lfa_mu_max(line));
    CHECK(selseg_lfa_mu_max(hybrid) < selseg_lfa_mu_max(line));
    CHECK(selseg_lfa_worst_count(line) == 10);
    int wi = 0, wj = 0;
    double wmu = 0, abcd[4] = {0, 0, 0, 0};
    REQUIRE(selseg_lfa_worst_row(line, 0, &wi, &wj, &wmu, abcd) == SELSEG_OK);
    CHECK(wmu == selseg_lfa_mu_max(line));

    TempFile rep_file("lfa.txt");
    TempFile map_file("rate.pgm");
    CHECK(selseg_lfa_write_report(line, rep_file.path.c_str()) == SELSEG_OK);
    CHECK(selseg_lfa_write_rate_map(line, 0.6, map_file.path.c_str()) == SELSEG_OK);

    selseg_lfa_report_free(line);
    selseg_lfa_report_free(hybrid);
    selseg_markers_free(markers);
    selseg_image_free(img);
}

TEST_CASE("compatible crop suggestions") {
    int w = 0, h = 0;
    CHECK(selseg_compatible_crop(97, 64, 32, &w, &h) == SELSEG_OK);
    CHECK(w == 96);
    CHECK(h == 64);
    CHECK(selseg_compatible_crop(10, 10, 32, &w, &h) == SELSEG_ERR_DIMENSION);
}

TEST_CASE("tune through the shared-library surface") {
    const int n = 64;
    const auto z = disk_pixels(n);
    selseg_image* img = nullptr;
    REQUIRE(selseg_image_create(n, n, z.data(), &img) == SELSEG_OK);
    const double xy[] = {22, 32, 32, 22, 42, 32, 32, 42};
    selseg_markers* markers = nullptr;
    REQUIRE(selseg_markers_create(xy, 4, &markers) == SELSEG_OK);
    selseg_params params;
    selseg_params_init(&params);
    params.lambda1 = params.lambda2 = 50.0;
    selseg_solve_config config;
    selseg_solve_config_init(&config);

    int cycles[2] = {0, 0};
    int recommended = 0;
    REQUIRE(selseg_tune(img, markers, &params, &config, 2, 3, cycles, &recommended) == SELSEG_OK);
    CHECK(cycles[0] >= 1);
    CHECK(cycles[1] >= 1);
    CHECK(recommended >= 2);

    selseg_markers_free(markers);
    selseg_image_free(img);
}
