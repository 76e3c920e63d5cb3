#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gradtomo/edges.hpp"
#include "gradtomo/errors.hpp"
#include "gradtomo/experiment.hpp"
#include "gradtomo/io.hpp"
#include "gradtomo/method1.hpp"
#include "gradtomo/method2.hpp"
#include "gradtomo/parallel.hpp"
#include "gradtomo/phantom.hpp"
#include "gradtomo/projector.hpp"

namespace gradtomo::cli {

namespace fs = std::filesystem;

namespace {

// Tracks files a command writes so a failure leaves nothing half-written behind.
class Outputs {
public:
    const fs::path& add(const fs::path& p) {
        paths_.push_back(p);
        return paths_.back();
    }
    void discard() {
        std::error_code ec;
        for (const auto& p : paths_) {
            fs::remove(p, ec);
            fs::remove(fs::path(p.string() + ".range"), ec);
        }
        paths_.clear();
    }

private:
    std::vector<fs::path> paths_;
};

struct PhantomOptions {
    std::string type = "shepp-logan";
    std::size_t size = 128;
    double pixel_size = 1.0;
    std::string ellipses;  // CSV: x1,x2,a,b,rotation_deg,amplitude per line
    double radius = 0.0;   // disk; 0 selects a quarter of the field of view
};

void add_phantom_flags(CLI::App* cmd, PhantomOptions& o) {
    cmd->add_option("--type", o.type, "Phantom type")
        ->check(CLI::IsMember({"shepp-logan", "disk", "ellipses"}));
    cmd->add_option("--size", o.size, "Grid size N")->check(CLI::Range(32, 8192));
    cmd->add_option("--pixel-size", o.pixel_size, "Pixel size")->check(CLI::PositiveNumber);
    cmd->add_option("--ellipses", o.ellipses, "Ellipse table for --type ellipses (x1,x2,a,b,rot_deg,amp)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--radius", o.radius, "Disk radius (physical units)")->check(CLI::NonNegativeNumber);
}

std::vector<EllipseSpec> read_ellipse_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::vector<EllipseSpec> specs;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        std::istringstream fields(line);
        std::vector<double> v;
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FormatError("ellipse table row " + std::to_string(row) + ": not a number");
            }
        }
        if (v.size() != 6) throw FormatError("ellipse table row " + std::to_string(row) + ": expected 6 fields");
        EllipseSpec e{v[0], v[1], v[2], v[3], v[4] * std::numbers::pi / 180.0, v[5]};
        e.validate();
        specs.push_back(e);
    }
    if (specs.empty()) throw FormatError("ellipse table " + path.string() + " is empty");
    return specs;
}

std::vector<EllipseSpec> phantom_specs(const PhantomOptions& o) {
    const GridSpec grid{o.size, o.pixel_size};
    if (o.type == "shepp-logan") return shepp_logan_specs(grid.half_extent());
    if (o.type == "disk") return {disk_spec(o.radius > 0 ? o.radius : 0.5 * grid.half_extent())};
    if (o.ellipses.empty()) throw std::invalid_argument("--type ellipses needs --ellipses FILE");
    return read_ellipse_table(o.ellipses);
}

GridSpec reconstruction_grid(const Sinogram& sino, std::optional<std::size_t> size, std::optional<double> pixel_size) {
    const double ps = pixel_size.value_or(sino.detector().spacing);
    const std::size_t n = size.value_or(sino.detector().max_grid_size(ps));
    return GridSpec{n, ps};
}

void write_diag_csv(const fs::path& path, const std::vector<std::pair<std::string, const IstaDiagnostics*>>& parts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "component,iteration,objective\n";
    char buf[64];
    for (const auto& [name, d] : parts) {
        for (std::size_t k = 0; k < d->objective.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", d->objective[k]);
            out << name << ',' << k << ',' << buf << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Edge-oriented gradient reconstruction from parallel-beam sinograms", "gradtomo"};
    app.require_subcommand(1);

    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->envname("GRADTOMO_THREADS");

    Outputs outputs;

    // phantom
    PhantomOptions ph;
    std::string ph_out, ph_pgm;
    auto* phantom_cmd = app.add_subcommand("phantom", "Rasterize a phantom");
    add_phantom_flags(phantom_cmd, ph);
    phantom_cmd->add_option("--out", ph_out, "Output image")->required();
    phantom_cmd->add_option("--pgm", ph_pgm, "Optional display export");

    // project
    PhantomOptions pj;
    std::string pj_img, pj_out;
    std::size_t pj_angles = 180;
    std::optional<std::size_t> pj_ns;
    double pj_ds = 1.0;
    bool pj_analytic = false;
    auto* project_cmd = app.add_subcommand("project", "Forward-project an image or an analytic phantom");
    project_cmd->add_option("--img", pj_img, "Input image")->check(CLI::ExistingFile);
    project_cmd->add_option("--n-angles", pj_angles, "Evenly spaced angles over [0, pi)")->check(CLI::PositiveNumber);
    project_cmd->add_option("--n-s", pj_ns, "Detector samples (default: smallest covering count)");
    project_cmd->add_option("--s-spacing", pj_ds, "Detector spacing")->check(CLI::PositiveNumber);
    project_cmd->add_option("--out", pj_out, "Output sinogram")->required();
    project_cmd->add_flag("--analytic", pj_analytic, "Exact line integrals of the phantom given by --type");
    add_phantom_flags(project_cmd, pj);

    // subsample
    std::string ss_in, ss_out;
    std::size_t ss_keep = 1;
    auto* subsample_cmd = app.add_subcommand("subsample", "Keep every Q-th angle");
    subsample_cmd->add_option("--in", ss_in)->required()->check(CLI::ExistingFile);
    subsample_cmd->add_option("--keep-every", ss_keep)->required()->check(CLI::PositiveNumber);
    subsample_cmd->add_option("--out", ss_out)->required();

    // noise
    std::string nz_in, nz_out;
    double nz_frac = 0.01;
    std::uint64_t nz_seed = 0;
    auto* noise_cmd = app.add_subcommand("noise", "Add seeded Gaussian noise");
    noise_cmd->add_option("--in", nz_in)->required()->check(CLI::ExistingFile);
    noise_cmd->add_option("--sigma-frac", nz_frac, "Noise std as a fraction of max|sinogram|")
        ->check(CLI::NonNegativeNumber);
    noise_cmd->add_option("--seed", nz_seed);
    noise_cmd->add_option("--out", nz_out)->required();

    // import-csv
    std::string ic_in, ic_out;
    double ic_ds = 1.0;
    auto* import_cmd = app.add_subcommand("import-csv", "Convert a CSV sinogram (one row per angle)");
    import_cmd->add_option("--csv", ic_in)->required()->check(CLI::ExistingFile);
    import_cmd->add_option("--s-spacing", ic_ds)->check(CLI::PositiveNumber);
    import_cmd->add_option("--out", ic_out)->required();

    // fbp
    std::string fb_sino, fb_out, fb_pgm;
    std::optional<std::size_t> fb_size;
    std::optional<double> fb_ps;
    double fb_cutoff = 1.0;
    auto* fbp_cmd = app.add_subcommand("fbp", "Filtered backprojection");
    fbp_cmd->add_option("--sino", fb_sino)->required()->check(CLI::ExistingFile);
    fbp_cmd->add_option("--size", fb_size, "Grid size (default: largest covered)");
    fbp_cmd->add_option("--pixel-size", fb_ps, "Pixel size (default: detector spacing)");
    fbp_cmd->add_option("--cutoff", fb_cutoff, "Ramp cutoff as a fraction of Nyquist")->check(CLI::Range(0.0, 1.0));
    fbp_cmd->add_option("--out", fb_out)->required();
    fbp_cmd->add_option("--pgm", fb_pgm, "Optional display export");

    // grad
    std::string gr_method = "fbp-combined", gr_sino, gr_gx, gr_gy, gr_diag, gr_pgm;
    std::optional<double> gr_eps;
    double gr_lambda = 0.01, gr_tol = 1e-6, gr_cutoff = 1.0;
    bool gr_lambda_rel = false;
    std::size_t gr_iters = 500;
    std::uint64_t gr_seed = 0;
    std::optional<std::size_t> gr_size;
    std::optional<double> gr_ps;
    auto* grad_cmd = app.add_subcommand("grad", "Smoothed gradient from a sinogram");
    grad_cmd->add_option("--method", gr_method)->check(CLI::IsMember({"fbp-preprocess", "fbp-combined", "l1"}));
    grad_cmd->add_option("--epsilon", gr_eps, "Smoothing scale in pixels (default 3, or 6 for l1)")
        ->check(CLI::PositiveNumber);
    grad_cmd->add_option("--lambda", gr_lambda, "l1 weight")->check(CLI::NonNegativeNumber);
    grad_cmd->add_flag("--lambda-relative", gr_lambda_rel, "Read --lambda as a fraction of ||2 R^T rhs||_inf");
    grad_cmd->add_option("--max-iters", gr_iters)->check(CLI::PositiveNumber);
    grad_cmd->add_option("--rel-tol", gr_tol)->check(CLI::NonNegativeNumber);
    grad_cmd->add_option("--seed", gr_seed, "Power-method seed");
    grad_cmd->add_option("--cutoff", gr_cutoff, "Ramp cutoff for fbp-preprocess")->check(CLI::Range(0.0, 1.0));
    grad_cmd->add_option("--sino", gr_sino)->required()->check(CLI::ExistingFile);
    grad_cmd->add_option("--size", gr_size, "Grid size (default: largest covered)");
    grad_cmd->add_option("--pixel-size", gr_ps, "Pixel size (default: detector spacing)");
    grad_cmd->add_option("--out-gx", gr_gx)->required();
    grad_cmd->add_option("--out-gy", gr_gy)->required();
    grad_cmd->add_option("--diag", gr_diag, "Objective history CSV (l1 only)");
    grad_cmd->add_option("--pgm", gr_pgm, "Optional display export of the magnitude");

    // canny
    std::string cn_gx, cn_gy, cn_out, cn_pgm;
    double cn_low = 0.1, cn_high = 0.25;
    auto* canny_cmd = app.add_subcommand("canny", "Canny edges from a gradient field");
    canny_cmd->add_option("--gx", cn_gx)->required()->check(CLI::ExistingFile);
    canny_cmd->add_option("--gy", cn_gy)->required()->check(CLI::ExistingFile);
    canny_cmd->add_option("--low", cn_low, "Low threshold, fraction of peak")->check(CLI::Range(0.0, 1.0));
    canny_cmd->add_option("--high", cn_high, "High threshold, fraction of peak")->check(CLI::Range(0.0, 1.0));
    canny_cmd->add_option("--out", cn_out)->required();
    canny_cmd->add_option("--pgm", cn_pgm, "Optional display export");

    // score
    std::string sc_pred, sc_truth;
    double sc_radius = 2.0;
    auto* score_cmd = app.add_subcommand("score", "Match-radius precision, recall and F1");
    score_cmd->add_option("--pred", sc_pred)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--truth", sc_truth)->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--radius", sc_radius)->check(CLI::NonNegativeNumber);

    // experiment sparse-view
    SparseViewConfig ex;
    std::string ex_dir;
    auto* experiment_cmd = app.add_subcommand("experiment", "Reproducible experiments");
    experiment_cmd->require_subcommand(1);
    auto* sparse_cmd = experiment_cmd->add_subcommand("sparse-view", "Sparse-view edge detection on Shepp-Logan");
    sparse_cmd->add_option("--angles", ex.sparse_angles)->check(CLI::PositiveNumber);
    sparse_cmd->add_option("--size", ex.size)->check(CLI::Range(32, 1024));
    sparse_cmd->add_option("--noise", ex.noise_frac, "Noise std as a fraction of max|sinogram|");
    sparse_cmd->add_option("--seed", ex.noise_seed, "Noise seed");
    sparse_cmd->add_option("--out-dir", ex_dir)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    set_thread_count(threads);

    try {
        if (*phantom_cmd) {
            const auto img = rasterize(phantom_specs(ph), GridSpec{ph.size, ph.pixel_size});
            io::write_image(outputs.add(ph_out), img);
            if (!ph_pgm.empty()) io::export_view(img, outputs.add(ph_pgm));
        } else if (*project_cmd) {
            const auto angles = AngleSet::evenly_distributed(pj_angles);
            if (pj_analytic) {
                const GridSpec grid{pj.size, pj.pixel_size};
                const DetectorGrid det = pj_ns ? DetectorGrid(*pj_ns, pj_ds) : DetectorGrid::covering(grid, pj_ds);
                io::write_sinogram(outputs.add(pj_out), analytic_sinogram(phantom_specs(pj), angles, det));
            } else {
                if (pj_img.empty()) throw std::invalid_argument("project needs --img FILE or --analytic");
                const auto img = io::read_image(pj_img);
                const DetectorGrid det =
                    pj_ns ? DetectorGrid(*pj_ns, pj_ds) : DetectorGrid::covering(img.spec(), pj_ds);
                io::write_sinogram(outputs.add(pj_out), forward_radon(img, angles, det));
            }
        } else if (*subsample_cmd) {
            io::write_sinogram(outputs.add(ss_out), subsample_angles(io::read_sinogram(ss_in), ss_keep));
        } else if (*noise_cmd) {
            io::write_sinogram(outputs.add(nz_out), add_noise(io::read_sinogram(nz_in), nz_frac, nz_seed));
        } else if (*import_cmd) {
            io::write_sinogram(outputs.add(ic_out), io::import_sinogram_csv(fs::path(ic_in), ic_ds));
        } else if (*fbp_cmd) {
            const auto sino = io::read_sinogram(fb_sino);
            const auto img = fbp_reconstruct(sino, reconstruction_grid(sino, fb_size, fb_ps), fb_cutoff);
            io::write_image(outputs.add(fb_out), img);
            if (!fb_pgm.empty()) io::export_view(img, outputs.add(fb_pgm));
        } else if (*grad_cmd) {
            if (!gr_diag.empty() && gr_method != "l1") throw std::invalid_argument("--diag applies to --method l1");
            const auto sino = io::read_sinogram(gr_sino);
            const GridSpec grid = reconstruction_grid(sino, gr_size, gr_ps);
            const double eps = gr_eps.value_or(gr_method == "l1" ? 6.0 : 3.0) * grid.pixel_size;
            std::optional<GradientField> gf;
            if (gr_method == "fbp-preprocess") {
                gf = method1_gradient_preprocess(sino, eps, grid, gr_cutoff);
            } else if (gr_method == "fbp-combined") {
                gf = method1_gradient_combined(sino, eps, grid);
            } else {
                IstaConfig cfg;
                cfg.lambda = gr_lambda;
                cfg.lambda_mode = gr_lambda_rel ? LambdaMode::relative_to_data : LambdaMode::absolute;
                cfg.max_iters = gr_iters;
                cfg.rel_tol = gr_tol;
                cfg.seed = gr_seed;
                auto result = method2_gradient(sino, eps, cfg, grid);
                gf = result.gradient;
                if (!gr_diag.empty())
                    write_diag_csv(outputs.add(gr_diag),
                                   {{"gx", &result.gx_diagnostics}, {"gy", &result.gy_diagnostics}});
                err << "l1: gx " << result.gx_diagnostics.iterations << " iterations, gy "
                    << result.gy_diagnostics.iterations << " iterations\n";
            }
            io::write_image(outputs.add(gr_gx), gf->gx());
            io::write_image(outputs.add(gr_gy), gf->gy());
            if (!gr_pgm.empty()) io::export_view(gradient_magnitude(*gf), outputs.add(gr_pgm));
        } else if (*canny_cmd) {
            if (cn_low > cn_high) throw std::invalid_argument("--low must not exceed --high");
            const GradientField gf(io::read_image(cn_gx), io::read_image(cn_gy));
            const auto edges = canny_from_gradient(gf, cn_low, cn_high);
            io::write_image(outputs.add(cn_out), io::edge_map_to_image(edges, gf.spec().pixel_size));
            if (!cn_pgm.empty()) io::export_view(edges, outputs.add(cn_pgm));
        } else if (*score_cmd) {
            const auto pred = io::edge_map_from_image(io::read_image(sc_pred));
            const auto truth = io::edge_map_from_image(io::read_image(sc_truth));
            const auto s = edge_f1(pred, truth, sc_radius);
            char line[128];
            std::snprintf(line, sizeof line, "precision=%.6f recall=%.6f f1=%.6f", s.precision, s.recall, s.f1);
            out << line << '\n';
        } else if (*sparse_cmd) {
            const fs::path dir(ex_dir);
            fs::create_directories(dir);
            const auto report = run_sparse_view(ex);
            {
                std::ofstream csv(outputs.add(dir / "metrics.csv"));
                if (!csv) throw std::runtime_error("cannot write " + (dir / "metrics.csv").string());
                write_metrics_csv(csv, report);
                if (!csv) throw std::runtime_error("write failed: " + (dir / "metrics.csv").string());
            }
            io::export_view(report.truth, outputs.add(dir / "truth_edges.pgm"));
            for (const MethodOutcome* m : {&report.method1_at(ex.sparse_angles), &report.best_method2(ex.sparse_angles),
                                           &report.method1_at(ex.full_angles), &report.best_method2(ex.full_angles)}) {
                const std::string stem = (m->method == "l1" ? "method2_" : "method1_") + std::to_string(m->n_angles);
                io::export_view(gradient_magnitude(m->gradient), outputs.add(dir / (stem + "_magnitude.pgm")));
                io::export_view(m->edges, outputs.add(dir / (stem + "_edges.pgm")));
            }
            for (const auto& m : report.method1) {
                out << m.method << " angles=" << m.n_angles << " f1=" << std::fixed << std::setprecision(4)
                    << m.score.f1 << " spurious=" << m.spurious_fraction << '\n';
            }
            for (std::size_t n : {ex.sparse_angles, ex.full_angles}) {
                const auto& m = report.best_method2(n);
                out << m.method << " angles=" << m.n_angles << " lambda_rel=" << m.lambda_rel << " f1=" << m.score.f1
                    << " spurious=" << m.spurious_fraction << '\n';
            }
        }
    } catch (const std::exception& e) {
        outputs.discard();
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace gradtomo::cli
