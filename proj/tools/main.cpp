// gradratio: limited-angle CT reconstruction driver.
//
// Subcommands: phantom, project, noise, reconstruct, evaluate, profile.
// Exit codes: 0 success, 2 validation error, 3 numerical divergence,
// 4 I/O error. GRADRATIO_THREADS caps solver parallelism.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gradratio/assess.hpp"
#include "gradratio/errors.hpp"
#include "gradratio/grid_ops.hpp"
#include "gradratio/io.hpp"
#include "gradratio/phantom.hpp"
#include "gradratio/projector.hpp"
#include "gradratio/prox.hpp"
#include "gradratio/solvers.hpp"
#include "gradratio/types.hpp"

namespace gr = gradratio;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

void attach_config(CLI::App* cmd) {
    // Parsed ahead of CLI11 (see expand_config_args); registered here so
    // it shows up in --help and is accepted by the parser.
    static std::string sink;
    cmd->add_option("--config", sink,
                    "flat JSON file with flag defaults; explicit flags win");
}

/// Loads the flat JSON config named by --config and appends one token
/// pair per key that is not already present on the command line, so
/// explicit flags override file values.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            break;
        }
    }
    if (file.empty()) return args;

    std::ifstream is(file);
    if (!is) throw gr::io_error("cannot open config file: " + file);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config file is not valid JSON: " +
                                    std::string(e.what()));
    }
    if (!j.is_object())
        throw std::invalid_argument("config file must hold a JSON object");

    const auto given = [&](const std::string& flag) {
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "config") continue;
        const std::string flag = "--" + key;
        if (given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& el : value) {
                if (!joined.empty()) joined += ",";
                joined += el.is_string() ? el.get<std::string>() : el.dump();
            }
            args.push_back(flag);
            args.push_back(joined);
        } else {
            args.push_back(flag);
            args.push_back(value.is_string() ? value.get<std::string>()
                                             : value.dump());
        }
    }
    return args;
}

struct GeometryFlags {
    std::string beam = "parallel";
    int grid = 0;
    double theta_max = 180.0;
    int angles = 31;
    int detectors = 0;
    double source_radius = 0.0;
    double detector_radius = 0.0;

    void attach(CLI::App* cmd, bool require_grid) {
        cmd->add_option("--beam", beam, "beam kind: parallel or fan")
            ->check(CLI::IsMember({"parallel", "fan"}));
        auto* g = cmd->add_option("--grid", grid, "image side length N");
        if (require_grid) g->required();
        cmd->add_option("--theta-max", theta_max,
                        "scanning range in degrees, angles sample [0, theta-max)");
        cmd->add_option("--angles", angles, "number of projection angles");
        cmd->add_option("--detectors", detectors,
                        "detector bins per angle (0 = round(sqrt(2)N))");
        cmd->add_option("--source-radius", source_radius,
                        "fan: source distance from grid center, pixels (0 = 2N)");
        cmd->add_option("--detector-radius", detector_radius,
                        "fan: detector arc radius, pixels (0 = source radius)");
    }

    gr::Geometry build() const {
        gr::Geometry g;
        g.kind = beam == "fan" ? gr::BeamKind::fan : gr::BeamKind::parallel;
        g.grid_size = grid;
        g.theta_max_deg = theta_max;
        g.angle_count = angles;
        g.detector_count = detectors;
        g.source_radius = source_radius;
        g.detector_radius = detector_radius;
        return g;
    }
};

struct PgmFlags {
    std::string path;
    std::vector<double> window;

    void attach(CLI::App* cmd) {
        auto* p = cmd->add_option("--pgm", path, "also write a 16-bit PGM view");
        cmd->add_option("--window", window,
                        "display window lo,hi for --pgm")
            ->delimiter(',')
            ->expected(2)
            ->needs(p);
        p->needs(cmd->get_option("--window"));
    }

    void write(const gr::Image& img) const {
        if (path.empty()) return;
        gr::write_pgm16(img, path, window[0], window[1]);
    }
};

// ---------------------------------------------------------------- phantom

struct PhantomCmd {
    int size = 256;
    std::string variant = "high";
    std::string out;
    PgmFlags pgm;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("phantom",
                                       "generate a Shepp-Logan test image");
        attach_config(cmd);
        cmd->add_option("--size", size, "image side length (>= 16)");
        cmd->add_option("--variant", variant, "high or low contrast")
            ->check(CLI::IsMember({"high", "low"}));
        cmd->add_option("--out", out, "output image file")->required();
        pgm.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        const auto v = variant == "high" ? gr::PhantomVariant::high_contrast
                                         : gr::PhantomVariant::low_contrast;
        const gr::Image img = gr::shepp_logan(size, v);
        gr::write_image(img, out);
        pgm.write(img);
        std::cout << "wrote " << out << " (" << size << "x" << size << ")\n";
    }
};

// ---------------------------------------------------------------- project

struct ProjectCmd {
    std::string image_path, out, matrix_out;
    GeometryFlags geom;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand(
            "project", "forward-project an image to a sinogram");
        attach_config(cmd);
        cmd->add_option("--image", image_path, "input image")->required();
        geom.attach(cmd, /*require_grid=*/false);
        cmd->add_option("--out", out, "output sinogram")->required();
        cmd->add_option("--matrix-out", matrix_out,
                        "also export the sparse system matrix");
        cmd->callback([this] { run(); });
    }

    void run() const {
        const gr::Image img = gr::read_image(image_path);
        if (img.height != img.width)
            throw std::invalid_argument("project: image must be square");
        GeometryFlags gf = geom;
        if (gf.grid == 0) gf.grid = img.height;
        if (gf.grid != img.height)
            throw std::invalid_argument("project: --grid does not match image");
        const gr::SparseProjector A = gr::build_projector(gf.build());
        const gr::Sinogram f = gr::forward(A, img);
        gr::write_sinogram(f, out);
        if (!matrix_out.empty()) gr::write_projector(A, matrix_out);
        std::cout << "wrote " << out << " (" << f.detectors << "x" << f.angles
                  << ")\n";
    }
};

// ------------------------------------------------------------------ noise

struct NoiseCmd {
    std::string in, out, kind = "gaussian";
    double level = 0.005;
    double i0 = 1e5;
    double scale = 1.0;
    std::uint64_t seed = 0;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("noise", "add noise to a sinogram");
        attach_config(cmd);
        cmd->add_option("--in", in, "input sinogram")->required();
        cmd->add_option("--kind", kind, "gaussian, poisson or none")
            ->check(CLI::IsMember({"gaussian", "poisson", "none"}));
        cmd->add_option("--level", level, "gaussian level (fraction of max)");
        cmd->add_option("--i0", i0, "poisson incident photon count");
        cmd->add_option("--scale", scale,
                        "apply poisson to scale*f and divide back "
                        "(attenuation unit conversion)");
        cmd->add_option("--seed", seed, "rng seed");
        cmd->add_option("--out", out, "output sinogram")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        gr::Sinogram f = gr::read_sinogram(in);
        gr::NoiseSpec spec;
        spec.seed = seed;
        if (kind == "gaussian") {
            spec.kind = gr::NoiseKind::gaussian;
            spec.gaussian_level = level;
        } else if (kind == "poisson") {
            spec.kind = gr::NoiseKind::poisson;
            spec.i0 = i0;
        } else {
            spec.kind = gr::NoiseKind::none;
        }
        if (spec.kind == gr::NoiseKind::poisson && scale != 1.0) {
            if (!(scale > 0.0))
                throw std::invalid_argument("noise: --scale must be positive");
            for (double& v : f.data) v *= scale;
            gr::Sinogram noisy = gr::add_noise(f, spec);
            for (double& v : noisy.data) v /= scale;
            gr::write_sinogram(noisy, out);
        } else {
            gr::write_sinogram(gr::add_noise(f, spec), out);
        }
        std::cout << "wrote " << out << "\n";
    }
};

// ------------------------------------------------------------ reconstruct

struct ReconstructCmd {
    std::string solver = "l1l2";
    std::string sino_path, matrix_path, truth_path;
    std::string out, trace_path, summary_path;
    GeometryFlags geom;

    double lambda = 0.1, rho = 1.0, beta = 1.0;
    double rho1 = 0.0, rho2 = 0.0; // 0 = follow --rho
    std::vector<double> box;
    std::string fidelity = "ls";
    int kmax = 0, jmax = 0; // 0 = per-solver default
    double eps_rel = 1e-5, cg_tol = 1e-8, eps_h = 1e-12;
    int cg_iters = 50;
    bool cg_schedule = false;
    std::uint64_t seed = 0;
    std::vector<int> image_size;
    double omega = 1.0;
    int sart_iters = 100;
    std::vector<double> lambda_grid, rho_grid, beta_grid;
    PgmFlags pgm;

    CLI::App* cmd = nullptr;

    void attach(CLI::App& app) {
        cmd = app.add_subcommand("reconstruct",
                                 "reconstruct an image from a sinogram");
        attach_config(cmd);
        cmd->add_option("--solver", solver, "l1l2, tv, lp, l1ml2 or sart")
            ->check(CLI::IsMember({"l1l2", "tv", "lp", "l1ml2", "sart"}));
        cmd->add_option("--sino", sino_path, "measured sinogram")->required();
        cmd->add_option("--matrix", matrix_path,
                        "system matrix file (else give geometry flags)");
        geom.attach(cmd, /*require_grid=*/false);
        cmd->add_option("--truth", truth_path, "ground-truth image for RMSE");
        cmd->add_option("--out", out, "output image")->required();
        cmd->add_option("--trace", trace_path,
                        "trace CSV path (default <out>.trace.csv)");
        cmd->add_option("--summary", summary_path,
                        "sweep summary CSV (default <out>.sweep.csv)");

        cmd->add_option("--lambda", lambda, "fidelity weight");
        cmd->add_option("--rho", rho, "penalty for both splits");
        cmd->add_option("--rho1", rho1, "override d-split penalty");
        cmd->add_option("--rho2", rho2, "override h-split penalty");
        cmd->add_option("--beta", beta, "box-split penalty");
        cmd->add_option("--box", box, "box bounds lo,hi")
            ->delimiter(',')
            ->expected(2);
        cmd->add_option("--fidelity", fidelity, "ls or wls")
            ->check(CLI::IsMember({"ls", "wls"}));
        cmd->add_option("--kmax", kmax, "outer iteration cap");
        cmd->add_option("--jmax", jmax, "inner sweeps per outer iteration");
        cmd->add_option("--eps-rel", eps_rel, "relative-change stop");
        cmd->add_option("--cg-tol", cg_tol, "CG relative tolerance");
        cmd->add_option("--cg-iters", cg_iters, "CG iteration cap");
        cmd->add_flag("--cg-schedule", cg_schedule,
                      "geometric CG tolerance schedule");
        cmd->add_option("--eps-h", eps_h, "||h|| divergence sentinel");
        cmd->add_option("--seed", seed, "rng seed");
        cmd->add_option("--image-size", image_size,
                        "image dimensions h,w for non-square matrices")
            ->delimiter(',')
            ->expected(2);
        cmd->add_option("--omega", omega, "sart relaxation in (0,2)");
        cmd->add_option("--iters", sart_iters, "sart sweep count");
        cmd->add_option("--lambda-grid", lambda_grid, "sweep values for lambda")
            ->delimiter(',');
        cmd->add_option("--rho-grid", rho_grid, "sweep values for rho")
            ->delimiter(',');
        cmd->add_option("--beta-grid", beta_grid, "sweep values for beta")
            ->delimiter(',');
        pgm.attach(cmd);
        cmd->callback([this] { run(); });
    }

    gr::SolverKind kind() const {
        if (solver == "l1l2") return gr::SolverKind::l1l2;
        if (solver == "tv") return gr::SolverKind::tv;
        if (solver == "lp") return gr::SolverKind::lp;
        if (solver == "l1ml2") return gr::SolverKind::l1ml2;
        return gr::SolverKind::sart;
    }

    gr::SolverConfig make_config() const {
        gr::SolverConfig cfg = gr::default_config(kind());
        cfg.lambda = lambda;
        cfg.rho1 = rho1 > 0.0 ? rho1 : rho;
        cfg.rho2 = rho2 > 0.0 ? rho2 : rho;
        cfg.beta = beta;
        if (!box.empty()) cfg.box = gr::BoxBounds{box[0], box[1]};
        cfg.fidelity =
            fidelity == "wls" ? gr::Fidelity::wls : gr::Fidelity::ls;
        if (kmax > 0) cfg.k_max = kmax;
        if (jmax > 0) cfg.j_max = jmax;
        cfg.eps_rel = eps_rel;
        cfg.cg_tol = cg_tol;
        cfg.cg_max_iters = cg_iters;
        cfg.cg_tol_schedule = cg_schedule;
        cfg.eps_h_min = eps_h;
        cfg.rng_seed = seed;
        if (!image_size.empty()) {
            cfg.image_height = image_size[0];
            cfg.image_width = image_size[1];
        }
        return cfg;
    }

    gr::ReconResult solve(const gr::SparseProjector& A, const gr::Sinogram& f,
                          const gr::SolverConfig& cfg,
                          const gr::Image* gt) const {
        switch (kind()) {
        case gr::SolverKind::l1l2:
            return gr::reconstruct_l1l2(A, f, cfg, gt);
        case gr::SolverKind::tv:
            return gr::reconstruct_tv(A, f, cfg, gt);
        case gr::SolverKind::lp:
            return gr::reconstruct_lp(A, f, cfg, gt);
        case gr::SolverKind::l1ml2:
            return gr::reconstruct_l1_minus_l2(A, f, cfg, gt);
        case gr::SolverKind::sart:
            return gr::reconstruct_sart(A, f, omega, sart_iters, cfg.box, gt,
                                        cfg.image_height, cfg.image_width);
        }
        throw std::logic_error("unreachable");
    }

    void run() const;
};

void ReconstructCmd::run() const {
    const gr::Sinogram f = gr::read_sinogram(sino_path);

    gr::SparseProjector A;
    if (!matrix_path.empty()) {
        A = gr::read_projector(matrix_path);
    } else {
        if (geom.grid == 0)
            throw std::invalid_argument(
                "reconstruct: give --matrix or geometry flags with --grid");
        gr::Geometry g = geom.build();
        g.detector_count = geom.detectors > 0 ? geom.detectors : f.detectors;
        g.angle_count = f.angles;
        A = gr::build_projector(g);
    }
    if (A.rows != f.size())
        throw std::invalid_argument(
            "reconstruct: matrix rows do not match the sinogram");

    std::optional<gr::Image> truth;
    if (!truth_path.empty()) truth = gr::read_image(truth_path);
    const gr::Image* gt = truth ? &*truth : nullptr;

    const std::string trace_file =
        trace_path.empty() ? out + ".trace.csv" : trace_path;

    const bool sweep =
        !lambda_grid.empty() || !rho_grid.empty() || !beta_grid.empty();
    if (!sweep) {
        gr::SolverConfig cfg = make_config();
        try {
            const gr::ReconResult res = solve(A, f, cfg, gt);
            gr::write_image(res.image, out);
            gr::write_trace_csv(res.trace, trace_file);
            pgm.write(res.image);
            const auto& t = res.trace;
            std::cout << "iterations: " << t.size();
            if (t.has_rmse && !t.rmse.empty())
                std::cout << "  rmse: " << t.rmse.back();
            std::cout << "\nwrote " << out << " and " << trace_file << "\n";
            if (kind() == gr::SolverKind::l1l2 && t.descent_violations > 0)
                std::cerr << "warning: augmented Lagrangian rose on "
                          << t.descent_violations
                          << " outer iterations; consider a larger --rho\n";
        } catch (const gr::divergence_error& e) {
            gr::write_trace_csv(e.trace(), trace_file);
            std::cerr << "divergence: " << e.what() << " (trace written to "
                      << trace_file << ")\n";
            std::exit(kExitDivergence);
        }
        return;
    }

    // Parameter sweep over the candidate grids; requires ground truth to
    // rank combinations.
    if (!gt)
        throw std::invalid_argument("reconstruct: sweeps require --truth");
    std::vector<double> ls = lambda_grid.empty()
                                 ? std::vector<double>{lambda}
                                 : lambda_grid;
    std::vector<double> rs = rho_grid.empty() ? std::vector<double>{rho}
                                              : rho_grid;
    std::vector<double> bs = beta_grid.empty() ? std::vector<double>{beta}
                                               : beta_grid;

    struct Row {
        double lambda, rho, beta, rmse_val, ssim_val;
        std::size_t iters;
        double secs;
        std::string trace_file;
        bool diverged;
    };
    std::vector<Row> rows;
    std::optional<gr::Image> best;
    double best_rmse = std::numeric_limits<double>::infinity();

    int idx = 0;
    for (double lv : ls)
        for (double rv : rs)
            for (double bv : bs) {
                gr::SolverConfig cfg = make_config();
                cfg.lambda = lv;
                cfg.rho1 = rho1 > 0.0 ? rho1 : rv;
                cfg.rho2 = rho2 > 0.0 ? rho2 : rv;
                cfg.beta = bv;
                const std::string tf =
                    trace_file + "." + std::to_string(idx++) + ".csv";
                Row row{lv, rv, bv,
                        std::numeric_limits<double>::infinity(),
                        0.0, 0, 0.0, tf, false};
                try {
                    const gr::ReconResult res = solve(A, f, cfg, gt);
                    row.rmse_val = gr::rmse(res.image, *gt);
                    row.ssim_val = gr::ssim(res.image, *gt);
                    row.iters = res.trace.size();
                    row.secs =
                        res.trace.seconds.empty() ? 0.0 : res.trace.seconds.back();
                    gr::write_trace_csv(res.trace, tf);
                    if (row.rmse_val < best_rmse) {
                        best_rmse = row.rmse_val;
                        best = res.image;
                    }
                } catch (const gr::divergence_error& e) {
                    row.diverged = true;
                    gr::write_trace_csv(e.trace(), tf);
                }
                rows.push_back(row);
            }

    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.rmse_val < b.rmse_val; });

    const std::string summary_file =
        summary_path.empty() ? out + ".sweep.csv" : summary_path;
    {
        std::ostringstream os;
        os << "lambda,rho,beta,rmse,ssim,iterations,seconds,trace,status\n";
        os.precision(17);
        for (const Row& r : rows)
            os << r.lambda << "," << r.rho << "," << r.beta << ","
               << r.rmse_val << "," << r.ssim_val << "," << r.iters << ","
               << r.secs << "," << r.trace_file << ","
               << (r.diverged ? "diverged" : "ok") << "\n";
        // reuse the image writer's atomic behavior via a small local file
        std::ofstream f2(summary_file + ".tmp");
        if (!f2) throw gr::io_error("cannot open: " + summary_file);
        f2 << os.str();
        f2.close();
        std::filesystem::rename(summary_file + ".tmp", summary_file);
    }

    if (!best)
        std::exit(kExitDivergence); // every combination diverged
    gr::write_image(*best, out);
    pgm.write(*best);
    std::cout << "best rmse: " << best_rmse << "\nwrote " << out << " and "
              << summary_file << "\n";
}

// --------------------------------------------------------------- evaluate

struct EvaluateCmd {
    std::string recon_path, truth_path, csv_path;
    std::vector<double> roi_center;
    double roi_radius = 0.0;

    void attach(CLI::App& app) {
        auto* cmd =
            app.add_subcommand("evaluate", "RMSE/SSIM of a reconstruction");
        attach_config(cmd);
        cmd->add_option("--recon", recon_path, "reconstructed image")
            ->required();
        cmd->add_option("--truth", truth_path, "reference image")->required();
        cmd->add_option("--roi-center", roi_center, "ROI center row,col")
            ->delimiter(',')
            ->expected(2);
        cmd->add_option("--roi-radius", roi_radius, "ROI disk radius, pixels");
        cmd->add_option("--csv", csv_path, "also write metrics as CSV");
        cmd->callback([this] { run(); });
    }

    void run() const {
        const gr::Image u = gr::read_image(recon_path);
        const gr::Image t = gr::read_image(truth_path);
        std::optional<gr::RoiMask> roi;
        if (roi_radius > 0.0) {
            const double cr =
                roi_center.empty() ? 0.5 * (u.height - 1) : roi_center[0];
            const double cc =
                roi_center.empty() ? 0.5 * (u.width - 1) : roi_center[1];
            roi = gr::RoiMask::disk(u.height, u.width, cr, cc, roi_radius);
        }
        const gr::RoiMask* mask = roi ? &*roi : nullptr;
        const double r = gr::rmse(u, t, mask);
        const double s = gr::ssim(u, t, mask);
        std::cout.precision(12);
        std::cout << "rmse=" << r << "\nssim=" << s << "\n";
        if (!csv_path.empty()) {
            std::ofstream f(csv_path + ".tmp");
            if (!f) throw gr::io_error("cannot open: " + csv_path);
            f.precision(17);
            f << "rmse,ssim\n" << r << "," << s << "\n";
            f.close();
            std::filesystem::rename(csv_path + ".tmp", csv_path);
        }
    }
};

// ---------------------------------------------------------------- profile

struct ProfileCmd {
    std::string image_path, out;
    int row = -1, col = -1;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand(
            "profile", "extract a row or column profile as CSV");
        attach_config(cmd);
        cmd->add_option("--image", image_path, "input image")->required();
        auto* r = cmd->add_option("--row", row, "row index to extract");
        auto* c = cmd->add_option("--col", col, "column index to extract");
        r->excludes(c);
        cmd->add_option("--out", out, "output CSV")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const gr::Image img = gr::read_image(image_path);
        if ((row < 0) == (col < 0))
            throw std::invalid_argument("profile: give exactly one of --row/--col");
        std::vector<double> values;
        if (row >= 0) {
            if (row >= img.height)
                throw std::invalid_argument("profile: row out of range");
            for (int c = 0; c < img.width; ++c) values.push_back(img.at(row, c));
        } else {
            if (col >= img.width)
                throw std::invalid_argument("profile: col out of range");
            for (int r = 0; r < img.height; ++r) values.push_back(img.at(r, col));
        }
        std::ofstream f(out + ".tmp");
        if (!f) throw gr::io_error("cannot open: " + out);
        f.precision(17);
        f << "index,value\n";
        for (std::size_t i = 0; i < values.size(); ++i)
            f << i << "," << values[i] << "\n";
        f.close();
        std::filesystem::rename(out + ".tmp", out);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"limited-angle CT reconstruction toolkit"};
    app.require_subcommand(1);

    PhantomCmd phantom;
    ProjectCmd project;
    NoiseCmd noise;
    ReconstructCmd reconstruct;
    EvaluateCmd evaluate;
    ProfileCmd profile;

    phantom.attach(app);
    project.attach(app);
    noise.attach(app);
    reconstruct.attach(app);
    evaluate.attach(app);
    profile.attach(app);

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 takes reversed args
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    } catch (const gr::divergence_error& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const gr::numerical_breakdown& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const gr::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
