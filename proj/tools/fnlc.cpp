// Command-line front end: one binary, one subcommand per workflow stage.
// Everything on disk is CSV, PGM or the toolkit's own binary frames; plotting
// stays external.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "fnlc/channel/metrics.hpp"
#include "fnlc/channel/pulse.hpp"
#include "fnlc/channel/ssfm.hpp"
#include "fnlc/complexity/rmps.hpp"
#include "fnlc/harness/evaluate.hpp"
#include "fnlc/harness/grid.hpp"
#include "fnlc/harness/heatmap.hpp"
#include "fnlc/harness/scenario.hpp"
#include "fnlc/harness/train.hpp"
#include "fnlc/model/model_io.hpp"

namespace fs = std::filesystem;
using namespace fnlc;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string model_path;
    long long seed_override = -1;
    int workers = 0;
    bool desk_scale = false;
};

RunConfig load_options(const Options& o) {
    RunConfig rc = load_run_config(o.config_path);
    if (o.desk_scale) apply_desk_scale(rc);
    if (o.seed_override >= 0) {
        rc.train.seed_train = static_cast<std::uint64_t>(o.seed_override);
        rc.train.seed_eval = static_cast<std::uint64_t>(o.seed_override) + 1;
    }
    if (!o.out_dir.empty()) rc.out_dir = o.out_dir;
    fs::create_directories(rc.out_dir);
    return rc;
}

// --workers, then the FIBER_NLC_THREADS cap, then whatever the host offers.
int worker_count(const Options& o) {
    int w = o.workers > 0
                ? o.workers
                : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FIBER_NLC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) w = std::min(w, cap);
    }
    return std::max(1, w);
}

std::string model_file(const Options& o, const RunConfig& rc) {
    return o.model_path.empty() ? rc.out_dir + "/model.ckpt" : o.model_path;
}

QResult linear_q(const SymbolFrame& f, int pol) {
    const long n = f.symbols();
    return q_factor_pair(f.rx.block(0, 2 * pol, n, 2),
                         f.tx.block(0, 2 * pol, n, 2), f.modulation);
}

double linear_q_db(const SymbolFrame& f) {
    return 0.5 * (linear_q(f, 0).q_db + linear_q(f, 1).q_db);
}

int cmd_simulate(const Options& o) {
    const RunConfig rc = load_options(o);
    const SymbolFrame f = simulate_frame(rc.link, rc.tx, rc.train.eval_symbols,
                                         rc.train.seed_eval);
    const std::string path = rc.out_dir + "/frame.bin";
    save_frame(path, f);
    std::cout << "frame: " << f.symbols() << " symbols, "
              << to_string(f.modulation) << " at " << f.launch_dbm
              << " dBm over " << rc.link.span_count << "x" << rc.link.span_km
              << " km -> " << path << "\n";
    std::cout << "linear q: x " << linear_q(f, 0).q_db << " dB, y "
              << linear_q(f, 1).q_db << " dB, mean " << linear_q_db(f)
              << " dB\n";
    return 0;
}

int cmd_train(const Options& o) {
    const RunConfig rc = load_options(o);
    const SymbolFrame train_frame = simulate_frame(
        rc.link, rc.tx, rc.train.train_symbols, rc.train.seed_train);
    const SymbolFrame eval_frame = simulate_frame(
        rc.link, rc.tx, rc.train.eval_symbols, rc.train.seed_eval);

    ModelConfig mc = rc.model;
    mc.train_power_dbm = rc.tx.launch_dbm;
    Model<double> m(mc);
    m.init(rc.train.seed_train);
    const Dataset ds = build_dataset_dual(train_frame, mc.tap, mc.block);
    std::cout << "training " << config_id(mc) << ": " << ds.count()
              << " blocks of " << mc.block << " symbols\n";
    const TrainResult tr = train_model(m, ds, rc.train);

    const std::string log_path = rc.out_dir + "/training_log.csv";
    std::ofstream log(log_path);
    if (!log) throw FramingError("cannot open " + log_path + " for writing");
    log.precision(10);
    log << "epoch,train_mse,val_mse\n";
    for (size_t e = 0; e < tr.train_loss.size(); ++e)
        log << e + 1 << "," << tr.train_loss[e] << "," << tr.val_loss[e]
            << "\n";

    const std::string ckpt = model_file(o, rc);
    save_model(ckpt, m);
    std::cout << "stopped after " << tr.epochs_run << " epochs, best epoch "
              << tr.best_epoch << " (val mse " << tr.best_val << ", val q "
              << tr.val_q_db << " dB) -> " << ckpt << "\n";

    const EvalResult ev = evaluate_frame(m, eval_frame);
    std::cout << "eval q: model " << ev.q_db << " dB, linear "
              << linear_q_db(eval_frame) << " dB\n";
    return 0;
}

int cmd_eval(const Options& o) {
    const RunConfig rc = load_options(o);
    const std::string ckpt = model_file(o, rc);
    if (!fs::exists(ckpt))
        throw ConfigError("no checkpoint at " + ckpt +
                          "; run the train subcommand first");
    Model<double> m = load_model(ckpt);
    const SymbolFrame f = simulate_frame(rc.link, rc.tx, rc.train.eval_symbols,
                                         rc.train.seed_eval);
    const EvalResult ev = evaluate_frame(m, f);
    std::cout << ev.config_id << ": rmps " << ev.rmps_total << ", q "
              << ev.q_db << " dB (x " << ev.q_x_db << ", y " << ev.q_y_db
              << "), linear " << linear_q_db(f) << " dB\n";
    return 0;
}

int cmd_sweep(const Options& o) {
    const RunConfig rc = load_options(o);
    if (rc.sweep_powers.empty())
        throw ConfigError("sweep.powers_dbm is empty; nothing to sweep");
    const std::string ckpt = model_file(o, rc);
    if (!fs::exists(ckpt))
        throw ConfigError("no checkpoint at " + ckpt +
                          "; run the train subcommand first");
    Model<double> m = load_model(ckpt);

    const std::string path = rc.out_dir + "/sweep.csv";
    std::ofstream out(path);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out.precision(10);
    out << "launch_power_dbm,q_linear_db,q_model_db\n";
    for (const double p : rc.sweep_powers) {
        TxConfig tx = rc.tx;
        tx.launch_dbm = p;
        const SymbolFrame f =
            simulate_frame(rc.link, tx, rc.train.eval_symbols,
                           rc.train.seed_eval);
        const double ql = linear_q_db(f);
        const double qm = evaluate_frame(m, f).q_db;
        out << p << "," << ql << "," << qm << "\n";
        std::cout << p << " dBm: linear " << ql << " dB, model " << qm
                  << " dB\n";
    }
    std::cout << "-> " << path << "\n";
    return 0;
}

int cmd_grid(const Options& o) {
    const RunConfig rc = load_options(o);
    const std::vector<GridRow> rows =
        grid_search(rc, worker_count(o), std::cout);
    write_results_csv(rc.out_dir + "/results.csv", rows);
    write_envelope_csv(rc.out_dir + "/envelope.csv", pareto_envelope(rows));
    std::vector<GridRow> masked;
    for (const auto& r : rows)
        if (!r.failed && r.model.masked()) masked.push_back(r);
    if (!masked.empty())
        write_envelope_csv(rc.out_dir + "/envelope_masked.csv",
                           pareto_envelope(masked));
    int failures = 0;
    for (const auto& r : rows) failures += r.failed ? 1 : 0;
    std::cout << rows.size() << " cells, " << failures << " failed -> "
              << rc.out_dir << "/results.csv\n";
    return failures == static_cast<int>(rows.size()) ? 1 : 0;
}

int cmd_mask(const Options& o, int ell_flag, double rho_flag, int block_flag) {
    const RunConfig rc = load_options(o);
    const int l = ell_flag > 0 ? ell_flag : rc.model.ell();
    const double rho = rho_flag > 0.0 ? rho_flag : rc.model.mask_rho;
    const int b = block_flag > 0 ? block_flag : rc.model.block;
    if (rho <= 0.0)
        throw ConfigError("mask needs rho > 0 (set model.mask_rho or --rho)");
    const AttentionMask m = block_mask(l, rho, b);
    mask_to_pgm(m, rc.out_dir + "/mask.pgm");
    mask_to_rowlist(m, rc.out_dir + "/mask_rows.txt");
    std::cout << "mask l=" << l << " rho=" << rho << " b=" << b
              << ": zero ratio " << m.unmasked_ratio() << " (" << m.unmasked
              << " of " << m.total() << ") -> " << rc.out_dir << "/mask.pgm\n";
    return 0;
}

int cmd_rmps(const Options& o) {
    const RunConfig rc = load_options(o);
    const ComplexityReport rep = complexity_report(rc.model);
    const std::string path = rc.out_dir + "/rmps.csv";
    std::ofstream out(path);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out.precision(10);
    out << "component,rmps\n"
        << "embedding," << rep.embedding << "\n"
        << "projection," << rep.projection << "\n"
        << "attention," << rep.attention << "\n"
        << "ffn," << rep.ffn << "\n"
        << "layer_norm," << rep.layer_norm << "\n"
        << "output_mlp," << rep.output_mlp << "\n"
        << "total," << rep.total << "\n";

    std::cout << config_id(rc.model) << ": total rmps " << rep.total << " ("
              << rep.block_mults << " mults per block)\n";
    if (rc.model.masked()) {
        ModelConfig dense = rc.model;
        dense.mask_rho = 0.0;
        std::cout << "dense reference: " << complexity_report(dense).total
                  << "\n";
    }

    std::vector<int> blocks;
    for (int b = 8; b <= 4096; b *= 2) blocks.push_back(b);
    blocks.push_back(rc.model.ell());
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    const auto curve = attention_rmps_curve(rc.model.heads, rc.model.ell(),
                                            rc.model.d_k(), blocks);
    const std::string cpath = rc.out_dir + "/rmps_curve.csv";
    std::ofstream cout_file(cpath);
    if (!cout_file) throw FramingError("cannot open " + cpath + " for writing");
    cout_file.precision(10);
    cout_file << "block,attention_rmps\n";
    for (const auto& [b, v] : curve) cout_file << b << "," << v << "\n";
    std::cout << "-> " << path << ", " << cpath << "\n";
    return 0;
}

// Maximizes f over [lo, hi] by golden-section search; f is unimodal enough
// near the optimum for this to land within tol.
template <typename F>
double golden_max(double lo, double hi, double tol, F f) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

int cmd_dbp(const Options& o) {
    const RunConfig rc = load_options(o);
    TxConfig tx = rc.tx;
    tx.symbol_count = static_cast<int>(rc.train.eval_symbols);
    tx.seed = rc.train.seed_eval;
    tx.validate();
    rc.link.validate();
    const DualPolSymbols syms =
        generate_symbols(tx.symbol_count, tx.modulation, tx.seed);
    DualPolWave w = shape_transmit(syms, tx, rc.link);
    propagate(w, rc.link, tx.seed);

    auto q_at = [&](int steps, double xi) {
        RxOptions opt;
        opt.dbp_steps_per_span = steps;
        opt.dbp_xi = xi;
        const SymbolFrame f = receive(w, tx, rc.link, syms, opt);
        return linear_q_db(f);
    };

    const std::string path = rc.out_dir + "/dbp.csv";
    std::ofstream out(path);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out.precision(10);
    out << "steps_per_span,xi,q_db\n";

    const double q_lin = q_at(0, 0.0);
    out << 0 << "," << 0.0 << "," << q_lin << "\n";
    std::cout << "linear: q " << q_lin << " dB\n";
    for (const int steps : rc.dbp_steps) {
        const double xi =
            golden_max(0.0, 1.5, 0.02, [&](double x) { return q_at(steps, x); });
        const double q = q_at(steps, xi);
        out << steps << "," << xi << "," << q << "\n";
        std::cout << steps << " steps/span: xi " << xi << ", q " << q
                  << " dB\n";
    }
    std::cout << "-> " << path << "\n";
    return 0;
}

int cmd_heatmap(const Options& o) {
    const RunConfig rc = load_options(o);
    const std::string ckpt = model_file(o, rc);
    if (!fs::exists(ckpt))
        throw ConfigError("no checkpoint at " + ckpt +
                          "; run the train subcommand first");
    Model<double> m = load_model(ckpt);
    const SymbolFrame f = simulate_frame(rc.link, rc.tx, rc.train.eval_symbols,
                                         rc.train.seed_eval);
    const HeatMaps hm = export_heatmaps(m, f);
    const int halfwidth = m.cfg.ell() / 2;
    double mean_band = 0.0;
    for (int li = 0; li < hm.layers; ++li)
        for (int h = 0; h < hm.heads; ++h) {
            const MatX& map = hm.at(li, h);
            const std::string stem = rc.out_dir + "/heatmap_L" +
                                     std::to_string(li) + "H" +
                                     std::to_string(h);
            heatmap_to_csv(map, stem + ".csv");
            heatmap_to_pgm(map, stem + ".pgm");
            const double band = band_fraction(map, halfwidth);
            mean_band += band;
            std::cout << "layer " << li << " head " << h << ": band mass "
                      << band << " (halfwidth " << halfwidth << ")\n";
        }
    mean_band /= static_cast<double>(hm.maps.size());
    std::cout << "mean band mass " << mean_band << " -> " << rc.out_dir
              << "/heatmap_L*.{csv,pgm}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fiber nonlinearity equalization toolkit"};
    app.require_subcommand(1);

    Options o;
    int mask_ell = 0, mask_block = 0;
    double mask_rho = 0.0;

    auto add_common = [&](CLI::App* cmd, bool needs_model = false) {
        cmd->add_option("-c,--config", o.config_path, "run config file")
            ->required();
        cmd->add_option("-o,--out", o.out_dir, "output directory override");
        cmd->add_option("--seed-override", o.seed_override,
                        "replaces seed_train with N and seed_eval with N+1");
        cmd->add_flag("--desk-scale", o.desk_scale,
                      "clamp spans/symbols/warmup to desk-run sizes");
        if (needs_model)
            cmd->add_option("--model", o.model_path,
                            "checkpoint path (default <out>/model.ckpt)");
    };

    CLI::App* c_sim = app.add_subcommand(
        "simulate", "propagate one frame and report the linear baseline");
    add_common(c_sim);
    CLI::App* c_train = app.add_subcommand(
        "train", "train an equalizer and write the checkpoint");
    add_common(c_train, true);
    CLI::App* c_eval =
        app.add_subcommand("eval", "score a trained checkpoint on a fresh frame");
    add_common(c_eval, true);
    CLI::App* c_sweep = app.add_subcommand(
        "sweep", "q versus launch power for model and linear receiver");
    add_common(c_sweep, true);
    CLI::App* c_grid = app.add_subcommand(
        "grid", "train/evaluate a hyper-parameter grid and its pareto front");
    add_common(c_grid);
    c_grid->add_option("-j,--workers", o.workers, "worker threads");
    CLI::App* c_mask =
        app.add_subcommand("mask", "render an attention mask as pgm + rowlist");
    add_common(c_mask);
    c_mask->add_option("--ell", mask_ell, "attention span override");
    c_mask->add_option("--rho", mask_rho, "mask density override");
    c_mask->add_option("--block", mask_block, "block size override");
    CLI::App* c_rmps = app.add_subcommand(
        "rmps", "per-component multiplication counts and block-size curve");
    add_common(c_rmps);
    CLI::App* c_dbp = app.add_subcommand(
        "dbp", "digital back-propagation baseline over steps-per-span");
    add_common(c_dbp);
    CLI::App* c_heat = app.add_subcommand(
        "heatmap", "batch-averaged attention score maps for a checkpoint");
    add_common(c_heat, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_sim->parsed()) return cmd_simulate(o);
        if (c_train->parsed()) return cmd_train(o);
        if (c_eval->parsed()) return cmd_eval(o);
        if (c_sweep->parsed()) return cmd_sweep(o);
        if (c_grid->parsed()) return cmd_grid(o);
        if (c_mask->parsed()) return cmd_mask(o, mask_ell, mask_rho, mask_block);
        if (c_rmps->parsed()) return cmd_rmps(o);
        if (c_dbp->parsed()) return cmd_dbp(o);
        if (c_heat->parsed()) return cmd_heatmap(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
