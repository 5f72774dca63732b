#include "fnlc/harness/grid.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "fnlc/harness/scenario.hpp"
#include "fnlc/harness/train.hpp"

namespace fnlc {

std::vector<ModelConfig> expand_grid(const GridSpec& spec, const ModelConfig& base) {
    spec.validate();
    if (!spec.configured()) throw ConfigError("grid section is not configured");
    std::vector<ModelConfig> out;
    for (const auto& emb : spec.embedding)
        for (const int tap : spec.tap)
            for (const int dm : spec.d_model)
                for (const int ks : spec.key_size)
                    for (const int h : spec.heads)
                        for (const int L : spec.layers)
                            for (const int ff : spec.d_ff)
                                for (const int w : spec.window)
                                    for (const double rho : spec.rho) {
                                        ModelConfig m = base;
                                        m.embedding = embedding_from_string(emb);
                                        m.tap = tap;
                                        m.d_model = dm;
                                        m.key_total = ks;
                                        m.heads = h;
                                        m.layers = L;
                                        m.d_ff = ff;
                                        m.window = w;
                                        m.mask_rho = rho;
                                        m.validate();
                                        out.push_back(m);
                                        if (spec.budget > 0 &&
                                            static_cast<int>(out.size()) >=
                                                spec.budget)
                                            return out;
                                    }
    return out;
}

std::vector<GridRow> grid_search(const RunConfig& rc, int workers,
                                 std::ostream& log) {
    const std::vector<ModelConfig> cells = expand_grid(rc.grid, rc.model);
    std::mutex log_mu;
    {
        std::lock_guard<std::mutex> lk(log_mu);
        log << "grid: " << cells.size() << " configs, " << workers
            << " workers\n";
    }

    const SymbolFrame train_frame = simulate_frame(
        rc.link, rc.tx, rc.train.train_symbols, rc.train.seed_train);
    const SymbolFrame eval_frame = simulate_frame(
        rc.link, rc.tx, rc.train.eval_symbols, rc.train.seed_eval);

    std::vector<GridRow> rows(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            GridRow& row = rows[i];
            row.model = cells[i];
            row.model.train_power_dbm = rc.tx.launch_dbm;
            try {
                Model<double> m(row.model);
                m.init(rc.train.seed_train);
                const Dataset ds =
                    build_dataset_dual(train_frame, m.cfg.tap, m.cfg.block);
                const TrainResult tr = train_model(m, ds, rc.train);
                row.eval = evaluate_frame(m, eval_frame);
                std::lock_guard<std::mutex> lk(log_mu);
                log << "grid cell " << config_id(row.model) << ": q "
                    << row.eval.q_db << " dB after " << tr.epochs_run
                    << " epochs\n";
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
                std::lock_guard<std::mutex> lk(log_mu);
                log << "grid cell " << config_id(row.model) << " failed: "
                    << e.what() << "\n";
            }
        }
    };

    workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

void write_results_csv(const std::string& path, const std::vector<GridRow>& rows) {
    std::ofstream out(path);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out << "config_id,mask,rho,tap,d_model,d_k,heads,layers,d_ff,window,block,"
           "rmps_total,launch_power_dbm,q_db\n";
    out.precision(10);
    for (const auto& r : rows) {
        if (r.failed) continue;
        const auto& m = r.model;
        out << r.eval.config_id << "," << (m.masked() ? 1 : 0) << ","
            << m.mask_rho << "," << m.tap << "," << m.d_model << "," << m.d_k()
            << "," << m.heads << "," << m.layers << "," << m.d_ff << ","
            << m.window << "," << m.block << "," << r.eval.rmps_total << ","
            << r.eval.launch_dbm << "," << r.eval.q_db << "\n";
    }
}

std::vector<GridRow> pareto_envelope(const std::vector<GridRow>& rows) {
    std::vector<GridRow> ok;
    for (const auto& r : rows)
        if (!r.failed) ok.push_back(r);
    std::sort(ok.begin(), ok.end(), [](const GridRow& a, const GridRow& b) {
        if (a.eval.rmps_total != b.eval.rmps_total)
            return a.eval.rmps_total < b.eval.rmps_total;
        return a.eval.q_db > b.eval.q_db;
    });
    std::vector<GridRow> env;
    double best_q = -1e300;
    for (const auto& r : ok) {
        if (r.eval.q_db > best_q) {
            env.push_back(r);
            best_q = r.eval.q_db;
        }
    }
    return env;
}

void write_envelope_csv(const std::string& path, const std::vector<GridRow>& rows) {
    std::ofstream out(path);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out << "rmps_total,q_db,config_id\n";
    out.precision(10);
    for (const auto& r : rows)
        out << r.eval.rmps_total << "," << r.eval.q_db << "," << r.eval.config_id
            << "\n";
}

}  // namespace fnlc
