#include "fnlc/harness/dataset.hpp"

#include "fnlc/channel/pulse.hpp"
#include "fnlc/channel/ssfm.hpp"
#include "fnlc/harness/scenario.hpp"

namespace fnlc {

SymbolFrame simulate_frame(const LinkConfig& link, TxConfig tx, long symbols,
                           std::uint64_t seed, const RxOptions& opt) {
    tx.symbol_count = static_cast<int>(symbols);
    tx.seed = seed;
    tx.validate();
    link.validate();
    const DualPolSymbols syms =
        generate_symbols(tx.symbol_count, tx.modulation, seed);
    DualPolWave w = shape_transmit(syms, tx, link);
    propagate(w, link, seed);
    return receive(w, tx, link, syms, opt);
}

Dataset build_dataset(const SymbolFrame& frame, int tap, int block) {
    frame.validate();
    if (tap < 1 || block < 1)
        throw ConfigError("dataset tap and block must be >= 1");
    const long n = frame.symbols();
    if (n < block + 2L * tap)
        throw ShapeError("frame too short: need at least block + 2*tap symbols");
    Dataset ds;
    ds.rx = frame.rx;
    ds.tx = frame.tx;
    ds.tap = tap;
    ds.block = block;
    ds.modulation = frame.modulation;
    ds.launch_dbm = frame.launch_dbm;
    const long count = (n - 2L * tap) / block;
    ds.starts.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) ds.starts.push_back(tap + i * block);
    return ds;
}

Dataset build_dataset_dual(const SymbolFrame& frame, int tap, int block) {
    Dataset ds = build_dataset(frame, tap, block);
    const SymbolFrame swapped = swap_polarization(frame);
    const long n = frame.symbols();
    MatX rx(2 * n, 4), tx(2 * n, 4);
    rx << ds.rx, swapped.rx;
    tx << ds.tx, swapped.tx;
    ds.rx = std::move(rx);
    ds.tx = std::move(tx);
    std::vector<long> starts;
    starts.reserve(2 * ds.starts.size());
    for (const long s : ds.starts) {
        starts.push_back(s);
        starts.push_back(s + n);
    }
    ds.starts = std::move(starts);
    return ds;
}

}  // namespace fnlc
