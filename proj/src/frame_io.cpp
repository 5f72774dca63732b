#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include "fnlc/channel/dsp.hpp"
#include "fnlc/channel/waveform.hpp"

namespace fnlc {

namespace {

void write_raw(std::ofstream& out, const void* p, size_t bytes) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
}

void read_raw(std::ifstream& in, void* p, size_t bytes, const char* what) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
    if (static_cast<size_t>(in.gcount()) != bytes)
        throw FramingError(std::string("truncated ") + what);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Reads "key value" lines until "end"; unknown keys are rejected so format
// drift is caught loudly.
std::map<std::string, std::string> read_header(std::ifstream& in,
                                               const char* magic) {
    std::string line;
    if (!std::getline(in, line) || line != magic)
        throw FramingError(std::string("bad magic, expected ") + magic);
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        if (line == "end") return kv;
        const auto sp = line.find(' ');
        if (sp == std::string::npos)
            throw FramingError("malformed header line '" + line + "'");
        kv[line.substr(0, sp)] = line.substr(sp + 1);
    }
    throw FramingError("header not terminated");
}

std::string need(const std::map<std::string, std::string>& kv, const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw FramingError(std::string("missing header field ") + key);
    return it->second;
}

}  // namespace

void save_frame(const std::string& path, const SymbolFrame& f) {
    f.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out << "FNLCFRM1\n";
    out << "symbols " << f.rx.rows() << "\n";
    out << "baud_gbaud " << fmt_double(f.baud_gbaud) << "\n";
    out << "modulation " << to_string(f.modulation) << "\n";
    out << "launch_dbm " << fmt_double(f.launch_dbm) << "\n";
    out << "end\n";
    // Column-major doubles, rx block then tx block.
    write_raw(out, f.rx.data(), sizeof(double) * f.rx.size());
    write_raw(out, f.tx.data(), sizeof(double) * f.tx.size());
    if (!out) throw FramingError("short write to " + path);
}

SymbolFrame load_frame(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FramingError("cannot open " + path);
    const auto kv = read_header(in, "FNLCFRM1");
    SymbolFrame f;
    const long n = std::stol(need(kv, "symbols"));
    if (n <= 0) throw FramingError("non-positive symbol count");
    f.baud_gbaud = std::stod(need(kv, "baud_gbaud"));
    f.modulation = modulation_from_string(need(kv, "modulation"));
    f.launch_dbm = std::stod(need(kv, "launch_dbm"));
    f.rx.resize(n, 4);
    f.tx.resize(n, 4);
    read_raw(in, f.rx.data(), sizeof(double) * f.rx.size(), "rx block");
    read_raw(in, f.tx.data(), sizeof(double) * f.tx.size(), "tx block");
    return f;
}

void save_wave(const std::string& path, const DualPolWave& w) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out << "FNLCWAV1\n";
    out << "samples " << w.samples() << "\n";
    out << "fs_thz " << fmt_double(w.fs_thz) << "\n";
    out << "end\n";
    write_raw(out, w.x.data(), sizeof(cplx) * w.x.size());
    write_raw(out, w.y.data(), sizeof(cplx) * w.y.size());
    if (!out) throw FramingError("short write to " + path);
}

DualPolWave load_wave(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FramingError("cannot open " + path);
    const auto kv = read_header(in, "FNLCWAV1");
    DualPolWave w;
    const long n = std::stol(need(kv, "samples"));
    if (n <= 0) throw FramingError("non-positive sample count");
    w.fs_thz = std::stod(need(kv, "fs_thz"));
    w.x.resize(n);
    w.y.resize(n);
    read_raw(in, w.x.data(), sizeof(cplx) * n, "x polarization");
    read_raw(in, w.y.data(), sizeof(cplx) * n, "y polarization");
    return w;
}

}  // namespace fnlc
