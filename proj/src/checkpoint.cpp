#include "fnlc/nn/checkpoint.hpp"

#include <fstream>
#include <sstream>

namespace fnlc {

void save_checkpoint(const std::string& path, const Checkpoint& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FramingError("cannot open " + path + " for writing");
    out << "FNLCCKP1\n";
    out << "meta_bytes " << c.meta.size() << "\n";
    out << "tensor_count " << c.tensors.size() << "\n";
    out << "end\n";
    out.write(c.meta.data(), static_cast<std::streamsize>(c.meta.size()));
    for (const auto& [name, t] : c.tensors) {
        out << "tensor " << name << " " << t.rows() << " " << t.cols() << "\n";
        out.write(reinterpret_cast<const char*>(t.data()),
                  static_cast<std::streamsize>(sizeof(double) * t.size()));
    }
    out << "done\n";
    if (!out) throw FramingError("short write to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FramingError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "FNLCCKP1")
        throw FramingError("bad checkpoint magic in " + path);
    size_t meta_bytes = 0, count = 0;
    bool have_meta = false, have_count = false;
    while (std::getline(in, line)) {
        if (line == "end") break;
        std::stringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "meta_bytes") {
            ss >> meta_bytes;
            have_meta = true;
        } else if (key == "tensor_count") {
            ss >> count;
            have_count = true;
        } else {
            throw FramingError("unknown checkpoint header field '" + key + "'");
        }
    }
    if (!have_meta || !have_count)
        throw FramingError("incomplete checkpoint header in " + path);

    Checkpoint c;
    c.meta.resize(meta_bytes);
    in.read(c.meta.data(), static_cast<std::streamsize>(meta_bytes));
    if (static_cast<size_t>(in.gcount()) != meta_bytes)
        throw FramingError("truncated checkpoint metadata");
    for (size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw FramingError("truncated tensor table");
        std::stringstream ss(line);
        std::string tag, name;
        long rows = 0, cols = 0;
        ss >> tag >> name >> rows >> cols;
        if (tag != "tensor" || name.empty() || rows < 0 || cols < 0)
            throw FramingError("malformed tensor record '" + line + "'");
        MatX t(rows, cols);
        const size_t bytes = sizeof(double) * static_cast<size_t>(t.size());
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(bytes));
        if (static_cast<size_t>(in.gcount()) != bytes)
            throw FramingError("truncated tensor payload for " + name);
        c.tensors.emplace_back(name, std::move(t));
    }
    if (!std::getline(in, line) || line != "done")
        throw FramingError("missing checkpoint terminator");
    return c;
}

}  // namespace fnlc
