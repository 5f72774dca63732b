#include "fnlc/io/config_file.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fnlc {

void TrainConfig::validate() const {
    if (train_symbols < 256) throw ConfigError("train.symbols must be >= 256");
    if (eval_symbols < 256) throw ConfigError("train.eval_symbols must be >= 256");
    if (minibatch_symbols < 1) throw ConfigError("train.minibatch must be >= 1");
    if (max_epochs < 1) throw ConfigError("train.max_epochs must be >= 1");
    if (patience < 1) throw ConfigError("train.patience must be >= 1");
    if (warmup_steps < 1) throw ConfigError("train.warmup_steps must be >= 1");
    if (val_fraction <= 0.0 || val_fraction >= 0.5)
        throw ConfigError("train.val_fraction must be in (0, 0.5)");
    if (seed_train == seed_eval)
        throw ConfigError("train.seed_train and train.seed_eval must differ");
}

void GridSpec::validate() const {
    if (!configured()) return;
    if (embedding.empty() || tap.empty() || d_model.empty() || key_size.empty() ||
        heads.empty() || layers.empty() || d_ff.empty() || window.empty() ||
        rho.empty())
        throw ConfigError("grid lists must all be non-empty");
    for (const auto& e : embedding) embedding_from_string(e);
    if (budget < 0) throw ConfigError("grid.budget must be >= 0");
}

void RunConfig::validate() const {
    link.validate();
    tx.validate();
    model.validate();
    train.validate();
    grid.validate();
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long to_long(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long r = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& item : split_list(v))
        out.push_back(static_cast<int>(to_long(key, item)));
    return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
    return out;
}

void apply_model_key(ModelConfig& m, const std::string& key, const std::string& v,
                     const std::string& path) {
    if (key == "embedding") m.embedding = embedding_from_string(v);
    else if (key == "tap") m.tap = static_cast<int>(to_long(path, v));
    else if (key == "d_model") m.d_model = static_cast<int>(to_long(path, v));
    else if (key == "key_size") m.key_total = static_cast<int>(to_long(path, v));
    else if (key == "heads") m.heads = static_cast<int>(to_long(path, v));
    else if (key == "layers") m.layers = static_cast<int>(to_long(path, v));
    else if (key == "d_ff") m.d_ff = static_cast<int>(to_long(path, v));
    else if (key == "window") m.window = static_cast<int>(to_long(path, v));
    else if (key == "block") m.block = static_cast<int>(to_long(path, v));
    else if (key == "conv_k") m.conv_k = static_cast<int>(to_long(path, v));
    else if (key == "embed_hidden") m.embed_hidden = static_cast<int>(to_long(path, v));
    else if (key == "mask_rho") m.mask_rho = to_double(path, v);
    else if (key == "train_power_dbm") m.train_power_dbm = to_double(path, v);
    else throw ConfigError("unknown key " + path);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig rc;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section at line " + std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            if (section != "link" && section != "tx" && section != "model" &&
                section != "train" && section != "grid" && section != "sweep" &&
                section != "dbp" && section != "run")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        const std::string path = section + "." + key;
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any section");

        if (section == "link") {
            auto& l = rc.link;
            if (key == "span_count") l.span_count = static_cast<int>(to_long(path, v));
            else if (key == "span_km") l.span_km = to_double(path, v);
            else if (key == "atten_db_km") l.atten_db_km = to_double(path, v);
            else if (key == "dispersion_ps_nm_km") l.dispersion_ps_nm_km = to_double(path, v);
            else if (key == "gamma_w_km") l.gamma_w_km = to_double(path, v);
            else if (key == "noise_figure_db") l.noise_figure_db = to_double(path, v);
            else if (key == "wavelength_nm") l.wavelength_nm = to_double(path, v);
            else if (key == "max_nl_phase_deg") l.max_nl_phase_deg = to_double(path, v);
            else if (key == "ase") l.ase_enabled = to_bool(path, v);
            else throw ConfigError("unknown key " + path);
        } else if (section == "tx") {
            auto& t = rc.tx;
            if (key == "baud_gbaud") t.baud_gbaud = to_double(path, v);
            else if (key == "modulation") t.modulation = modulation_from_string(v);
            else if (key == "rolloff") t.rolloff = to_double(path, v);
            else if (key == "oversampling") t.oversampling = static_cast<int>(to_long(path, v));
            else if (key == "launch_dbm") t.launch_dbm = to_double(path, v);
            else if (key == "pre_cd_fraction") t.pre_cd_fraction = to_double(path, v);
            else throw ConfigError("unknown key " + path);
        } else if (section == "model") {
            apply_model_key(rc.model, key, v, path);
        } else if (section == "train") {
            auto& t = rc.train;
            if (key == "symbols") t.train_symbols = to_long(path, v);
            else if (key == "eval_symbols") t.eval_symbols = to_long(path, v);
            else if (key == "minibatch") t.minibatch_symbols = static_cast<int>(to_long(path, v));
            else if (key == "max_epochs") t.max_epochs = static_cast<int>(to_long(path, v));
            else if (key == "patience") t.patience = static_cast<int>(to_long(path, v));
            else if (key == "warmup_steps") t.warmup_steps = to_long(path, v);
            else if (key == "lr_scale") t.lr_scale = to_double(path, v);
            else if (key == "val_fraction") t.val_fraction = to_double(path, v);
            else if (key == "seed_train") t.seed_train = static_cast<std::uint64_t>(to_long(path, v));
            else if (key == "seed_eval") t.seed_eval = static_cast<std::uint64_t>(to_long(path, v));
            else throw ConfigError("unknown key " + path);
        } else if (section == "grid") {
            auto& g = rc.grid;
            if (key == "embedding") g.embedding = split_list(v);
            else if (key == "tap") g.tap = to_int_list(path, v);
            else if (key == "d_model") g.d_model = to_int_list(path, v);
            else if (key == "key_size") g.key_size = to_int_list(path, v);
            else if (key == "heads") g.heads = to_int_list(path, v);
            else if (key == "layers") g.layers = to_int_list(path, v);
            else if (key == "d_ff") g.d_ff = to_int_list(path, v);
            else if (key == "window") g.window = to_int_list(path, v);
            else if (key == "rho") g.rho = to_double_list(path, v);
            else if (key == "budget") g.budget = static_cast<int>(to_long(path, v));
            else throw ConfigError("unknown key " + path);
        } else if (section == "sweep") {
            if (key == "powers_dbm") rc.sweep_powers = to_double_list(path, v);
            else throw ConfigError("unknown key " + path);
        } else if (section == "dbp") {
            if (key == "steps_per_span") rc.dbp_steps = to_int_list(path, v);
            else throw ConfigError("unknown key " + path);
        } else if (section == "run") {
            if (key == "out_dir") rc.out_dir = v;
            else throw ConfigError("unknown key " + path);
        }
    }
    rc.validate();
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

void apply_desk_scale(RunConfig& rc) {
    rc.link.span_count = std::min(rc.link.span_count, 8);
    rc.train.train_symbols = std::min(rc.train.train_symbols, 1L << 15);
    rc.train.eval_symbols = std::min(rc.train.eval_symbols, 1L << 14);
    rc.train.warmup_steps = std::min(rc.train.warmup_steps, 800L);
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string serialize_model_meta(const ModelConfig& cfg) {
    std::ostringstream os;
    os << "embedding " << to_string(cfg.embedding) << "\n"
       << "tap " << cfg.tap << "\n"
       << "d_model " << cfg.d_model << "\n"
       << "key_size " << cfg.key_total << "\n"
       << "heads " << cfg.heads << "\n"
       << "layers " << cfg.layers << "\n"
       << "d_ff " << cfg.d_ff << "\n"
       << "window " << cfg.window << "\n"
       << "block " << cfg.block << "\n"
       << "conv_k " << cfg.conv_k << "\n"
       << "embed_hidden " << cfg.embed_hidden << "\n"
       << "mask_rho " << fmt(cfg.mask_rho) << "\n"
       << "train_power_dbm " << fmt(cfg.train_power_dbm) << "\n";
    return os.str();
}

ModelConfig parse_model_meta(const std::string& text) {
    ModelConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto sp = line.find(' ');
        if (sp == std::string::npos)
            throw FramingError("malformed model meta line '" + line + "'");
        const std::string key = line.substr(0, sp);
        const std::string v = trim(line.substr(sp + 1));
        apply_model_key(cfg, key, v, "meta." + key);
    }
    cfg.validate();
    return cfg;
}

}  // namespace fnlc
