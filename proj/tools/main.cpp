#include "common.hpp"

namespace portnet::cli {

void add_global_options(CLI::App* cmd, GlobalArgs& g) {
    g.seed_opt = cmd->add_option("--seed", g.seed, "Random seed for every stochastic stage");
    cmd->add_option("--z0", g.z0, "Reference impedance in ohms")->check(CLI::PositiveNumber);
    cmd->add_option("--grid", g.grid, "Frequency grid lo:hi:points[:log]");
    cmd->add_option("--out", g.out_dir, "Output directory");
    cmd->add_option("--config", g.config_path, "JSON file overriding unset options")
        ->check(CLI::ExistingFile);
    cmd->parse_complete_callback([&g]() {
        if (!g.config_path.empty()) {
            const std::string text = read_text_file(g.config_path);
            g.config = json::parse(text, nullptr, false);
            if (g.config.is_discarded() || !g.config.is_object())
                throw IoError("config file must hold a JSON object: " + g.config_path);
        }
    });
}

FrequencyGrid parse_grid(const std::string& spec) {
    if (spec.empty()) return FrequencyGrid::default_sweep();
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3 && parts.size() != 4)
        throw IoError("grid must be lo:hi:points[:log], got '" + spec + "'");
    bool log_spaced = false;
    if (parts.size() == 4) {
        if (parts[3] == "log") log_spaced = true;
        else if (parts[3] == "lin") log_spaced = false;
        else throw IoError("grid spacing must be log or lin, got '" + parts[3] + "'");
    }
    try {
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const int points = std::stoi(parts[2]);
        return log_spaced ? FrequencyGrid::log_spaced(lo, hi, points)
                          : FrequencyGrid::linear_spaced(lo, hi, points);
    } catch (const std::invalid_argument&) {
        throw IoError("bad grid numbers in '" + spec + "'");
    }
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f << content;
        if (!f) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {
std::vector<std::string> g_argv;
}

void ManifestScope::set_argv(int argc, char** argv) {
    g_argv.assign(argv, argv + argc);
}

ManifestScope::ManifestScope(std::string command, const GlobalArgs& g)
    : start_(std::chrono::steady_clock::now()) {
    m_.version = kVersion;
    m_.command = std::move(command);
    m_.argv = g_argv;
    m_.seed = g.seed;
    json resolved;
    resolved["seed"] = g.seed;
    resolved["z0"] = g.z0;
    resolved["grid"] = g.grid;
    resolved["config"] = g.config;
    m_.config_hash = fnv1a64_hex(resolved.dump());
}

void ManifestScope::finish(const std::filesystem::path& manifest_path) {
    m_.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_manifest(manifest_path, m_);
}

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

void register_simulate(CLI::App& app);
void register_gen_data(CLI::App& app);
void register_train(CLI::App& app);
void register_eval(CLI::App& app);
void register_compose(CLI::App& app);
void register_size(CLI::App& app);
void register_compare(CLI::App& app);

} // namespace portnet::cli

int main(int argc, char** argv) {
    using namespace portnet::cli;
    ManifestScope::set_argv(argc, argv);

    CLI::App app{"Surrogate-modeling toolkit for RF two-port circuits"};
    app.set_version_flag("--version", portnet::kVersion);
    app.require_subcommand(1);

    register_simulate(app);
    register_gen_data(app);
    register_train(app);
    register_eval(app);
    register_compose(app);
    register_size(app);
    register_compare(app);

    int exit_code = 0;
    const int rc = run_guarded([&]() {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            exit_code = app.exit(e) == 0 ? 0 : 2;
        }
    });
    return rc != 0 ? rc : exit_code;
}
