// sel: command-line front end over the C API.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sel/sel.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Kind { integer, real, text, flag, reals, texts };

struct FlagSpec {
    const char* name; // --name; the parameter key swaps '-' for '_'
    Kind kind;
    const char* help;
};

struct CommandSpec {
    const char* name;
    const char* help;
    std::vector<FlagSpec> flags;
};

const std::vector<FlagSpec> kSde{
    {"dt", Kind::real, "base time step"},
    {"dt-min", Kind::real, "smallest step before giving up"},
    {"max-refine", Kind::integer, "drift-based step halvings allowed"},
    {"adaptive", Kind::text, "true or false"},
};

std::vector<FlagSpec> with_sde(std::vector<FlagSpec> flags) {
    flags.insert(flags.end(), kSde.begin(), kSde.end());
    return flags;
}

const std::vector<CommandSpec> kCommands{
    {"catalog", "spacing-law catalog with quadrature checks", {}},
    {"entropy-table", "closed-form versus quadrature entropies",
     {{"family", Kind::text, "all, catalog, erlang, bessel_ou or half_line_gaussian"}}},
    {"coarse-grain", "discrete entropy under grid refinement",
     {{"density", Kind::text, "catalog label or density JSON"},
      {"cells", Kind::integer, "cells on the coarsest grid"},
      {"doublings", Kind::integer, "number of refinements"},
      {"L", Kind::real, "interval length"}}},
    {"maxent", "moment-constrained maximum entropy, or the Gaussian-ensemble minimum-information check",
     {{"mode", Kind::text, "moments or balian"},
      {"moment", Kind::texts, "k=m_k, repeatable"},
      {"lo", Kind::text, "support lower end (number or -inf)"},
      {"hi", Kind::text, "support upper end (number or inf)"},
      {"tol", Kind::real, "moment residual tolerance"},
      {"max-iter", Kind::integer, "Newton iteration cap"},
      {"dyson-index", Kind::integer, "balian: 1, 2 or 4"},
      {"n", Kind::integer, "balian: matrix size"},
      {"scale2", Kind::real, "balian: a^2"},
      {"perturbations", Kind::integer, "balian: random trial densities"}}},
    {"kl-fit", "minimum relative entropy against a reference under <T> = theta",
     {{"reference", Kind::text, "catalog label or density JSON"},
      {"aux", Kind::text, "neg_log or {\"xs\": [...], \"values\": [...]}"},
      {"theta", Kind::real, "target <T>"},
      {"lambda", Kind::real, "multiplier (instead of theta)"},
      {"nodes", Kind::integer, "output grid points"},
      {"x-hi", Kind::real, "output grid end"},
      {"match", Kind::text, "density to compare against"}}},
    {"spacing", "2x2 ensemble spacing statistics",
     {{"ensemble", Kind::text, "goe, gue, gse or ginibre"},
      {"method", Kind::text, "matrix or components"},
      {"samples", Kind::integer, "number of spacings"},
      {"bins", Kind::integer, "histogram bins"},
      {"lo", Kind::real, "histogram lower end"},
      {"hi", Kind::real, "histogram upper end"},
      {"export-samples", Kind::flag, "also write the raw spacings"},
      {"compare", Kind::text, "true or false: two-sample KS against the other construction"}}},
    {"dyson", "Dyson Brownian motion",
     with_sde({{"n", Kind::integer, "number of eigenvalues"},
               {"dyson-index", Kind::integer, "1, 2 or 4"},
               {"t-final", Kind::real, "final time"},
               {"paths", Kind::integer, "independent paths"},
               {"scale2", Kind::real, "a^2 (default beta n)"},
               {"snapshots", Kind::reals, "snapshot times"},
               {"snapshot-count", Kind::integer, "equally spaced snapshots"},
               {"initial", Kind::reals, "initial eigenvalues"},
               {"bins", Kind::integer, "gap histogram bins"},
               {"hi", Kind::real, "gap histogram upper end"},
               {"dump-paths", Kind::integer, "paths written to the trajectory dump"}})},
    {"bou", "Bessel-OU process and its transition kernel",
     with_sde({{"n", Kind::integer, "dimension"},
               {"t-final", Kind::real, "final time"},
               {"paths", Kind::integer, "independent paths"},
               {"r0", Kind::real, "starting radius"},
               {"snapshots", Kind::reals, "snapshot times"},
               {"snapshot-count", Kind::integer, "equally spaced snapshots"},
               {"bins", Kind::integer, "histogram bins"},
               {"hi", Kind::real, "histogram upper end"},
               {"kernel-nodes", Kind::integer, "kernel table points"},
               {"dump-paths", Kind::integer, "paths written to the trajectory dump"}})},
    {"fp-thermo", "Fokker-Planck relaxation thermodynamics",
     {{"potential", Kind::text, "harmonic, bistable, bessel_ou_n, flat or potential JSON"},
      {"stiffness", Kind::real, "harmonic stiffness"},
      {"depth", Kind::real, "bistable depth"},
      {"potential-n", Kind::integer, "bessel_ou_n dimension"},
      {"lo", Kind::real, "grid lower end"},
      {"hi", Kind::real, "grid upper end"},
      {"nodes", Kind::integer, "grid nodes"},
      {"temperature", Kind::real, "T"},
      {"friction", Kind::real, "m beta"},
      {"t-final", Kind::real, "final time"},
      {"report-dt", Kind::real, "report spacing"},
      {"dt-fraction", Kind::real, "time step as a fraction of the stability bound"},
      {"initial-mean", Kind::real, "initial Gaussian centre"},
      {"initial-sd", Kind::real, "initial Gaussian width"},
      {"gibbs-steps", Kind::integer, "steps for the stationarity check"}}},
    {"calogero", "Calogero states and entropic uncertainty",
     {{"form", Kind::text, "singular, two_level or harmonic"},
      {"coupling", Kind::real, "gamma_c (singular) or beta (two_level)"},
      {"n-max", Kind::integer, "highest state"},
      {"x-hi", Kind::real, "grid end"},
      {"nodes", Kind::integer, "grid nodes"},
      {"extension", Kind::text, "odd or even"}}},
    {"verify", "acceptance suite", {{"suite", Kind::text, "acceptance"}}},
};

struct Common {
    std::string config;
    std::string seed;
    std::string out = "sel-out";
    std::string format = "csv";
    unsigned threads = 0;
};

struct Bound {
    std::map<std::string, std::string> text;
    std::map<std::string, std::vector<std::string>> lists;
    std::map<std::string, bool> flags;
};

std::string key_of(const std::string& flag) {
    std::string k = flag;
    for (char& c : k)
        if (c == '-') c = '_';
    return k;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json text_or_json(const std::string& s) {
    if (!s.empty() && (s.front() == '{' || s.front() == '[')) {
        try {
            return json::parse(s);
        } catch (const json::exception& e) {
            throw UsageError("malformed JSON value: " + std::string(e.what()));
        }
    }
    return s;
}

json parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw UsageError("expected true or false, got '" + s + "'");
}

json build_params(const CommandSpec& cmd, const Bound& b, CLI::App& sub) {
    json p = json::object();
    for (const auto& f : cmd.flags) {
        const std::string opt = std::string("--") + f.name;
        if (f.kind == Kind::flag) {
            if (sub.count(opt) > 0) p[key_of(f.name)] = true;
            continue;
        }
        if (sub.count(opt) == 0) continue;
        const std::string key = key_of(f.name);
        if (f.kind == Kind::reals) {
            json arr = json::array();
            for (const auto& v : b.lists.at(f.name)) arr.push_back(std::stod(v));
            p[key] = arr;
            continue;
        }
        if (f.kind == Kind::texts) {
            json arr = json::array();
            for (const auto& v : b.lists.at(f.name)) arr.push_back(v);
            p[key] = arr;
            continue;
        }
        const std::string& v = b.text.at(f.name);
        switch (f.kind) {
            case Kind::integer: p[key] = std::stoll(v); break;
            case Kind::real: p[key] = std::stod(v); break;
            default:
                if (key == "adaptive" || key == "compare") p[key] = parse_bool(v);
                else p[key] = text_or_json(v);
        }
    }
    const std::string name = cmd.name;
    if (name == "maxent" && (p.contains("moment") || p.contains("lo") || p.contains("hi"))) {
        json c{{"lo", p.value("lo", json(0.0))}, {"hi", p.value("hi", json("inf"))}, {"moments", json::array()}};
        for (const char* bound : {"lo", "hi"}) {
            if (c[bound].is_string() && c[bound] != "inf" && c[bound] != "-inf" && c[bound] != "+inf") {
                try {
                    c[bound] = std::stod(c[bound].get<std::string>());
                } catch (const std::exception&) {
                    throw UsageError(std::string("--") + bound + " expects a number or inf");
                }
            }
        }
        for (const auto& m : p.value("moment", json::array())) {
            const auto s = m.get<std::string>();
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw UsageError("--moment expects k=m, got '" + s + "'");
            try {
                c["moments"].push_back({{"k", std::stoi(s.substr(0, eq))}, {"m", std::stod(s.substr(eq + 1))}});
            } catch (const std::exception&) {
                throw UsageError("--moment expects k=m, got '" + s + "'");
            }
        }
        p.erase("moment");
        p.erase("lo");
        p.erase("hi");
        p["constraints"] = c;
    }
    if (name == "fp-thermo" && (p.contains("stiffness") || p.contains("depth") || p.contains("potential_n"))) {
        json pot = p.value("potential", json("harmonic"));
        if (pot.is_string()) pot = json{{"id", pot}};
        if (p.contains("stiffness")) pot["stiffness"] = p["stiffness"];
        if (p.contains("depth")) pot["depth"] = p["depth"];
        if (p.contains("potential_n")) pot["n"] = p["potential_n"];
        p.erase("stiffness");
        p.erase("depth");
        p.erase("potential_n");
        p["potential"] = pot;
    }
    return p;
}

std::uint64_t parse_seed(const std::string& s, const char* origin) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used, 0);
        if (used != s.size() || (!s.empty() && s.front() == '-')) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError(std::string("invalid seed '") + s + "' from " + origin);
    }
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw InputError("cannot write " + path.string());
}

int run_command(const CommandSpec& cmd, const Common& common, const Bound& bound, CLI::App& sub) {
    json params = build_params(cmd, bound, sub);
    std::uint64_t seed = 0;
    if (const char* env = std::getenv("SEL_SEED"); env && *env) seed = parse_seed(env, "SEL_SEED");
    if (sub.count("--seed") > 0) seed = parse_seed(common.seed, "--seed");
    std::string format = common.format;
    fs::path out_dir = common.out;
    if (!common.config.empty()) {
        std::ifstream f(common.config);
        if (!f) throw InputError("cannot read config " + common.config);
        json cfg;
        try {
            cfg = json::parse(f);
        } catch (const json::exception& e) {
            throw InputError("config is not valid JSON: " + std::string(e.what()));
        }
        if (!cfg.is_object()) throw InputError("config must be a JSON object");
        if (cfg.contains("params")) {
            if (cfg.contains("command") && cfg["command"] != cmd.name) {
                throw InputError("config is for command " + cfg["command"].dump());
            }
            if (cfg.contains("seed")) {
                const auto& s = cfg["seed"];
                if (s.is_number_unsigned()) seed = s.get<std::uint64_t>();
                else if (s.is_string()) seed = parse_seed(s.get<std::string>(), "config");
                else throw InputError("config seed must be a nonnegative integer");
            }
            if (cfg.contains("format")) format = cfg["format"].get<std::string>();
            if (cfg.contains("output_dir")) out_dir = cfg["output_dir"].get<std::string>();
            cfg = cfg["params"];
        }
        if (!cfg.is_object()) throw InputError("config params must be a JSON object");
        params.update(cfg);
    }

    if (common.threads > 0) sel_set_threads(common.threads);
    sel_experiment* e = nullptr;
    const std::string params_text = params.dump();
    const sel_status st = sel_run_experiment(cmd.name, params_text.c_str(), seed, format.c_str(), &e);
    if (st != SEL_OK) {
        std::cerr << "sel " << cmd.name << ": " << sel_last_error() << "\n";
        return sel_status_exit_code(st);
    }
    std::unique_ptr<sel_experiment, void (*)(sel_experiment*)> guard(e, sel_experiment_free);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw InputError("cannot create " + out_dir.string() + ": " + ec.message());
    std::size_t count = 0;
    sel_experiment_artifact_count(e, &count);
    for (std::size_t i = 0; i < count; ++i) {
        const char* name = nullptr;
        const char* content = nullptr;
        std::size_t length = 0;
        sel_experiment_artifact(e, i, &name, &content, &length);
        write_file(out_dir / name, std::string(content, length));
    }
    const char* manifest = nullptr;
    sel_experiment_manifest(e, &manifest);
    write_file(out_dir / "manifest.json", manifest);

    std::size_t criteria = 0;
    sel_experiment_criterion_count(e, &criteria);
    if (criteria == 0) {
        const char* summary = nullptr;
        sel_experiment_summary(e, &summary);
        std::cout << summary;
        return 0;
    }
    for (std::size_t i = 0; i < criteria; ++i) {
        int id = 0;
        int passed = 0;
        const char* name = nullptr;
        const char* detail = nullptr;
        double seconds = 0.0;
        sel_experiment_criterion(e, i, &id, &name, &passed, &detail, &seconds);
        std::cout << "criterion " << id << " [" << name << "]: " << (passed ? "PASS" : "FAIL") << " (" << detail
                  << ")\n";
        std::cerr << "criterion " << id << " took " << seconds << " s\n";
    }
    double total = 0.0;
    sel_experiment_seconds(e, &total);
    std::cerr << "total " << total << " s\n";
    int ok = 0;
    sel_experiment_passed(e, &ok);
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sel: spacing, entropy and diffusion laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sel_version()));
    Common common;
    std::map<std::string, Bound> bound;
    std::map<std::string, CLI::App*> subs;
    for (const auto& cmd : kCommands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        subs[cmd.name] = sub;
        sub->add_option("--config", common.config, "JSON config; its values override flags");
        sub->add_option("--seed", common.seed, "64-bit seed (falls back to SEL_SEED, then 0)");
        sub->add_option("--out", common.out, "output directory")->capture_default_str();
        sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--threads", common.threads, "worker threads (0 = all cores)");
        Bound& b = bound[cmd.name];
        for (const auto& f : cmd.flags) {
            const std::string opt = std::string("--") + f.name;
            switch (f.kind) {
                case Kind::flag: sub->add_flag(opt, b.flags[f.name], f.help); break;
                case Kind::integer: sub->add_option(opt, b.text[f.name], f.help)->check(CLI::Number); break;
                case Kind::real: sub->add_option(opt, b.text[f.name], f.help)->check(CLI::Number); break;
                case Kind::text: sub->add_option(opt, b.text[f.name], f.help); break;
                case Kind::reals: sub->add_option(opt, b.lists[f.name], f.help)->check(CLI::Number); break;
                case Kind::texts: sub->add_option(opt, b.lists[f.name], f.help); break;
            }
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    for (const auto& cmd : kCommands) {
        if (!subs[cmd.name]->parsed()) continue;
        try {
            return run_command(cmd, common, bound[cmd.name], *subs[cmd.name]);
        } catch (const UsageError& e) {
            std::cerr << "sel " << cmd.name << ": " << e.what() << "\n";
            return 1;
        } catch (const InputError& e) {
            std::cerr << "sel " << cmd.name << ": " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "sel " << cmd.name << ": " << e.what() << "\n";
            return 3;
        }
    }
    return 1;
}
