#include "sel/sel.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "sel/densities.hpp"
#include "sel/entropy.hpp"
#include "sel/error.hpp"
#include "sel/experiments.hpp"
#include "sel/histogram.hpp"
#include "sel/random.hpp"
#include "sel/special_fns.hpp"

struct sel_density {
    sel::DensityModel model;
};

struct sel_experiment {
    sel::ExperimentResult result;
    std::string summary;
    std::string manifest;
};

namespace {

thread_local std::string last_error;

sel_status to_status(sel::Errc code) {
    using sel::Errc;
    switch (code) {
        case Errc::domain: return SEL_E_DOMAIN;
        case Errc::overflow: return SEL_E_OVERFLOW;
        case Errc::unsupported: return SEL_E_UNSUPPORTED;
        case Errc::divergence: return SEL_E_DIVERGENCE;
        case Errc::tail_mass: return SEL_E_TAIL_MASS;
        case Errc::support_violation: return SEL_E_SUPPORT_VIOLATION;
        case Errc::infeasible: return SEL_E_INFEASIBLE;
        case Errc::non_convergence: return SEL_E_NON_CONVERGENCE;
        case Errc::no_root: return SEL_E_NO_ROOT;
        case Errc::step_floor: return SEL_E_STEP_FLOOR;
        case Errc::stability: return SEL_E_STABILITY;
        case Errc::boundary_leak: return SEL_E_BOUNDARY_LEAK;
        case Errc::monotonicity: return SEL_E_MONOTONICITY;
        case Errc::aliasing: return SEL_E_ALIASING;
        case Errc::constraint_repair: return SEL_E_CONSTRAINT_REPAIR;
        case Errc::empty_sample: return SEL_E_EMPTY_SAMPLE;
        case Errc::validation: return SEL_E_VALIDATION;
    }
    return SEL_E_INTERNAL;
}

sel_status fail(sel_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <class F>
sel_status guard(F&& body) {
    try {
        body();
        last_error.clear();
        return SEL_OK;
    } catch (const sel::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SEL_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SEL_E_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

#define SEL_REQUIRE(cond) \
    if (!(cond)) return fail(SEL_E_INVALID_ARGUMENT, "invalid argument: " #cond)

sel_status scalar(double* out, double (*fn)(double), double x) {
    SEL_REQUIRE(out);
    return guard([&] { *out = fn(x); });
}

}  // namespace

extern "C" {

int sel_status_exit_code(sel_status status) {
    if (status == SEL_OK) return 0;
    if (status == SEL_E_INVALID_ARGUMENT) return 2;
    return static_cast<int>(status) < 20 ? 2 : 3;
}

const char* sel_status_name(sel_status status) {
    switch (status) {
        case SEL_OK: return "ok";
        case SEL_E_INVALID_ARGUMENT: return "invalid argument";
        case SEL_E_INTERNAL: return "internal error";
        case SEL_E_VALIDATION: return sel::to_string(sel::Errc::validation).data();
        case SEL_E_DOMAIN: return sel::to_string(sel::Errc::domain).data();
        case SEL_E_UNSUPPORTED: return sel::to_string(sel::Errc::unsupported).data();
        case SEL_E_TAIL_MASS: return sel::to_string(sel::Errc::tail_mass).data();
        case SEL_E_SUPPORT_VIOLATION: return sel::to_string(sel::Errc::support_violation).data();
        case SEL_E_INFEASIBLE: return sel::to_string(sel::Errc::infeasible).data();
        case SEL_E_STABILITY: return sel::to_string(sel::Errc::stability).data();
        case SEL_E_EMPTY_SAMPLE: return sel::to_string(sel::Errc::empty_sample).data();
        case SEL_E_OVERFLOW: return sel::to_string(sel::Errc::overflow).data();
        case SEL_E_DIVERGENCE: return sel::to_string(sel::Errc::divergence).data();
        case SEL_E_NON_CONVERGENCE: return sel::to_string(sel::Errc::non_convergence).data();
        case SEL_E_NO_ROOT: return sel::to_string(sel::Errc::no_root).data();
        case SEL_E_STEP_FLOOR: return sel::to_string(sel::Errc::step_floor).data();
        case SEL_E_BOUNDARY_LEAK: return sel::to_string(sel::Errc::boundary_leak).data();
        case SEL_E_MONOTONICITY: return sel::to_string(sel::Errc::monotonicity).data();
        case SEL_E_ALIASING: return sel::to_string(sel::Errc::aliasing).data();
        case SEL_E_CONSTRAINT_REPAIR: return sel::to_string(sel::Errc::constraint_repair).data();
    }
    return "unknown status";
}

const char* sel_last_error(void) { return last_error.c_str(); }

const char* sel_version(void) { return "0.1.0"; }

sel_status sel_set_threads(unsigned count) {
    sel::set_thread_count(count);
    return SEL_OK;
}

void sel_string_free(char* s) { std::free(s); }

sel_status sel_ln_gamma(double x, double* out) { return scalar(out, sel::special::ln_gamma, x); }

sel_status sel_digamma(double x, double* out) { return scalar(out, sel::special::digamma, x); }

sel_status sel_bessel_i(double alpha, double z, double* out) {
    SEL_REQUIRE(out);
    return guard([&] { *out = sel::special::bessel_i(alpha, z); });
}

sel_status sel_laguerre(int n, double alpha, double u, double* out) {
    SEL_REQUIRE(out);
    return guard([&] { *out = sel::special::laguerre(n, alpha, u); });
}

sel_status sel_density_from_json(const char* json, sel_density** out) {
    SEL_REQUIRE(json && out);
    return guard([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json);
        } catch (const nlohmann::json::exception&) {
            j = std::string(json);
        }
        const sel::DensityModel m = j.is_string()
                                        ? sel::DensityModel::surmise(sel::surmise_from_string(j.get<std::string>()))
                                        : sel::DensityModel::from_json(j);
        *out = new sel_density{m};
    });
}

sel_status sel_density_surmise(const char* label, sel_density** out) {
    SEL_REQUIRE(label && out);
    return guard([&] { *out = new sel_density{sel::DensityModel::surmise(sel::surmise_from_string(label))}; });
}

void sel_density_free(sel_density* d) { delete d; }

sel_status sel_density_to_json(const sel_density* d, char** out) {
    SEL_REQUIRE(d && out);
    return guard([&] { *out = copy_string(d->model.to_json().dump()); });
}

sel_status sel_density_pdf(const sel_density* d, double s, double* out) {
    SEL_REQUIRE(d && out);
    return guard([&] { *out = d->model.pdf(s); });
}

sel_status sel_density_cdf(const sel_density* d, double s, double* out) {
    SEL_REQUIRE(d && out);
    return guard([&] { *out = d->model.cdf(s); });
}

sel_status sel_density_moment(const sel_density* d, int k, double* out) {
    SEL_REQUIRE(d && out);
    return guard([&] { *out = d->model.moment(k); });
}

sel_status sel_density_entropy_closed(const sel_density* d, double* out) {
    SEL_REQUIRE(d && out);
    return guard([&] { *out = sel::shannon_entropy_closed(d->model); });
}

sel_status sel_density_entropy_quadrature(const sel_density* d, double* out) {
    SEL_REQUIRE(d && out);
    return guard([&] { *out = sel::differential_entropy(d->model); });
}

sel_status sel_density_sample(const sel_density* d, uint64_t seed, uint64_t stream, size_t count, double* out) {
    SEL_REQUIRE(d && out && count > 0);
    return guard([&] {
        sel::Stream rng(seed, stream);
        const auto draws = d->model.sample(rng, count);
        std::memcpy(out, draws.data(), count * sizeof(double));
    });
}

sel_status sel_emit_histogram(const double* samples, size_t count, size_t bins, double lo, double hi,
                              const sel_density* model, char** csv_out) {
    SEL_REQUIRE((samples || count == 0) && csv_out);
    return guard([&] {
        const std::span<const double> s(samples, count);
        *csv_out = copy_string(sel::emit_histogram(s, bins, lo, hi, model ? &model->model : nullptr));
    });
}

size_t sel_command_count(void) { return sel::experiment_commands().size(); }

const char* sel_command_name(size_t index) {
    static const std::vector<std::string> names = sel::experiment_commands();
    return index < names.size() ? names[index].c_str() : nullptr;
}

sel_status sel_run_experiment(const char* command, const char* params_json, uint64_t seed, const char* format,
                              sel_experiment** out) {
    SEL_REQUIRE(command && out);
    return guard([&] {
        sel::ExperimentConfig cfg;
        cfg.command = command;
        cfg.seed = seed;
        cfg.format = sel::io::format_from_string(format ? format : "csv");
        if (params_json && *params_json) {
            try {
                cfg.params = nlohmann::json::parse(params_json);
            } catch (const nlohmann::json::exception& e) {
                throw sel::Error(sel::Errc::validation, std::string("parameters are not valid JSON: ") + e.what());
            }
        }
        auto* e = new sel_experiment{};
        try {
            e->result = sel::run_experiment(cfg);
            e->summary = e->result.summary.dump(2) + "\n";
            e->manifest = e->result.manifest();
        } catch (...) {
            delete e;
            throw;
        }
        *out = e;
    });
}

void sel_experiment_free(sel_experiment* e) { delete e; }

sel_status sel_experiment_artifact_count(const sel_experiment* e, size_t* out) {
    SEL_REQUIRE(e && out);
    *out = e->result.artifacts.size();
    return SEL_OK;
}

sel_status sel_experiment_artifact(const sel_experiment* e, size_t index, const char** name, const char** content,
                                   size_t* length) {
    SEL_REQUIRE(e && index < e->result.artifacts.size());
    const auto& a = e->result.artifacts[index];
    if (name) *name = a.name.c_str();
    if (content) *content = a.content.c_str();
    if (length) *length = a.content.size();
    return SEL_OK;
}

sel_status sel_experiment_summary(const sel_experiment* e, const char** json) {
    SEL_REQUIRE(e && json);
    *json = e->summary.c_str();
    return SEL_OK;
}

sel_status sel_experiment_manifest(const sel_experiment* e, const char** json) {
    SEL_REQUIRE(e && json);
    *json = e->manifest.c_str();
    return SEL_OK;
}

sel_status sel_experiment_seconds(const sel_experiment* e, double* out) {
    SEL_REQUIRE(e && out);
    *out = e->result.seconds;
    return SEL_OK;
}

sel_status sel_experiment_criterion_count(const sel_experiment* e, size_t* out) {
    SEL_REQUIRE(e && out);
    *out = e->result.criteria.size();
    return SEL_OK;
}

sel_status sel_experiment_criterion(const sel_experiment* e, size_t index, int* id, const char** name, int* passed,
                                    const char** detail, double* seconds) {
    SEL_REQUIRE(e && index < e->result.criteria.size());
    const auto& c = e->result.criteria[index];
    if (id) *id = c.id;
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
    if (seconds) *seconds = c.seconds;
    return SEL_OK;
}

sel_status sel_experiment_passed(const sel_experiment* e, int* out) {
    SEL_REQUIRE(e && out);
    *out = e->result.passed() ? 1 : 0;
    return SEL_OK;
}

}  // extern "C"
