#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "sel/error.hpp"
#include "sel/experiments.hpp"
#include "sel/io.hpp"
#include "sel/random.hpp"

using namespace sel;
using nlohmann::json;

namespace {

ExperimentResult run(const std::string& command, json params, std::uint64_t seed = 7,
                     io::Format format = io::Format::csv) {
    ExperimentConfig cfg;
    cfg.command = command;
    cfg.params = std::move(params);
    cfg.seed = seed;
    cfg.format = format;
    return run_experiment(cfg);
}

const Artifact* find(const ExperimentResult& r, const std::string& name) {
    for (const auto& a : r.artifacts)
        if (a.name == name) return &a;
    return nullptr;
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::validation;
}

}  // namespace

TEST(Experiments, CommandList) {
    const std::vector<std::string> expect{"catalog",   "entropy-table", "coarse-grain", "maxent",
                                          "kl-fit",    "spacing",       "dyson",        "bou",
                                          "fp-thermo", "calogero",      "verify"};
    auto got = experiment_commands();
    std::sort(got.begin(), got.end());
    auto want = expect;
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
    EXPECT_EQ(code_of([] { run("nonsense", json::object()); }), Errc::validation);
}

TEST(Experiments, UnknownParameterRejected) {
    EXPECT_EQ(code_of([] { run("spacing", {{"samles", 10}}); }), Errc::validation);
    EXPECT_EQ(code_of([] { run("spacing", {{"ensemble", "goa"}}); }), Errc::validation);
    EXPECT_EQ(code_of([] { run("spacing", {{"samples", -3}}); }), Errc::validation);
}

TEST(Experiments, Catalog) {
    const auto r = run("catalog", json::object());
    ASSERT_FALSE(r.artifacts.empty());
    EXPECT_EQ(r.artifacts.back().name, "summary.json");
    EXPECT_NE(find(r, "catalog.csv"), nullptr);
    const auto m = json::parse(r.manifest());
    EXPECT_EQ(m["command"], "catalog");
    EXPECT_EQ(m["artifacts"].size(), r.artifacts.size());
    for (std::size_t i = 0; i < r.artifacts.size(); ++i) {
        EXPECT_EQ(m["artifacts"][i]["sha256"], io::sha256_hex(r.artifacts[i].content));
        EXPECT_EQ(m["artifacts"][i]["bytes"], r.artifacts[i].content.size());
    }
}

TEST(Experiments, EntropyTable) {
    const auto r = run("entropy-table", {{"family", "all"}});
    const auto* t = find(r, "entropy_table.csv");
    ASSERT_NE(t, nullptr);
    EXPECT_EQ(t->content.substr(0, t->content.find('\n')), "label,S_closed,S_quadrature,abs_diff");
    EXPECT_NE(t->content.find("goe,"), std::string::npos);
}

TEST(Experiments, CoarseGrainAndMaxent) {
    const auto cg = run("coarse-grain", {{"density", "goe"}, {"cells", 32}, {"doublings", 2}});
    EXPECT_NE(find(cg, "coarse_grain.csv"), nullptr);
    const auto me = run("maxent", {{"constraints", {{"moments", {{{"k", 1}, {"m", 0.5}}}}}}});
    EXPECT_NE(find(me, "maxent_trace.csv"), nullptr);
    const auto sol = json::parse(find(me, "maxent_solution.json")->content);
    EXPECT_TRUE(sol["converged"].get<bool>());
    EXPECT_EQ(code_of([] {
                  run("maxent", {{"constraints", {{"moments", {{{"k", 1}, {"m", 1.0}}, {{"k", 2}, {"m", 2.5}}}}}}});
              }),
              Errc::infeasible);
    const auto ba = run("maxent", {{"mode", "balian"}, {"perturbations", 5}});
    EXPECT_NE(find(ba, "balian.json"), nullptr);
}

TEST(Experiments, KlFit) {
    const auto r = run("kl-fit", {{"lambda", 1.0}});
    EXPECT_NE(find(r, "kl_fit.csv"), nullptr);
    EXPECT_EQ(code_of([] { run("kl-fit", {{"lambda", 1.0}, {"theta", 0.2}}); }), Errc::validation);
}

TEST(Experiments, MonteCarloCommands) {
    const auto sp = run("spacing", {{"ensemble", "gue"}, {"samples", 2000}, {"bins", 20}});
    EXPECT_NE(find(sp, "spacing_hist.csv"), nullptr);
    const auto dy = run("dyson", {{"paths", 100}, {"t_final", 1.0}});
    EXPECT_NE(find(dy, "dyson_moments.csv"), nullptr);
    const auto bo = run("bou", {{"paths", 500}, {"t_final", 2.0}, {"kernel_nodes", 100}});
    EXPECT_NE(find(bo, "bou_hist.csv"), nullptr);
}

TEST(Experiments, FpThermoAndCalogero) {
    const auto fp = run("fp-thermo", {{"potential", "harmonic"}, {"t_final", 0.5}});
    const auto* t = find(fp, "thermo.csv");
    ASSERT_NE(t, nullptr);
    EXPECT_EQ(t->content.substr(0, 5), "t,S,U");
    const auto ca = run("calogero", {{"form", "singular"}, {"coupling", 1.0}, {"n_max", 1}, {"nodes", 2000}});
    EXPECT_NE(find(ca, "calogero_scan.csv"), nullptr);
}

TEST(Experiments, JsonFormat) {
    const auto r = run("spacing", {{"samples", 1000}, {"bins", 10}}, 7, io::Format::json);
    const auto* h = find(r, "spacing_hist.json");
    ASSERT_NE(h, nullptr);
    const auto j = json::parse(h->content);
    EXPECT_EQ(j["bins"].size(), 10u);
}

TEST(Experiments, DeterministicManifest) {
    const json params{{"ensemble", "goe"}, {"samples", 5000}, {"export_samples", true}};
    set_thread_count(1);
    const auto a = run("spacing", params, 11);
    set_thread_count(4);
    const auto b = run("spacing", params, 11);
    set_thread_count(0);
    EXPECT_EQ(a.manifest(), b.manifest());
    const auto c = run("spacing", params, 12);
    EXPECT_NE(a.manifest(), c.manifest());
}

TEST(Experiments, DysonThreadIndependent) {
    const json params{{"paths", 64}, {"t_final", 0.5}, {"n", 3}};
    set_thread_count(1);
    const auto a = run("dyson", params, 3);
    set_thread_count(3);
    const auto b = run("dyson", params, 3);
    set_thread_count(0);
    EXPECT_EQ(a.manifest(), b.manifest());
}
