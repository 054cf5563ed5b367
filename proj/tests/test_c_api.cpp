#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "sel/sel.h"

namespace {

struct Density {
    sel_density* d = nullptr;
    ~Density() { sel_density_free(d); }
};

struct Experiment {
    sel_experiment* e = nullptr;
    ~Experiment() { sel_experiment_free(e); }
};

}  // namespace

TEST(CApi, StatusHelpers) {
    EXPECT_EQ(sel_status_exit_code(SEL_OK), 0);
    EXPECT_EQ(sel_status_exit_code(SEL_E_VALIDATION), 2);
    EXPECT_EQ(sel_status_exit_code(SEL_E_INVALID_ARGUMENT), 2);
    EXPECT_EQ(sel_status_exit_code(SEL_E_DOMAIN), 2);
    EXPECT_EQ(sel_status_exit_code(SEL_E_NO_ROOT), 3);
    EXPECT_EQ(sel_status_exit_code(SEL_E_INTERNAL), 3);
    EXPECT_STREQ(sel_status_name(SEL_OK), "ok");
    EXPECT_STREQ(sel_status_name(SEL_E_ALIASING), "aliasing");
    EXPECT_GT(std::strlen(sel_version()), 0u);
}

TEST(CApi, SpecialFunctions) {
    double v = 0.0;
    ASSERT_EQ(sel_ln_gamma(5.0, &v), SEL_OK);
    EXPECT_NEAR(v, std::log(24.0), 1e-13);
    ASSERT_EQ(sel_digamma(1.0, &v), SEL_OK);
    EXPECT_NEAR(v, -0.5772156649015329, 1e-14);
    ASSERT_EQ(sel_bessel_i(0.5, 1.0, &v), SEL_OK);
    EXPECT_NEAR(v, std::sqrt(2.0 / M_PI) * std::sinh(1.0), 1e-12);
    ASSERT_EQ(sel_laguerre(1, 0.0, 0.25, &v), SEL_OK);
    EXPECT_DOUBLE_EQ(v, 0.75);
}

TEST(CApi, ErrorsLeaveOutputUntouched) {
    double v = 42.0;
    EXPECT_EQ(sel_ln_gamma(-1.0, &v), SEL_E_DOMAIN);
    EXPECT_EQ(v, 42.0);
    EXPECT_NE(std::string(sel_last_error()).find("domain"), std::string::npos);
    EXPECT_EQ(sel_ln_gamma(1.0, nullptr), SEL_E_INVALID_ARGUMENT);
    EXPECT_EQ(sel_bessel_i(0.0, 800.0, &v), SEL_E_OVERFLOW);
    ASSERT_EQ(sel_ln_gamma(1.0, &v), SEL_OK);
    EXPECT_STREQ(sel_last_error(), "");
}

TEST(CApi, LastErrorIsPerThread) {
    double v = 0.0;
    sel_ln_gamma(-1.0, &v);
    std::string other;
    std::thread t([&] { other = sel_last_error(); });
    t.join();
    EXPECT_TRUE(other.empty());
    EXPECT_FALSE(std::string(sel_last_error()).empty());
}

TEST(CApi, DensityHandle) {
    Density goe;
    ASSERT_EQ(sel_density_surmise("goe", &goe.d), SEL_OK);
    double v = 0.0;
    ASSERT_EQ(sel_density_pdf(goe.d, 1.0, &v), SEL_OK);
    EXPECT_NEAR(v, M_PI / 2.0 * std::exp(-M_PI / 4.0), 1e-15);
    ASSERT_EQ(sel_density_moment(goe.d, 1, &v), SEL_OK);
    EXPECT_NEAR(v, 1.0, 1e-13);
    ASSERT_EQ(sel_density_cdf(goe.d, 1e6, &v), SEL_OK);
    EXPECT_NEAR(v, 1.0, 1e-15);
    double closed = 0.0, quad = 0.0;
    ASSERT_EQ(sel_density_entropy_quadrature(goe.d, &quad), SEL_OK);
    EXPECT_NEAR(quad, 0.71624288952606, 1e-8);
    EXPECT_EQ(sel_density_entropy_closed(goe.d, &closed), SEL_E_UNSUPPORTED);
    Density erl;
    ASSERT_EQ(sel_density_from_json(R"({"kind":"erlang","params":{"rate":2.0,"shape":2}})", &erl.d), SEL_OK);
    ASSERT_EQ(sel_density_entropy_closed(erl.d, &closed), SEL_OK);
    ASSERT_EQ(sel_density_entropy_quadrature(erl.d, &quad), SEL_OK);
    EXPECT_NEAR(closed, quad, 1e-10);

    char* text = nullptr;
    ASSERT_EQ(sel_density_to_json(goe.d, &text), SEL_OK);
    Density back;
    ASSERT_EQ(sel_density_from_json(text, &back.d), SEL_OK);
    sel_string_free(text);
    ASSERT_EQ(sel_density_pdf(back.d, 0.7, &v), SEL_OK);
    double w = 0.0;
    sel_density_pdf(goe.d, 0.7, &w);
    EXPECT_EQ(v, w);

    Density bad;
    EXPECT_EQ(sel_density_surmise("nope", &bad.d), SEL_E_VALIDATION);
    EXPECT_EQ(bad.d, nullptr);
    EXPECT_EQ(sel_density_pdf(nullptr, 1.0, &v), SEL_E_INVALID_ARGUMENT);
}

TEST(CApi, DensityFromJsonObject) {
    Density d;
    ASSERT_EQ(sel_density_from_json(R"({"kind":"erlang","params":{"rate":2.0,"shape":2}})", &d.d), SEL_OK);
    double v = 0.0;
    ASSERT_EQ(sel_density_moment(d.d, 1, &v), SEL_OK);
    EXPECT_NEAR(v, 1.0, 1e-13);
    Density e;
    EXPECT_EQ(sel_density_from_json(R"({"kind":"erlang","params":{"rate":-2.0,"shape":2}})", &e.d), SEL_E_VALIDATION);
}

TEST(CApi, SampleAndHistogram) {
    Density goe;
    sel_density_surmise("goe", &goe.d);
    std::vector<double> a(20000), b(20000);
    ASSERT_EQ(sel_density_sample(goe.d, 5, 0, a.size(), a.data()), SEL_OK);
    ASSERT_EQ(sel_density_sample(goe.d, 5, 0, b.size(), b.data()), SEL_OK);
    EXPECT_EQ(a, b);
    char* csv = nullptr;
    ASSERT_EQ(sel_emit_histogram(a.data(), a.size(), 20, 0.0, 4.0, goe.d, &csv), SEL_OK);
    const std::string text(csv);
    sel_string_free(csv);
    EXPECT_EQ(text.rfind("bin_left,bin_right,empirical_density,model_density,abs_diff\n", 0), 0u);
    EXPECT_NE(text.find("summary,L1,"), std::string::npos);
    EXPECT_EQ(sel_emit_histogram(a.data(), a.size(), 20, 1.0, 1.0, goe.d, &csv), SEL_E_VALIDATION);
    EXPECT_EQ(sel_emit_histogram(nullptr, 0, 20, 0.0, 1.0, nullptr, &csv), SEL_E_EMPTY_SAMPLE);
}

TEST(CApi, CommandList) {
    ASSERT_EQ(sel_command_count(), 11u);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < sel_command_count(); ++i) names.emplace_back(sel_command_name(i));
    EXPECT_NE(std::find(names.begin(), names.end(), "verify"), names.end());
    EXPECT_EQ(sel_command_name(99), nullptr);
}

TEST(CApi, RunExperiment) {
    Experiment ex;
    ASSERT_EQ(sel_run_experiment("spacing", R"({"samples":2000,"bins":20})", 9, "csv", &ex.e), SEL_OK);
    std::size_t count = 0;
    ASSERT_EQ(sel_experiment_artifact_count(ex.e, &count), SEL_OK);
    ASSERT_GE(count, 2u);
    const char* name = nullptr;
    const char* content = nullptr;
    std::size_t length = 0;
    ASSERT_EQ(sel_experiment_artifact(ex.e, count - 1, &name, &content, &length), SEL_OK);
    EXPECT_STREQ(name, "summary.json");
    EXPECT_EQ(std::strlen(content), length);
    EXPECT_EQ(sel_experiment_artifact(ex.e, count, &name, &content, &length), SEL_E_INVALID_ARGUMENT);
    const char* manifest = nullptr;
    ASSERT_EQ(sel_experiment_manifest(ex.e, &manifest), SEL_OK);
    EXPECT_NE(std::string(manifest).find("sha256"), std::string::npos);
    std::size_t criteria = 1;
    ASSERT_EQ(sel_experiment_criterion_count(ex.e, &criteria), SEL_OK);
    EXPECT_EQ(criteria, 0u);
    int passed = 0;
    ASSERT_EQ(sel_experiment_passed(ex.e, &passed), SEL_OK);
    EXPECT_EQ(passed, 1);

    Experiment again;
    ASSERT_EQ(sel_run_experiment("spacing", R"({"samples":2000,"bins":20})", 9, nullptr, &again.e), SEL_OK);
    const char* manifest2 = nullptr;
    sel_experiment_manifest(again.e, &manifest2);
    EXPECT_STREQ(manifest, manifest2);
}

TEST(CApi, RunExperimentErrors) {
    Experiment ex;
    EXPECT_EQ(sel_run_experiment("spacing", "{not json", 1, "csv", &ex.e), SEL_E_VALIDATION);
    EXPECT_EQ(sel_run_experiment("spacing", R"({"bogus":1})", 1, "csv", &ex.e), SEL_E_VALIDATION);
    EXPECT_EQ(sel_run_experiment("spacing", nullptr, 1, "xml", &ex.e), SEL_E_VALIDATION);
    EXPECT_EQ(sel_run_experiment(nullptr, nullptr, 1, "csv", &ex.e), SEL_E_INVALID_ARGUMENT);
    EXPECT_EQ(ex.e, nullptr);
    const char* tab = R"({"reference":"poisson","aux":{"xs":[0,1,10],"values":[0,1,1]},"theta":5})";
    EXPECT_EQ(sel_run_experiment("kl-fit", tab, 1, "csv", &ex.e), SEL_E_NO_ROOT);
    EXPECT_EQ(sel_status_exit_code(SEL_E_NO_ROOT), 3);
}
