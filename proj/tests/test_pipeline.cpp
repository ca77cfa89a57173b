#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "qmorse/errors.hpp"
#include "qmorse/pipeline.hpp"
#include "qmorse/report.hpp"

using namespace qmorse;

namespace {

std::shared_ptr<const FunctionSpec> make_spec(int dim, int k, const std::string& expr,
                                              double radius = 1.0) {
    return std::make_shared<const FunctionSpec>(dim, k, expr, radius);
}

std::string temp_path(const std::string& name) {
    return std::string("qmorse_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

bool has_stage(const AnalysisResult& res, const std::string& name) {
    return std::any_of(res.stage_ms.begin(), res.stage_ms.end(),
                       [&](const auto& p) { return p.first == name && p.second >= 0.0; });
}

}  // namespace

TEST_CASE("analyze validates its options") {
    auto f = make_spec(2, 3, "x1^2 + x2^2");
    AnalyzeOptions opt;
    opt.epsilon = 0.0;
    CHECK_THROWS_AS((void)analyze(f, opt), DomainError);
    opt = AnalyzeOptions{};
    opt.grid = 7;
    CHECK_THROWS_AS((void)analyze(f, opt), DomainError);
    opt = AnalyzeOptions{};
    opt.newton_tol = 0.0;
    CHECK_THROWS_AS((void)analyze(f, opt), DomainError);
    opt = AnalyzeOptions{};
    opt.quadrature_max = 15;
    CHECK_THROWS_AS((void)analyze(f, opt), DomainError);
}

TEST_CASE("round quadratic passes the full pipeline") {
    auto f = make_spec(2, 3, "x1^2 + x2^2");
    AnalyzeOptions opt;
    opt.grid = 24;
    AnalysisResult res = analyze(f, opt);

    CHECK_FALSE(res.affine);
    CHECK(res.has_constants);
    REQUIRE(res.has_regular_value);
    CHECK(res.rv.v[0] == 0.0);
    CHECK(res.rv.v[1] == 0.0);
    CHECK(res.perturbed);
    REQUIRE(res.pert.bump_centers.size() == 1);

    REQUIRE(res.iso.certificates.size() == 1);
    CHECK(res.iso.near_degenerate.empty());
    CHECK(res.iso.certificates[0].morse_index == 0);

    REQUIRE(res.charts.size() == 1);
    CHECK(res.charts[0].l == 2);
    CHECK(res.charts[0].radius == res.mc.psi3);

    REQUIRE(res.verification.items.size() == 5);
    const char* labels[] = {"i", "ii", "iii", "iv", "v"};
    for (int i = 0; i < 5; ++i) {
        CHECK(res.verification.items[i].label == labels[i]);
        CHECK(res.verification.items[i].pass);
        CHECK(res.verification.items[i].witness.empty());
    }
    CHECK(res.verification.all_pass());

    for (const char* stage : {"budget", "constants", "regular_value", "isolate", "perturb",
                              "re_isolate", "charts", "verify"})
        CHECK(has_stage(res, stage));
}

TEST_CASE("cubic's regular value empties the critical set") {
    auto f = make_spec(1, 3, "x1^3");
    AnalyzeOptions opt;
    AnalysisResult res = analyze(f, opt);

    CHECK_FALSE(res.affine);
    REQUIRE(res.has_regular_value);
    // Distance maximization against the near-degenerate sample at Df = 0+
    // lands on the negative extreme, and 3x^2 = v < 0 has no roots.
    CHECK(res.rv.v[0] == doctest::Approx(-0.04375).epsilon(1e-12));
    CHECK(res.perturbed);
    CHECK(res.pert.bump_centers.empty());
    CHECK(res.iso.certificates.empty());
    CHECK(res.iso.near_degenerate.empty());
    CHECK(res.charts.empty());
    CHECK(res.verification.all_pass());
}

TEST_CASE("quartic gains a single off-origin certificate through perturbation") {
    auto f = make_spec(2, 4, "x1^4 + x2^2");
    AnalyzeOptions opt;
    AnalysisResult res = analyze(f, opt);

    REQUIRE(res.has_regular_value);
    CHECK(res.rv.v[0] == doctest::Approx(-0.04375).epsilon(1e-12));
    CHECK(res.rv.v[1] == doctest::Approx(0.0).epsilon(1e-15));

    REQUIRE(res.iso.certificates.size() == 1);
    const CriticalCertificate& cert = res.iso.certificates[0];
    CHECK(cert.point[0] == doctest::Approx(-0.2219760004356502).epsilon(1e-9));
    CHECK(cert.point[1] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(cert.morse_index == 0);
    double lo = *std::min_element(cert.hess_spectrum.begin(), cert.hess_spectrum.end());
    double hi = *std::max_element(cert.hess_spectrum.begin(), cert.hess_spectrum.end());
    CHECK(lo == doctest::Approx(0.5912801372328933).epsilon(1e-8));
    CHECK(hi == doctest::Approx(2.0).epsilon(1e-10));

    REQUIRE(res.charts.size() == 1);
    CHECK(res.charts[0].l == 2);
    CHECK(res.verification.all_pass());
}

TEST_CASE("unperturbed quartic fails the Hessian floor with a witness") {
    auto f = make_spec(2, 4, "x1^4 + x2^2");
    AnalyzeOptions opt;
    opt.no_perturb = true;
    AnalysisResult res = analyze(f, opt);

    CHECK_FALSE(res.perturbed);
    CHECK(res.iso.certificates.empty());
    REQUIRE(res.iso.near_degenerate.size() >= 1);
    for (const NearDegenerateReport& rep : res.iso.near_degenerate)
        CHECK(std::abs(rep.point[0]) < 1e-3);

    CHECK_FALSE(res.verification.all_pass());
    REQUIRE(!res.verification.items.empty());
    const VerificationItem& first = res.verification.items[0];
    CHECK(first.label == "i");
    CHECK_FALSE(first.pass);
    CHECK(first.witness.find("sigma_min") != std::string::npos);
}

TEST_CASE("affine fields skip the ledger and pass vacuously") {
    auto f = make_spec(2, 3, "x1 + 2");
    AnalyzeOptions opt;
    opt.grid = 16;
    AnalysisResult res = analyze(f, opt);

    CHECK(res.affine);
    CHECK_FALSE(res.has_constants);
    CHECK_FALSE(res.has_regular_value);
    CHECK_FALSE(res.perturbed);
    CHECK(res.iso.certificates.empty());
    CHECK(res.charts.empty());
    CHECK(res.verification.all_pass());
}

TEST_CASE("symmetric wells pass the value-gap verdict within rounding slack") {
    // The measured C1 drives psi2 below double resolution here, and the bump
    // coefficients underflow against the O(1) well values: both wells keep
    // bitwise-equal critical values. That must not fail verdict (iii).
    auto f = make_spec(2, 4, "(x1^2 - 0.25)^2 + x2^2");
    AnalysisResult res = analyze(f, AnalyzeOptions{});

    REQUIRE(res.iso.certificates.size() == 3);
    std::vector<double> well_values;
    for (const CriticalCertificate& c : res.iso.certificates)
        if (c.morse_index == 0) well_values.push_back(c.value);
    REQUIRE(well_values.size() == 2);
    CHECK(well_values[0] == well_values[1]);
    CHECK(res.mc.psi2 > 0.0);
    CHECK(res.mc.psi2 < 1e-30);
    CHECK(res.verification.items[2].pass);
    CHECK(res.verification.all_pass());
}

TEST_CASE("rendered reports verify cleanly and notice tampering") {
    std::string spec_text = "{\"dim\": 2, \"k\": 3, \"expr\": \"x1^2 + x2^2\", \"radius\": 1.0}";
    std::string spec_path = temp_path("roundtrip.json");
    write_file(spec_path, spec_text);

    auto f = make_spec(2, 3, "x1^2 + x2^2");
    AnalyzeOptions opt;
    opt.grid = 24;
    AnalysisResult res = analyze(f, opt);
    std::string report = render_report(*f, res, opt, spec_path, fnv1a_hex(spec_text));

    std::ostringstream log;
    CHECK(verify_report(report, log) == VerifyStatus::Ok);

    SUBCASE("flipping the verdict is a mismatch") {
        std::string broken = report;
        auto pos = broken.find("\"all_pass\": true");
        REQUIRE(pos != std::string::npos);
        broken.replace(pos, 16, "\"all_pass\": false");
        std::ostringstream log2;
        CHECK(verify_report(broken, log2) == VerifyStatus::Mismatch);
    }

    SUBCASE("editing the recorded input invalidates the digest") {
        write_file(spec_path, "{\"dim\": 2, \"k\": 3, \"expr\": \"x1^2 - x2^2\"}");
        std::ostringstream log2;
        CHECK(verify_report(report, log2) == VerifyStatus::Invalid);
        write_file(spec_path, spec_text);
    }

    SUBCASE("a missing input file skips digest binding") {
        std::remove(spec_path.c_str());
        std::ostringstream log2;
        CHECK(verify_report(report, log2) == VerifyStatus::Ok);
        write_file(spec_path, spec_text);
    }

    SUBCASE("foreign JSON is invalid") {
        std::ostringstream log2;
        CHECK(verify_report("{\"tool\": \"other\"}", log2) == VerifyStatus::Invalid);
        std::ostringstream log3;
        CHECK(verify_report("not json at all", log3) == VerifyStatus::Invalid);
    }

    std::remove(spec_path.c_str());
}
