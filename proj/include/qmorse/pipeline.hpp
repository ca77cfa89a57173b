#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qmorse/certify.hpp"
#include "qmorse/chart.hpp"
#include "qmorse/constants.hpp"
#include "qmorse/field.hpp"
#include "qmorse/perturb.hpp"

namespace qmorse {

struct AnalyzeOptions {
    double epsilon = 0.1;
    int grid = 64;
    double c_constant = 1.0;
    double newton_tol = 1e-10;
    int quadrature_max = 64;
    long long seed = 0;     // echoed in reports; the pipeline itself is deterministic
    bool no_perturb = false;
};

struct VerificationItem {
    std::string label;
    bool pass = true;
    std::string witness;  // empty when pass
};

// Items, in order: (i) Hessian floor, (ii) separation and count,
// (iii) value gaps, (iv) chart residuals, (v) gradient localization.
struct Verification {
    std::vector<VerificationItem> items;
    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
};

Verification verify_theorem(const ScalarField& f, const std::vector<CriticalCertificate>& certs,
                            const std::vector<NearDegenerateReport>& near_degenerate,
                            const std::vector<MorseChart>& charts, const MorseConstants& mc,
                            bool has_constants, int grid);

struct AnalysisResult {
    DerivativeBudget budget;
    bool affine = false;          // no curvature anywhere: no constants ledger
    bool has_constants = false;
    MorseConstants mc;            // final (C1 refreshed when perturbed)
    bool has_regular_value = false;
    RegularValue rv;
    bool perturbed = false;
    Perturbation pert;
    IsolationResult iso;          // on the final field
    std::vector<MorseChart> charts;
    Verification verification;
    std::shared_ptr<const ScalarField> field;  // the analyzed f
    std::vector<std::pair<std::string, double>> stage_ms;
};

// budget -> constants -> regular value -> isolate -> perturb -> re-isolate
// -> charts -> verify. With no_perturb set, h is skipped entirely and the
// raw field is judged. Affine fields (all curvature bounds at zero) skip
// the ledger; their verification reduces to the gradient-localization scan
// with zero thresholds.
AnalysisResult analyze(std::shared_ptr<const FunctionSpec> f0, const AnalyzeOptions& opt);

}  // namespace qmorse
