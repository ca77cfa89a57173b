#pragma once

#include <ostream>
#include <string>

#include "qmorse/pipeline.hpp"

namespace qmorse {

// FNV-1a (64-bit) of raw bytes, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

// Deterministic report JSON: fixed key order, floats at 17 significant
// digits (round-trip exact), integers unpadded. Two identical runs differ
// only inside "timings_ms".
std::string render_report(const FunctionSpec& spec, const AnalysisResult& res,
                          const AnalyzeOptions& opt, const std::string& input_path,
                          const std::string& digest);

enum class VerifyStatus { Ok = 0, Mismatch = 1, Invalid = 2 };

// Re-derives the report's claims from its own echo: rebuilds the function
// (base spec plus stored perturbation), recomputes budget, constants,
// certificate data, and verdicts (i)-(v), and compares against the stored
// values. Chart residuals are rechecked at the stored level (sup against
// tolerance), not re-integrated. Returns Mismatch when any recomputed value
// disagrees, Invalid for files this tool did not produce (or whose input
// digest no longer matches a spec file present at the recorded path).
VerifyStatus verify_report(const std::string& report_json, std::ostream& log);

}  // namespace qmorse
