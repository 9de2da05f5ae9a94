#pragma once
#include "gmink/isotropic.hpp"
#include "gmink/solver.hpp"
#include "gmink/verify.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmink {

/// Schema-version mismatch on read; distinct from malformed content so old
/// readers fail loudly instead of misparsing.
class VersionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Write content to path atomically (temp file in the same directory, then
/// rename).  Throws std::runtime_error on I/O failure.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

/// Body files: schema-versioned text, 17 significant digits, byte-stable.
std::string format_body(const SupportField& h);
SupportField parse_body(const std::string& text);
void write_body(const std::string& path, const SupportField& h);
SupportField read_body(const std::string& path);

std::string format_density(const MeasureDensity& f);
MeasureDensity parse_density(const std::string& text);
void write_density(const std::string& path, const MeasureDensity& f);
MeasureDensity read_density(const std::string& path);

/// Reports are write-only artifacts (consumed by humans and plots).
std::string format_solve_report(const SolveReport& rep);
std::string format_trace_csv(const std::vector<HomotopyPoint>& trace);
std::string format_isotropic_report(const IsotropicReport& rep);
std::string format_property_record(const PropertyRunRecord& rec);

/// Density specification: a named family expanded on the target grid, or a
/// samples file.  Families: constant (c), cosine_even on S^1
/// (c, a1..a4: c (1 + sum a_k cos 2k theta)), harmonic_even on S^2
/// (c, a1, a2, b1, b2: c (1 + a1 P2 + a2 P4 + b1 sin^2 cos 2phi
/// + b2 sin^2 sin 2phi)).
struct DensitySpec {
    std::string kind;         // "family" or "samples"
    std::string family;
    std::map<std::string, double> params;
    std::string sample_path;  // kind == "samples"
};

/// Accepts "constant:0.04", "cosine_even:c=0.04,a1=0.1", or "@path".
DensitySpec parse_density_spec(const std::string& text);

/// Expand a spec on a grid; validates positivity of the samples.
MeasureDensity realize_density(const DensitySpec& spec,
                               std::shared_ptr<const DirectionGrid> grid);

enum class LogLevel { quiet, info, trace };
/// Diagnostic verbosity from GMINK_LOG (quiet|info|trace), default quiet.
LogLevel log_level();

/// CLI driver.  Returns 0 on success, 1 on solve failure, 2 on invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmink
