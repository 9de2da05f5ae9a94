#include "gmink/io.hpp"

#include <cerrno>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace gmink {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* bit(bool b) { return b ? "1" : "0"; }

const char* branch_name(Branch b) { return b == Branch::small ? "small" : "large"; }

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::string::size_type pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

double parse_double(const std::string& s)
{
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE)
        throw ParseError("not a number: '" + s + "'");
    return v;
}

long parse_long(const std::string& s)
{
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE)
        throw ParseError("not an integer: '" + s + "'");
    return v;
}

/// Line i must read "<key> <value>"; returns the value part.
std::string expect_field(const std::vector<std::string>& lines, std::size_t i,
                         const std::string& key)
{
    if (i >= lines.size()) throw ParseError("truncated file, expected field '" + key + "'");
    const std::string& line = lines[i];
    if (line.rfind(key + " ", 0) != 0)
        throw ParseError("expected field '" + key + "', got '" + line + "'");
    return line.substr(key.size() + 1);
}

/// Checks "<magic> <version>" and the supported version.
void expect_header(const std::vector<std::string>& lines, const std::string& magic)
{
    if (lines.empty() || lines[0].rfind(magic + " ", 0) != 0)
        throw ParseError("expected '" + magic + "' header");
    const long version = parse_long(lines[0].substr(magic.size() + 1));
    if (version != 1)
        throw VersionError(magic + " schema version " + std::to_string(version)
                           + " is not supported (expected 1)");
}

struct GridHeader {
    std::shared_ptr<const DirectionGrid> grid;
    std::size_t next_line;
};

GridHeader parse_grid_header(const std::vector<std::string>& lines, std::size_t i)
{
    const long dim = parse_long(expect_field(lines, i, "dim"));
    if (dim != 2 && dim != 3) throw ParseError("dim must be 2 or 3");
    const std::string res_text = expect_field(lines, i + 1, "grid");
    GridResolution res;
    try {
        res = parse_resolution(res_text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    std::shared_ptr<const DirectionGrid> grid;
    try {
        grid = build_grid(static_cast<int>(dim), res);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return {grid, i + 2};
}

Eigen::VectorXd parse_values(const std::vector<std::string>& lines, std::size_t i,
                             std::size_t expected)
{
    const long count = parse_long(expect_field(lines, i, "values"));
    if (count < 0 || static_cast<std::size_t>(count) != expected)
        throw ParseError("values count " + std::to_string(count)
                         + " does not match the grid node count " + std::to_string(expected));
    Eigen::VectorXd v(count);
    for (long k = 0; k < count; ++k) {
        if (i + 1 + k >= lines.size()) throw ParseError("truncated value list");
        v[k] = parse_double(lines[i + 1 + k]);
    }
    return v;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed on '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "': "
                                 + std::strerror(errno));
    }
}

std::string read_text(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string format_body(const SupportField& h)
{
    if (!h.grid) throw std::invalid_argument("format_body: missing grid");
    std::string s = "gmink-body 1\n";
    s += "dim " + std::to_string(h.grid->dim) + "\n";
    s += "grid " + format_resolution(h.grid->res, h.grid->dim) + "\n";
    s += "p " + fmt(h.p) + "\n";
    s += "values " + std::to_string(h.values.size()) + "\n";
    for (Eigen::Index i = 0; i < h.values.size(); ++i) s += fmt(h.values[i]) + "\n";
    return s;
}

SupportField parse_body(const std::string& text)
{
    const auto lines = split_lines(text);
    expect_header(lines, "gmink-body");
    const auto gh = parse_grid_header(lines, 1);
    const double p = parse_double(expect_field(lines, gh.next_line, "p"));
    Eigen::VectorXd values = parse_values(lines, gh.next_line + 1, gh.grid->node_count());
    if (values.size() > 0 && values.minCoeff() <= 0.0)
        throw ParseError("support samples must be positive");
    return SupportField{gh.grid, std::move(values), p};
}

void write_body(const std::string& path, const SupportField& h)
{
    write_text_atomic(path, format_body(h));
}

SupportField read_body(const std::string& path) { return parse_body(read_text(path)); }

std::string format_density(const MeasureDensity& f)
{
    if (!f.grid) throw std::invalid_argument("format_density: missing grid");
    std::string s = "gmink-density 1\n";
    s += "dim " + std::to_string(f.grid->dim) + "\n";
    s += "grid " + format_resolution(f.grid->res, f.grid->dim) + "\n";
    s += "values " + std::to_string(f.values.size()) + "\n";
    for (Eigen::Index i = 0; i < f.values.size(); ++i) s += fmt(f.values[i]) + "\n";
    return s;
}

MeasureDensity parse_density(const std::string& text)
{
    const auto lines = split_lines(text);
    expect_header(lines, "gmink-density");
    const auto gh = parse_grid_header(lines, 1);
    Eigen::VectorXd values = parse_values(lines, gh.next_line, gh.grid->node_count());
    if (values.size() > 0 && values.minCoeff() <= 0.0)
        throw ParseError("density samples must be positive");
    MeasureDensity f{gh.grid, std::move(values), 0.0};
    f.l1_norm = gh.grid->weights.dot(f.values);
    return f;
}

void write_density(const std::string& path, const MeasureDensity& f)
{
    write_text_atomic(path, format_density(f));
}

MeasureDensity read_density(const std::string& path) { return parse_density(read_text(path)); }

std::string format_solve_report(const SolveReport& rep)
{
    std::string s = "gmink-report 1\n";
    s += "kind solve\n";
    s += "converged " + std::string(bit(rep.converged)) + "\n";
    if (!rep.failure_reason.empty()) s += "failure_reason " + rep.failure_reason + "\n";
    s += "branch " + std::string(branch_name(rep.branch)) + "\n";
    s += "p " + fmt(rep.solution.p) + "\n";
    s += "gamma_n " + fmt(rep.gamma_n) + "\n";
    s += "residual_sup " + fmt(rep.residual_sup) + "\n";
    s += "gamma_crossed_half " + std::string(bit(rep.gamma_crossed_half)) + "\n";
    s += "mass_threshold_ok " + std::string(bit(rep.mass_threshold_ok)) + "\n";
    s += "newton_history";
    for (const double r : rep.newton_history) s += " " + fmt(r);
    s += "\n";
    s += "homotopy_trace " + std::to_string(rep.homotopy_trace.size()) + "\n";
    for (const auto& pt : rep.homotopy_trace)
        s += fmt(pt.t) + " " + fmt(pt.gamma_n) + " " + fmt(pt.residual_sup) + "\n";
    s += "apriori_min_support " + fmt(rep.apriori.min_support) + "\n";
    s += "apriori_max_support " + fmt(rep.apriori.max_support) + "\n";
    s += "apriori_min_norm " + fmt(rep.apriori.min_norm) + "\n";
    s += "apriori_max_norm " + fmt(rep.apriori.max_norm) + "\n";
    s += "apriori_min_eigenvalue " + fmt(rep.apriori.min_eigenvalue) + "\n";
    s += "apriori_max_eigenvalue " + fmt(rep.apriori.max_eigenvalue) + "\n";
    s += "apriori_residual_sup " + fmt(rep.apriori.residual_sup) + "\n";
    s += "apriori_eigenvalue_flagged " + std::string(bit(rep.apriori.eigenvalue_flagged)) + "\n";
    s += "apriori_passed " + std::string(bit(rep.apriori.passed)) + "\n";
    s += "solution " + std::to_string(rep.solution.values.size()) + "\n";
    for (Eigen::Index i = 0; i < rep.solution.values.size(); ++i)
        s += fmt(rep.solution.values[i]) + "\n";
    return s;
}

std::string format_trace_csv(const std::vector<HomotopyPoint>& trace)
{
    std::string s = "t,gamma_n,residual_sup\n";
    for (const auto& pt : trace)
        s += fmt(pt.t) + "," + fmt(pt.gamma_n) + "," + fmt(pt.residual_sup) + "\n";
    return s;
}

std::string format_isotropic_report(const IsotropicReport& rep)
{
    std::string s = "gmink-report 1\n";
    s += "kind isotropic\n";
    s += "n " + std::to_string(rep.n) + "\n";
    s += "p " + fmt(rep.p) + "\n";
    s += "C " + fmt(rep.C) + "\n";
    s += "threshold " + fmt(rep.threshold) + "\n";
    s += "root_count " + std::to_string(rep.root_count) + "\n";
    s += "roots";
    for (const double r : rep.roots) s += " " + fmt(r);
    s += "\n";
    return s;
}

std::string format_property_record(const PropertyRunRecord& rec)
{
    std::string s = "gmink-report 1\n";
    s += "kind property\n";
    s += "name " + rec.name + "\n";
    s += "trials " + std::to_string(rec.trials) + "\n";
    s += "failures " + std::to_string(rec.failures) + "\n";
    s += "worst_margin " + fmt(rec.worst_margin) + "\n";
    s += "seeds";
    for (const auto seed : rec.seeds) s += " " + std::to_string(seed);
    s += "\n";
    return s;
}

namespace {

bool density_param_known(const std::string& family, const std::string& key)
{
    if (key == "c") return true;
    if (family == "cosine_even")
        return key == "a1" || key == "a2" || key == "a3" || key == "a4";
    if (family == "harmonic_even")
        return key == "a1" || key == "a2" || key == "b1" || key == "b2";
    return false;
}

}  // namespace

DensitySpec parse_density_spec(const std::string& text)
{
    if (text.empty()) throw std::invalid_argument("empty density spec");
    DensitySpec spec;
    if (text[0] == '@') {
        spec.kind = "samples";
        spec.sample_path = text.substr(1);
        if (spec.sample_path.empty())
            throw std::invalid_argument("density spec '@' needs a file path");
        return spec;
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("density spec must be family:params or @file, got '"
                                    + text + "'");
    spec.kind = "family";
    spec.family = text.substr(0, colon);
    if (spec.family != "constant" && spec.family != "cosine_even"
        && spec.family != "harmonic_even")
        throw std::invalid_argument("unknown density family '" + spec.family + "'");
    const std::string params = text.substr(colon + 1);
    if (params.empty()) throw std::invalid_argument("density spec has no parameters");
    if (params.find('=') == std::string::npos) {
        try {
            spec.params["c"] = parse_double(params);
        } catch (const ParseError& e) {
            throw std::invalid_argument(e.what());
        }
        return spec;
    }
    std::string::size_type pos = 0;
    while (pos <= params.size()) {
        auto comma = params.find(',', pos);
        if (comma == std::string::npos) comma = params.size();
        const std::string item = params.substr(pos, comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("bad density parameter '" + item + "'");
        const std::string key = item.substr(0, eq);
        if (!density_param_known(spec.family, key))
            throw std::invalid_argument("density family '" + spec.family
                                        + "' has no parameter '" + key + "'");
        try {
            spec.params[key] = parse_double(item.substr(eq + 1));
        } catch (const ParseError& e) {
            throw std::invalid_argument(e.what());
        }
        pos = comma + 1;
    }
    return spec;
}

MeasureDensity realize_density(const DensitySpec& spec,
                               std::shared_ptr<const DirectionGrid> grid)
{
    if (spec.kind == "samples") {
        MeasureDensity f = read_density(spec.sample_path);
        if (grid && !f.grid->same_layout(*grid))
            throw std::invalid_argument("sample density grid does not match the requested grid");
        return f;
    }
    if (spec.kind != "family") throw std::invalid_argument("unknown density spec kind");
    if (!grid) throw std::invalid_argument("family density needs a target grid");

    auto param = [&spec](const std::string& name, double fallback) {
        const auto it = spec.params.find(name);
        return it == spec.params.end() ? fallback : it->second;
    };
    auto require_known = [&spec](std::initializer_list<const char*> known) {
        for (const auto& kv : spec.params) {
            bool ok = false;
            for (const char* k : known)
                if (kv.first == k) ok = true;
            if (!ok)
                throw std::invalid_argument("unknown parameter '" + kv.first + "' for family '"
                                            + spec.family + "'");
        }
    };
    const auto it_c = spec.params.find("c");
    if (it_c == spec.params.end())
        throw std::invalid_argument("density family needs parameter c");
    const double c = it_c->second;

    const Eigen::Index n = static_cast<Eigen::Index>(grid->node_count());
    Eigen::VectorXd values(n);
    if (spec.family == "constant") {
        require_known({"c"});
        values.setConstant(c);
    } else if (spec.family == "cosine_even") {
        require_known({"c", "a1", "a2", "a3", "a4"});
        if (grid->dim != 2)
            throw std::invalid_argument("cosine_even is an S^1 family; use harmonic_even on S^2");
        const double a[4] = {param("a1", 0.0), param("a2", 0.0), param("a3", 0.0),
                             param("a4", 0.0)};
        for (Eigen::Index i = 0; i < n; ++i) {
            // cos(2k theta) through even powers of (x + i y): exact evenness
            const std::complex<double> z(grid->xs[i], grid->ys[i]);
            const std::complex<double> z2 = z * z, z4 = z2 * z2;
            values[i] = c
                        * (1.0 + a[0] * z2.real() + a[1] * z4.real()
                           + a[2] * (z4 * z2).real() + a[3] * (z4 * z4).real());
        }
    } else {  // harmonic_even
        require_known({"c", "a1", "a2", "b1", "b2"});
        if (grid->dim != 3)
            throw std::invalid_argument("harmonic_even is an S^2 family; use cosine_even on S^1");
        const double a1 = param("a1", 0.0), a2 = param("a2", 0.0);
        const double b1 = param("b1", 0.0), b2 = param("b2", 0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = grid->xs[i], y = grid->ys[i], ct = grid->zs[i];
            const double ct2 = ct * ct;
            values[i] = c
                        * (1.0 + a1 * 0.5 * (3.0 * ct2 - 1.0)
                           + a2 * 0.125 * ((35.0 * ct2 - 30.0) * ct2 + 3.0)
                           + b1 * (x * x - y * y) + b2 * (2.0 * x * y));
        }
    }
    if (values.minCoeff() <= 0.0)
        throw std::invalid_argument("density family is not positive on the grid");
    MeasureDensity f{grid, std::move(values), 0.0};
    f.l1_norm = grid->weights.dot(f.values);
    return f;
}

LogLevel log_level()
{
    const char* env = std::getenv("GMINK_LOG");
    if (!env) return LogLevel::quiet;
    const std::string v(env);
    if (v == "trace") return LogLevel::trace;
    if (v == "info") return LogLevel::info;
    return LogLevel::quiet;
}

}  // namespace gmink
