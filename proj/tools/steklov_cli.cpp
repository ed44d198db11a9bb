// Batch front end: builds DN maps and runs the topology, identity,
// holomorphic-trace and flattening pipelines on them.

#include <steklov/dn_spectral.hpp>
#include <steklov/io.hpp>

#include <CLI11.hpp>

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

using namespace steklov;

namespace {

enum ExitCode { kOk = 0, kInvariant = 1, kIoOrSchema = 2, kAmbiguousRank = 3 };

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Schema: return kIoOrSchema;
    case ErrorKind::AmbiguousRank: return kAmbiguousRank;
    default: return kInvariant;
    }
}

void print_error(std::string_view kind, const std::string& message)
{
    const Json err = {{"error", {{"kind", std::string(kind)}, {"message", message}}}};
    std::cerr << err.dump() << '\n';
}

/// Output targets shared by every command. An empty path means stdout.
struct Outputs
{
    std::string report;
    std::string csv;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--out", report, "Report JSON path (stdout when omitted)");
        cmd->add_option("--csv", csv, "Companion CSV path for plotting");
    }

    void validate() const
    {
        for (const auto& path : {report, csv}) {
            if (path.empty()) continue;
            const auto parent = std::filesystem::path(path).parent_path();
            if (!parent.empty() && !std::filesystem::is_directory(parent)) {
                fail(ErrorKind::Io, "output directory '" + parent.string() + "' does not exist");
            }
        }
    }
};

void require_file(const std::string& path, const char* what)
{
    if (!std::filesystem::is_regular_file(path)) fail(ErrorKind::Io, std::string(what) + " '" + path + "' not found");
}

void emit_report(const Outputs& out, const Json& report)
{
    if (out.report.empty()) {
        std::cout << dump_json(report);
    } else {
        write_json_file(out.report, report);
    }
}

void emit_csv(const Outputs& out, const std::string& text)
{
    if (!out.csv.empty()) write_text_file(out.csv, text);
}

std::string format_real(double v)
{
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

/// Hash of the effective configuration, defaults included. Output paths are
/// left out so that equal runs written to different files still compare equal.
std::string config_hash(const CLI::App& cmd)
{
    std::istringstream text(cmd.config_to_str(true, false));
    std::string kept;
    std::string line;
    while (std::getline(text, line)) {
        if (line.rfind("out=", 0) == 0 || line.rfind("csv=", 0) == 0) continue;
        kept += line + '\n';
    }
    return fnv1a_hex(kept);
}

/// Report with a leading tool block: version, command and configuration hash.
Json with_tool_block(const CLI::App& cmd, const Json& body)
{
    Json out = {
        {"tool",
         {{"name", "steklov"},
          {"version", STEKLOV_VERSION},
          {"command", cmd.get_name()},
          {"config_hash", config_hash(cmd)}}},
    };
    for (const auto& [key, value] : body.items()) out[key] = value;
    return out;
}

// Domains and meshes

struct DomainOptions
{
    std::string domain = "disk";
    double radius = 1.0;
    double r_in = 1.0;
    double r_out = 2.0;
    std::string holes;
    std::string mesh_path;
    double h = 0.04;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--domain", domain, "Built-in domain or 'mesh' for a mesh file")
            ->check(CLI::IsMember({"disk", "annulus", "multihole", "ellipse", "mesh"}))
            ->capture_default_str();
        cmd->add_option("--radius", radius, "Disk or outer multihole radius")->capture_default_str();
        cmd->add_option("--r-in", r_in, "Annulus inner radius, or ellipse minor semi-axis")->capture_default_str();
        cmd->add_option("--r-out", r_out, "Annulus outer radius, or ellipse major semi-axis")->capture_default_str();
        cmd->add_option("--holes", holes, "Multihole holes as 'x,y,r;x,y,r;...'");
        cmd->add_option("--mesh", mesh_path, "Mesh JSON for --domain mesh");
        cmd->add_option("--h", h, "Target mesh size")->capture_default_str();
    }

    void validate() const
    {
        if (domain == "mesh") {
            if (mesh_path.empty()) fail(ErrorKind::Schema, "--domain mesh needs --mesh");
            require_file(mesh_path, "mesh file");
        }
    }

    std::vector<Hole> parse_holes() const
    {
        std::vector<Hole> out;
        std::stringstream list(holes);
        std::string item;
        while (std::getline(list, item, ';')) {
            if (item.empty()) continue;
            std::stringstream fields(item);
            Hole hole;
            char c1 = 0, c2 = 0;
            if (!(fields >> hole.center.x() >> c1 >> hole.center.y() >> c2 >> hole.radius) || c1 != ',' || c2 != ',') {
                fail(ErrorKind::Schema, "hole '" + item + "' is not 'x,y,r'");
            }
            out.push_back(hole);
        }
        return out;
    }

    PlanarMesh build_mesh() const
    {
        if (domain == "disk") return generate_disk_mesh(radius, h);
        if (domain == "annulus") return generate_annulus_mesh(r_in, r_out, h);
        if (domain == "multihole") return generate_multihole_mesh(radius, parse_holes(), h);
        if (domain == "ellipse") return generate_ellipse_mesh(r_out, r_in, h);
        return mesh_from_json(read_json_file(mesh_path));
    }
};

ConformalFactor read_factor(const std::string& path, const PlanarMesh& mesh)
{
    std::istringstream in(read_text_file(path));
    return read_conformal_factor_csv(in, mesh);
}

/// "unit" or "sphere:R", the stereographic metric of the sphere of radius R.
ConformalFactor builtin_factor(const std::string& spec, const PlanarMesh& mesh)
{
    if (spec == "unit") return ConformalFactor::constant(mesh, 1.0);
    if (spec.rfind("sphere:", 0) == 0) {
        double r = 0.0;
        try {
            r = std::stod(spec.substr(7));
        } catch (const std::exception&) {
            fail(ErrorKind::Schema, "bad sphere radius in '" + spec + "'");
        }
        if (!(r > 0.0)) fail(ErrorKind::Schema, "sphere radius must be positive");
        ConformalFactor out{Eigen::VectorXd(mesh.vertex_count())};
        for (int i = 0; i < mesh.vertex_count(); ++i) {
            const double q = r * r + mesh.vertices[static_cast<size_t>(i)].squaredNorm();
            out.values[i] = 4.0 * std::pow(r, 4) / (q * q);
        }
        return out;
    }
    fail(ErrorKind::Schema, "unknown conformal factor '" + spec + "'");
}

// Tolerances

struct RankOptions
{
    std::optional<double> gap_ratio;
    std::optional<double> threshold;
    std::optional<double> gap_floor;
    std::optional<double> pinv_threshold;
    std::optional<double> range_tolerance;
    std::optional<double> band_fraction;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--gap-ratio", gap_ratio, "Singular value ratio that counts as a spectral gap [1e3]");
        cmd->add_option("--rank-threshold", threshold, "Relative rank cutoff [spectral 1e-6, fem 1e-3]");
        cmd->add_option("--gap-floor", gap_floor, "Relative noise level merged by the gap search [spectral 0, fem 1e-5]");
        cmd->add_option("--pinv-threshold", pinv_threshold, "Relative pseudo-inverse cutoff [spectral 1e-10, fem 1e-6]");
        cmd->add_option("--range-tolerance", range_tolerance,
                        "Relative residual that rejects a right side [spectral 1e-8, fem 1e-6]");
        cmd->add_option("--band-fraction", band_fraction,
                        "Fraction of the Nyquist band kept for ranks [spectral 0 = all, fem 1/16]");
    }

    RankRule resolve(DnMethod method) const
    {
        RankRule rule = RankRule::for_method(method);
        if (gap_ratio) rule.gap_ratio = *gap_ratio;
        if (threshold) rule.threshold = *threshold;
        if (gap_floor) rule.gap_floor = *gap_floor;
        if (pinv_threshold) rule.pinv_threshold = *pinv_threshold;
        if (range_tolerance) rule.range_tolerance = *range_tolerance;
        if (band_fraction) rule.band_fraction = *band_fraction;
        return rule;
    }
};

/// Calibrated FEM multiplier error, or the configured override.
struct FemToleranceOption
{
    std::optional<double> value;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--fem-tolerance", value,
                        "FEM multiplier error; calibrated on the unit disk at the map's mesh size when omitted");
    }

    double resolve(const DNMap& dn) const
    {
        if (value) return *value;
        if (dn.provenance().method != DnMethod::Fem) return 0.0;
        if (!(dn.provenance().mesh_h > 0.0)) {
            fail(ErrorKind::Schema, "FEM map without mesh_h in its provenance needs --fem-tolerance");
        }
        return calibrate_fem_tolerance(dn.provenance().mesh_h);
    }
};

DNMap load_dn(const std::string& path)
{
    return dn_from_json(read_json_file(path));
}

// Boundary function specs

/// "cos:k", "sin:k" (mode k on every circle), "const:v0,v1,..." or "csv:path".
BoundaryFunction parse_trace(const std::string& spec, const BoundaryGeometry& geometry)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) fail(ErrorKind::Schema, "trace '" + spec + "' is not 'kind:value'");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (kind == "csv") {
        std::istringstream in(read_text_file(arg));
        return read_boundary_function_csv(in, geometry);
    }
    if (kind == "cos" || kind == "sin") {
        int k = 0;
        try {
            k = std::stoi(arg);
        } catch (const std::exception&) {
            fail(ErrorKind::Schema, "bad mode in trace '" + spec + "'");
        }
        const bool cosine = kind == "cos";
        return BoundaryFunction::sample(geometry, [&](int j, double s) {
            const double t = 2.0 * std::numbers::pi * k * s / geometry.length(j);
            return Complex(cosine ? std::cos(t) : std::sin(t), 0.0);
        });
    }
    if (kind == "const") {
        std::vector<Complex> values;
        std::stringstream list(arg);
        std::string item;
        while (std::getline(list, item, ',')) {
            try {
                values.emplace_back(std::stod(item), 0.0);
            } catch (const std::exception&) {
                fail(ErrorKind::Schema, "bad constant '" + item + "' in trace '" + spec + "'");
            }
        }
        if (static_cast<int>(values.size()) != geometry.circle_count()) {
            fail(ErrorKind::Schema, "trace '" + spec + "' needs one constant per circle");
        }
        return BoundaryFunction::locally_constant(geometry, values);
    }
    fail(ErrorKind::Schema, "unknown trace kind '" + kind + "'");
}

// Commands

struct DnCommand
{
    DomainOptions domain;
    std::string method = "spectral";
    int modes = 64;
    std::string lambda_path;
    std::string mass = "lumped";
    std::string resampling = "spectral";
    std::string probes = "indicators";
    std::optional<double> kernel_tol, range_mean_tol, symmetry_tol, nonnegativity_tol;
    FemToleranceOption fem_tol;
    Outputs out;

    void add_to(CLI::App* cmd)
    {
        domain.add_to(cmd);
        cmd->add_option("--method", method, "DN engine")
            ->check(CLI::IsMember({"spectral", "fem"}))
            ->capture_default_str();
        cmd->add_option("--modes", modes, "Samples per circle for spectral maps")->capture_default_str();
        cmd->add_option("--lambda", lambda_path, "Conformal factor CSV (vertex_index, lambda) for FEM maps");
        cmd->add_option("--mass", mass, "Boundary mass matrix")
            ->check(CLI::IsMember({"lumped", "consistent"}))
            ->capture_default_str();
        cmd->add_option("--resampling", resampling, "Resampling onto the arc-length grid")
            ->check(CLI::IsMember({"spectral", "cubic"}))
            ->capture_default_str();
        cmd->add_option("--probes", probes, "Probe basis used to assemble the dense map")
            ->check(CLI::IsMember({"indicators", "fourier"}))
            ->capture_default_str();
        cmd->add_option("--kernel-tolerance", kernel_tol, "Kernel defect bound [1e-10]");
        cmd->add_option("--range-mean-tolerance", range_mean_tol, "Range mean defect bound [spectral 1e-10, fem 1e-8]");
        cmd->add_option("--symmetry-tolerance", symmetry_tol, "Symmetry defect bound [spectral 1e-10, fem 10x FEM tolerance]");
        cmd->add_option("--nonnegativity-tolerance", nonnegativity_tol,
                        "Negative eigenvalue bound [spectral 1e-10, fem FEM tolerance]");
        fem_tol.add_to(cmd);
        out.add_to(cmd);
    }

    DNMap build() const
    {
        if (method == "spectral") {
            if (domain.domain == "disk") return disk_dn(domain.radius, disk_geometry(domain.radius, modes));
            if (domain.domain == "annulus") {
                return annulus_dn(domain.r_in, domain.r_out,
                                  annulus_geometry(domain.r_in, domain.r_out, modes, modes));
            }
            fail(ErrorKind::Schema, "spectral maps exist only for the disk and the annulus");
        }
        const PlanarMesh mesh = domain.build_mesh();
        const ConformalFactor lambda =
            lambda_path.empty() ? ConformalFactor::constant(mesh, 1.0) : read_factor(lambda_path, mesh);
        FemOptions options;
        options.mass = boundary_mass_from_string(mass);
        options.resampling = resampling_from_string(resampling);
        options.probes = probe_basis_from_string(probes);
        options.mesh_h = domain.h;
        return compute_dn(mesh, lambda, metric_boundary_geometry(mesh, lambda), options);
    }

    int run(const CLI::App& cmd) const
    {
        domain.validate();
        if (!lambda_path.empty()) require_file(lambda_path, "conformal factor file");
        out.validate();
        const DNMap dn = build();

        DnTolerances tol = spectral_dn_tolerances();
        if (dn.provenance().method == DnMethod::Fem) tol = fem_dn_tolerances(fem_tol.resolve(dn));
        if (kernel_tol) tol.kernel = *kernel_tol;
        if (range_mean_tol) tol.range_mean = *range_mean_tol;
        if (symmetry_tol) tol.symmetry = *symmetry_tol;
        if (nonnegativity_tol) tol.nonnegativity = *nonnegativity_tol;
        const bool ok = diagnostics_within(dn.diagnostics(), tol);

        Json body = to_json(dn);
        body["tolerances"] = {
            {"kernel", tol.kernel},
            {"range_mean", tol.range_mean},
            {"symmetry", tol.symmetry},
            {"nonnegativity", tol.nonnegativity},
        };
        body["diagnostics_within_tolerances"] = ok;
        emit_report(out, with_tool_block(cmd, body));

        std::ostringstream csv;
        csv << "circle_index,mode,multiplier_re,multiplier_im\n";
        const auto& g = dn.geometry();
        for (int j = 0; j < g.circle_count(); ++j) {
            for (int k = 0; 2 * k < g.samples(j); ++k) {
                const Complex mu = fourier_multiplier(dn, j, k);
                csv << j << ',' << k << ',' << format_real(mu.real()) << ',' << format_real(mu.imag()) << '\n';
            }
        }
        emit_csv(out, csv.str());
        return ok ? kOk : kInvariant;
    }
};

struct BettiCommand
{
    std::string dn_path;
    RankOptions rank;
    Outputs out;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--dn", dn_path, "DN map JSON")->required();
        rank.add_to(cmd);
        out.add_to(cmd);
    }

    int run(const CLI::App& cmd) const
    {
        require_file(dn_path, "DN map file");
        out.validate();
        const DNMap dn = load_dn(dn_path);
        const TopologyReport report = analyze_topology(dn, rank.resolve(dn.provenance().method));
        emit_report(out, with_tool_block(cmd, to_json(report)));

        std::ostringstream csv;
        csv << "index,singular_value,t2_singular_value\n";
        const size_t n = std::max(report.singular_values.size(), report.t2_singular_values.size());
        for (size_t i = 0; i < n; ++i) {
            csv << i << ',';
            if (i < report.singular_values.size()) csv << format_real(report.singular_values[i]);
            csv << ',';
            if (i < report.t2_singular_values.size()) csv << format_real(report.t2_singular_values[i]);
            csv << '\n';
        }
        emit_csv(out, csv.str());
        return report.bound_holds ? kOk : kInvariant;
    }
};

struct IdentitiesCommand
{
    std::string dn_path;
    int probe_count = 16;
    int max_mode = 4;
    unsigned seed = 1;
    std::optional<double> identity_tol;
    double uniqueness_tol = 1e-6;
    RankOptions rank;
    FemToleranceOption fem_tol;
    Outputs out;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--dn", dn_path, "DN map JSON")->required();
        cmd->add_option("--probe-count", probe_count, "Number of random band-limited probes")->capture_default_str();
        cmd->add_option("--max-mode", max_mode, "Highest Fourier mode of every probe")->capture_default_str();
        cmd->add_option("--seed", seed, "Probe seed")->capture_default_str();
        cmd->add_option("--identity-tolerance", identity_tol,
                        "Residual bound [one circle: spectral 1e-10, fem FEM tolerance; "
                        "several circles: spectral 1e-8, fem 50x FEM tolerance]");
        cmd->add_option("--uniqueness-tolerance", uniqueness_tol, "Bound on the refit change of the decomposition")
            ->capture_default_str();
        rank.add_to(cmd);
        fem_tol.add_to(cmd);
        out.add_to(cmd);
    }

    int run(const CLI::App& cmd) const
    {
        require_file(dn_path, "DN map file");
        out.validate();
        if (probe_count < 1) fail(ErrorKind::Schema, "--probe-count must be positive");
        const DNMap dn = load_dn(dn_path);
        const RankRule rule = rank.resolve(dn.provenance().method);
        const TopologyReport report = analyze_topology(dn, rule);
        const int m = dn.geometry().circle_count();
        const bool fem = dn.provenance().method == DnMethod::Fem;

        double tol = 0.0;
        if (identity_tol) {
            tol = *identity_tol;
        } else if (m == 1) {
            tol = fem ? fem_tol.resolve(dn) : 1e-10;
        } else {
            tol = fem ? 50.0 * fem_tol.resolve(dn) : 1e-8;
        }

        Json probes = Json::array();
        std::ostringstream csv;
        csv << "probe,residual,uniqueness_defect\n";
        double worst = 0.0;
        double worst_uniqueness = 0.0;
        for (int p = 0; p < probe_count; ++p) {
            const BoundaryFunction f = random_band_limited(dn.geometry(), max_mode, seed + static_cast<unsigned>(p));
            const DerivativeDecomposition d = m == 1
                ? fit_single_circle_identity(dn, f, report, rule)
                : fit_derivative_decomposition(dn, f, report, rule, seed + 1000u + static_cast<unsigned>(p));
            worst = std::max(worst, d.residual);
            worst_uniqueness = std::max(worst_uniqueness, d.uniqueness_defect);
            probes.push_back({{"probe", p}, {"residual", d.residual}, {"uniqueness_defect", d.uniqueness_defect}});
            csv << p << ',' << format_real(d.residual) << ',' << format_real(d.uniqueness_defect) << '\n';
        }
        const bool ok = worst <= tol && worst_uniqueness <= uniqueness_tol;
        const Json body = {
            {"identity", m == 1 ? "single_circle" : "derivative_decomposition"},
            {"circle_count", m},
            {"beta1", report.beta1},
            {"tolerance", tol},
            {"uniqueness_tolerance", uniqueness_tol},
            {"max_residual", worst},
            {"max_uniqueness_defect", worst_uniqueness},
            {"probes", probes},
            {"pass", ok},
        };
        emit_report(out, with_tool_block(cmd, body));
        emit_csv(out, csv.str());
        return ok ? kOk : kInvariant;
    }
};

struct HoloCommand
{
    std::string dn_path;
    std::string a_spec;
    std::string b_spec;
    std::optional<double> membership_tol;
    FemToleranceOption fem_tol;
    Outputs out;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--dn", dn_path, "DN map JSON")->required();
        cmd->add_option("--a", a_spec, "Real part: cos:k, sin:k, const:v0,v1,... or csv:path")->required();
        cmd->add_option("--b", b_spec, "Imaginary part to test; constructed from a when omitted");
        cmd->add_option("--membership-tolerance", membership_tol, "Residual bound [spectral 1e-8, fem 50x FEM tolerance]");
        fem_tol.add_to(cmd);
        out.add_to(cmd);
    }

    int run(const CLI::App& cmd) const
    {
        require_file(dn_path, "DN map file");
        out.validate();
        const DNMap dn = load_dn(dn_path);
        const double tol = membership_tol ? *membership_tol
                                          : membership_tolerance(dn.provenance().method, fem_tol.resolve(dn));
        const BoundaryFunction a = parse_trace(a_spec, dn.geometry());
        const HoloTraceResult result = b_spec.empty() ? conjugate_trace(dn, a, tol)
                                                      : membership(dn, a, parse_trace(b_spec, dn.geometry()), tol);
        emit_report(out, with_tool_block(cmd, to_json(result)));

        std::ostringstream csv;
        csv << "quantity,value\n";
        for (size_t j = 0; j < result.circle_mean_residuals.size(); ++j) {
            csv << "circle_mean_" << j << ',' << format_real(result.circle_mean_residuals[j]) << '\n';
        }
        csv << "flux," << format_real(result.flux_residual) << '\n';
        csv << "conjugate," << format_real(result.conjugate_residual) << '\n';
        csv << "dual," << format_real(result.dual_residual) << '\n';
        emit_csv(out, csv.str());
        return result.member ? kOk : kInvariant;
    }
};

struct FlattenCommand
{
    DomainOptions domain;
    std::string lambda_path;
    std::string factor = "sphere:1";
    double curvature_ratio = 1e-2;
    double boundary_tol = 1e-12;
    Outputs out;

    void add_to(CLI::App* cmd)
    {
        domain.add_to(cmd);
        cmd->add_option("--lambda", lambda_path, "Conformal factor CSV (vertex_index, lambda)");
        cmd->add_option("--factor", factor, "Built-in factor when no CSV is given: unit or sphere:R")
            ->capture_default_str();
        cmd->add_option("--curvature-ratio", curvature_ratio, "Bound on curvature_out_norm / curvature_in_norm")
            ->capture_default_str();
        cmd->add_option("--boundary-tolerance", boundary_tol, "Bound on max |phi| at boundary vertices")
            ->capture_default_str();
        out.add_to(cmd);
    }

    int run(const CLI::App& cmd) const
    {
        domain.validate();
        if (!lambda_path.empty()) require_file(lambda_path, "conformal factor file");
        out.validate();
        const PlanarMesh mesh = domain.build_mesh();
        const ConformalFactor lambda = lambda_path.empty() ? builtin_factor(factor, mesh) : read_factor(lambda_path, mesh);
        const FlattenResult result = solve_flattening(mesh, lambda);
        const bool ok = result.boundary_defect <= boundary_tol &&
                        result.curvature_out_norm <= curvature_ratio * result.curvature_in_norm;
        Json body = to_json(result);
        body["pass"] = ok;
        emit_report(out, with_tool_block(cmd, body));

        std::ostringstream csv;
        csv << "vertex_index,x,y,phi,rho,curvature_in\n";
        for (int i = 0; i < mesh.vertex_count(); ++i) {
            const Point& p = mesh.vertices[static_cast<size_t>(i)];
            csv << i << ',' << format_real(p.x()) << ',' << format_real(p.y()) << ',' << format_real(result.phi[i])
                << ',' << format_real(result.rho[i]) << ',' << format_real(result.curvature_in[i]) << '\n';
        }
        emit_csv(out, csv.str());
        return ok ? kOk : kInvariant;
    }
};

} // namespace

int main(int argc, char** argv)
{
    Eigen::setNbThreads(1);

    CLI::App app{"Dirichlet-to-Neumann maps of planar domains and the boundary identities built on them"};
    // "--h" is the mesh size, so help has no short form.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", STEKLOV_VERSION);
    app.set_config("--config", "", "Configuration file (TOML or INI); unknown keys are rejected");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    DnCommand dn;
    BettiCommand betti;
    IdentitiesCommand identities;
    HoloCommand holo;
    FlattenCommand flatten;
    auto* dn_cmd = app.add_subcommand("dn", "Build a DN map and check its structural diagnostics");
    auto* betti_cmd = app.add_subcommand("betti", "First Betti number and Neumann traces from a DN map");
    auto* identities_cmd = app.add_subcommand("identities", "Derivative identities on random band-limited probes");
    auto* holo_cmd = app.add_subcommand("holo", "Holomorphic trace construction or membership test");
    auto* flatten_cmd = app.add_subcommand("flatten", "Conformal flattening of a metric with fixed boundary length");
    dn.add_to(dn_cmd);
    betti.add_to(betti_cmd);
    identities.add_to(identities_cmd);
    holo.add_to(holo_cmd);
    flatten.add_to(flatten_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        print_error(to_string(ErrorKind::Io), e.what());
        return kIoOrSchema;
    } catch (const CLI::ParseError& e) {
        print_error(to_string(ErrorKind::Schema), e.what());
        return kIoOrSchema;
    }

    try {
        if (*dn_cmd) return dn.run(*dn_cmd);
        if (*betti_cmd) return betti.run(*betti_cmd);
        if (*identities_cmd) return identities.run(*identities_cmd);
        if (*holo_cmd) return holo.run(*holo_cmd);
        return flatten.run(*flatten_cmd);
    } catch (const Error& e) {
        print_error(to_string(e.kind()), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return kInvariant;
    }
}
