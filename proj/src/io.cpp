#include <steklov/io.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace steklov {

namespace {

[[noreturn]] void schema(const std::string& message)
{
    fail(ErrorKind::Schema, message);
}

const Json& field(const Json& json, const char* key, const char* context)
{
    if (!json.is_object()) schema(std::string(context) + " must be a JSON object");
    const auto it = json.find(key);
    if (it == json.end()) schema(std::string(context) + " is missing '" + key + "'");
    return *it;
}

double number(const Json& json, const char* context)
{
    if (!json.is_number()) schema(std::string(context) + " must be a number");
    return json.get<double>();
}

int integer(const Json& json, const char* context)
{
    if (!json.is_number_integer()) schema(std::string(context) + " must be an integer");
    return json.get<int>();
}

const Json& array(const Json& json, const char* context)
{
    if (!json.is_array()) schema(std::string(context) + " must be an array");
    return json;
}

Json real_array(const Eigen::VectorXd& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json real_array(const std::vector<double>& v)
{
    return Json(v);
}

Eigen::VectorXd read_reals(const Json& json, Eigen::Index expected, const char* context)
{
    array(json, context);
    if (static_cast<Eigen::Index>(json.size()) != expected) {
        schema(std::string(context) + " has " + std::to_string(json.size()) + " entries, expected " +
               std::to_string(expected));
    }
    Eigen::VectorXd out(expected);
    for (Eigen::Index i = 0; i < expected; ++i) out[i] = number(json[static_cast<size_t>(i)], context);
    return out;
}

Json complex_list(const std::vector<Complex>& values)
{
    Json out = Json::array();
    for (const Complex& z : values) out.push_back(Json::array({z.real(), z.imag()}));
    return out;
}

std::vector<std::string> split_csv_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    return cells;
}

double parse_double(const std::string& text, const char* context)
{
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        schema(std::string(context) + ": '" + text + "' is not a number");
    }
}

int parse_int(const std::string& text, const char* context)
{
    try {
        size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        schema(std::string(context) + ": '" + text + "' is not an integer");
    }
}

/// Data rows of a CSV stream after checking the header line.
std::vector<std::vector<std::string>> csv_rows(std::istream& in, const std::string& header, size_t columns)
{
    std::string line;
    if (!std::getline(in, line)) schema("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) schema("CSV header '" + line + "' differs from '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_row(line);
        if (cells.size() != columns) {
            schema("CSV row '" + line + "' has " + std::to_string(cells.size()) + " columns, expected " +
                   std::to_string(columns));
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string format_real(double v)
{
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

} // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail(ErrorKind::Io, "error while reading '" + path + "'");
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) fail(ErrorKind::Io, "error while writing '" + path + "'");
}

Json parse_json(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        schema(source + " is not valid JSON: " + e.what());
    }
}

Json read_json_file(const std::string& path)
{
    return parse_json(read_text_file(path), "'" + path + "'");
}

std::string dump_json(const Json& json)
{
    return json.dump(2) + "\n";
}

void write_json_file(const std::string& path, const Json& json)
{
    write_text_file(path, dump_json(json));
}

// Boundary data

Json to_json(const BoundaryGeometry& geometry)
{
    Json circles = Json::array();
    for (const auto& c : geometry.circles()) {
        circles.push_back({{"length", c.length}, {"samples", c.samples}, {"orientation", c.orientation}});
    }
    return {{"circles", circles}};
}

BoundaryGeometry geometry_from_json(const Json& json)
{
    const Json& circles = array(field(json, "circles", "geometry"), "geometry.circles");
    if (circles.empty()) schema("geometry needs at least one circle");
    std::vector<CircleSpec> specs;
    for (const Json& c : circles) {
        CircleSpec spec;
        spec.length = number(field(c, "length", "circle"), "circle.length");
        spec.samples = integer(field(c, "samples", "circle"), "circle.samples");
        spec.orientation = integer(field(c, "orientation", "circle"), "circle.orientation");
        if (!(spec.length > 0.0) || !std::isfinite(spec.length)) schema("circle length must be positive");
        if (spec.samples < 8 || spec.samples % 2 != 0) schema("circle sample count must be even and at least 8");
        if (spec.orientation != 1 && spec.orientation != -1) schema("circle orientation must be +1 or -1");
        specs.push_back(spec);
    }
    return BoundaryGeometry(std::move(specs));
}

Json values_to_json(const BoundaryFunction& f)
{
    const CVector& v = f.values();
    return {{"re", real_array(Eigen::VectorXd(v.real()))}, {"im", real_array(Eigen::VectorXd(v.imag()))}};
}

BoundaryFunction function_from_json(const BoundaryGeometry& geometry, const Json& json)
{
    const Eigen::Index n = geometry.total_samples();
    const Eigen::VectorXd re = read_reals(field(json, "re", "function"), n, "function.re");
    const Eigen::VectorXd im = read_reals(field(json, "im", "function"), n, "function.im");
    CVector values(n);
    values.real() = re;
    values.imag() = im;
    return BoundaryFunction(geometry, std::move(values));
}

Json to_json(const BoundaryOperator& op)
{
    const CMatrix& a = op.matrix();
    const bool real = a.imag().cwiseAbs().maxCoeff() == 0.0;
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (real) {
                row.push_back(a(i, j).real());
            } else {
                row.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
            }
        }
        rows.push_back(std::move(row));
    }
    return {
        {"geometry", to_json(op.geometry())},
        {"matrix", std::move(rows)},
        {"domain_tag", std::string(to_string(op.domain()))},
        {"range_tag", std::string(to_string(op.range()))},
    };
}

BoundaryOperator operator_from_json(const Json& json)
{
    BoundaryGeometry geometry = geometry_from_json(field(json, "geometry", "operator"));
    const Json& rows = array(field(json, "matrix", "operator"), "matrix");
    const Eigen::Index n = geometry.total_samples();
    if (static_cast<Eigen::Index>(rows.size()) != n) {
        schema("matrix has " + std::to_string(rows.size()) + " rows, geometry has " + std::to_string(n) + " samples");
    }
    CMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = array(rows[static_cast<size_t>(i)], "matrix row");
        if (static_cast<Eigen::Index>(row.size()) != n) schema("matrix row " + std::to_string(i) + " has wrong length");
        for (Eigen::Index j = 0; j < n; ++j) {
            const Json& e = row[static_cast<size_t>(j)];
            if (e.is_array()) {
                if (e.size() != 2) schema("complex matrix entries must be [re, im]");
                a(i, j) = Complex(number(e[0], "matrix entry"), number(e[1], "matrix entry"));
            } else {
                a(i, j) = number(e, "matrix entry");
            }
        }
    }
    const auto tag = [&](const char* key) {
        const Json& t = field(json, key, "operator");
        if (!t.is_string()) schema(std::string(key) + " must be a string");
        return subspace_tag_from_string(t.get<std::string>());
    };
    return BoundaryOperator(std::move(geometry), std::move(a), tag("domain_tag"), tag("range_tag"));
}

Json to_json(const DNMap& dn)
{
    Json out = to_json(dn.op());
    const Provenance& p = dn.provenance();
    out["provenance"] = {
        {"method", std::string(to_string(p.method))},
        {"domain", p.domain},
        {"modes", p.modes},
        {"mesh_h", p.mesh_h},
    };
    const DnDiagnostics& d = dn.diagnostics();
    out["diagnostics"] = {
        {"kernel_defect", d.kernel_defect},
        {"range_mean_defect", d.range_mean_defect},
        {"symmetry_defect", d.symmetry_defect},
        {"nonnegativity_defect", d.nonnegativity_defect},
        {"imaginary_defect", d.imaginary_defect},
    };
    return out;
}

DNMap dn_from_json(const Json& json)
{
    BoundaryOperator op = operator_from_json(json);
    const Json& p = field(json, "provenance", "DN map");
    Provenance provenance;
    const Json& method = field(p, "method", "provenance");
    if (!method.is_string()) schema("provenance.method must be a string");
    provenance.method = dn_method_from_string(method.get<std::string>());
    const Json& domain = field(p, "domain", "provenance");
    if (!domain.is_string()) schema("provenance.domain must be a string");
    provenance.domain = domain.get<std::string>();
    provenance.modes = integer(field(p, "modes", "provenance"), "provenance.modes");
    provenance.mesh_h = number(field(p, "mesh_h", "provenance"), "provenance.mesh_h");
    return DNMap(std::move(op), std::move(provenance));
}

// Meshes

Json to_json(const PlanarMesh& mesh)
{
    Json vertices = Json::array();
    for (const Point& p : mesh.vertices) vertices.push_back(Json::array({p.x(), p.y()}));
    Json triangles = Json::array();
    for (const Triangle& t : mesh.triangles) triangles.push_back(Json::array({t[0], t[1], t[2]}));
    return {{"vertices", vertices}, {"triangles", triangles}, {"boundary_loops", mesh.boundary_loops}};
}

PlanarMesh mesh_from_json(const Json& json)
{
    PlanarMesh mesh;
    for (const Json& v : array(field(json, "vertices", "mesh"), "mesh.vertices")) {
        if (!v.is_array() || v.size() != 2) schema("mesh vertices must be [x, y] pairs");
        mesh.vertices.emplace_back(number(v[0], "vertex coordinate"), number(v[1], "vertex coordinate"));
    }
    const int n = mesh.vertex_count();
    const auto index = [n](const Json& j) {
        const int i = integer(j, "vertex index");
        if (i < 0 || i >= n) schema("vertex index " + std::to_string(i) + " is out of range");
        return i;
    };
    for (const Json& t : array(field(json, "triangles", "mesh"), "mesh.triangles")) {
        if (!t.is_array() || t.size() != 3) schema("mesh triangles must be index triples");
        mesh.triangles.push_back({index(t[0]), index(t[1]), index(t[2])});
    }
    for (const Json& loop : array(field(json, "boundary_loops", "mesh"), "mesh.boundary_loops")) {
        std::vector<int> indices;
        for (const Json& i : array(loop, "boundary loop")) indices.push_back(index(i));
        mesh.boundary_loops.push_back(std::move(indices));
    }
    validate_mesh(mesh);
    return mesh;
}

// Reports

Json to_json(const TopologyReport& report)
{
    Json basis = Json::array();
    for (const auto& f : report.neumann_basis) basis.push_back(values_to_json(f));
    Json out = {
        {"beta1", report.beta1},
        {"circle_count", report.circle_count},
        {"singular_values", real_array(report.singular_values)},
        {"rank_tolerance_used", report.rank_tolerance_used},
        {"t2_range_dim", report.t2_range_dim},
        {"t2_singular_values", real_array(report.t2_singular_values)},
        {"bound_2_21_holds", report.bound_holds},
        {"band", report.band},
        {"neumann_basis", basis},
    };
    if (!report.neumann_basis.empty()) out["geometry"] = to_json(report.neumann_basis.front().geometry());
    return out;
}

Json to_json(const HoloTraceResult& result)
{
    Json out = {
        {"geometry", to_json(result.a.geometry())},
        {"a", values_to_json(result.a)},
        {"b", values_to_json(result.b)},
        {"c", complex_list(result.c.values)},
        {"c_balanced", result.c.balanced},
        {"residual_6_1", real_array(result.circle_mean_residuals)},
        {"residual_6_2", result.flux_residual},
        {"residual_6_3", result.conjugate_residual},
        {"dual_residual", result.dual_residual},
        {"tolerance", result.tolerance},
        {"member", result.member},
    };
    return out;
}

Json to_json(const FlattenResult& result)
{
    return {
        {"phi", real_array(result.phi)},
        {"rho", real_array(result.rho)},
        {"curvature_in_norm", result.curvature_in_norm},
        {"curvature_out_norm", result.curvature_out_norm},
        {"boundary_defect", result.boundary_defect},
    };
}

// CSV

void write_boundary_function_csv(std::ostream& out, const BoundaryFunction& f)
{
    const auto& g = f.geometry();
    out << "circle_index,k,s,value_re,value_im\n";
    for (int j = 0; j < g.circle_count(); ++j) {
        for (int k = 0; k < g.samples(j); ++k) {
            const Complex v = f(j, k);
            out << j << ',' << k << ',' << format_real(g.arc_position(j, k)) << ',' << format_real(v.real()) << ','
                << format_real(v.imag()) << '\n';
        }
    }
}

BoundaryFunction read_boundary_function_csv(std::istream& in, const BoundaryGeometry& geometry)
{
    const auto rows = csv_rows(in, "circle_index,k,s,value_re,value_im", 5);
    if (static_cast<int>(rows.size()) != geometry.total_samples()) {
        schema("CSV has " + std::to_string(rows.size()) + " samples, geometry has " +
               std::to_string(geometry.total_samples()));
    }
    CVector values(geometry.total_samples());
    size_t r = 0;
    for (int j = 0; j < geometry.circle_count(); ++j) {
        for (int k = 0; k < geometry.samples(j); ++k, ++r) {
            const auto& row = rows[r];
            if (parse_int(row[0], "circle_index") != j || parse_int(row[1], "k") != k) {
                schema("CSV row " + std::to_string(r) + " is out of order");
            }
            const double s = parse_double(row[2], "s");
            if (std::abs(s - geometry.arc_position(j, k)) > 1e-9 * geometry.length(j)) {
                schema("CSV row " + std::to_string(r) + " has arc position " + row[2] + " off the grid");
            }
            values[static_cast<Eigen::Index>(r)] = Complex(parse_double(row[3], "value_re"), parse_double(row[4], "value_im"));
        }
    }
    return BoundaryFunction(geometry, std::move(values));
}

void write_conformal_factor_csv(std::ostream& out, const ConformalFactor& lambda)
{
    out << "vertex_index,lambda\n";
    for (Eigen::Index i = 0; i < lambda.values.size(); ++i) out << i << ',' << format_real(lambda.values[i]) << '\n';
}

ConformalFactor read_conformal_factor_csv(std::istream& in, const PlanarMesh& mesh)
{
    const auto rows = csv_rows(in, "vertex_index,lambda", 2);
    if (static_cast<int>(rows.size()) != mesh.vertex_count()) {
        schema("conformal factor has " + std::to_string(rows.size()) + " rows, mesh has " +
               std::to_string(mesh.vertex_count()) + " vertices");
    }
    ConformalFactor lambda{Eigen::VectorXd(mesh.vertex_count())};
    for (size_t r = 0; r < rows.size(); ++r) {
        if (parse_int(rows[r][0], "vertex_index") != static_cast<int>(r)) {
            schema("conformal factor row " + std::to_string(r) + " is out of order");
        }
        lambda.values[static_cast<Eigen::Index>(r)] = parse_double(rows[r][1], "lambda");
    }
    lambda.validate(mesh);
    return lambda;
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

} // namespace steklov
