#include "relucx/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "relucx/errors.hpp"

namespace relucx {

using nlohmann::json;

namespace {

const json& member(const json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object())
        throw FormatError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw FormatError(path + "." + key + ": missing field");
    return *it;
}

double finite_number(const json& j, const std::string& path)
{
    if (!j.is_number())
        throw FormatError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw FormatError(path + ": not finite");
    return v;
}

const json& array_at(const json& j, const std::string& path)
{
    if (!j.is_array())
        throw FormatError(path + ": expected an array");
    return j;
}

json parse_line(const std::string& line, std::size_t lineno)
{
    try {
        return json::parse(line);
    }
    catch (const json::parse_error& e) {
        throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
}

}   // namespace

json model_to_json(const ReluNetwork& net)
{
    json j;
    j["architecture"] = net.architecture();
    json layers = json::array();
    for (const auto& l : net.layers()) {
        json weights = json::array();
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
                row.push_back(l.weights(r, c));
            weights.push_back(std::move(row));
        }
        json bias = json::array();
        for (Eigen::Index r = 0; r < l.bias.size(); ++r)
            bias.push_back(l.bias(r));
        layers.push_back(json{{"weights", std::move(weights)}, {"bias", std::move(bias)}});
    }
    j["layers"] = std::move(layers);
    return j;
}

ReluNetwork model_from_json(const json& j)
{
    const json& arch_j = array_at(member(j, "architecture", "model"), "model.architecture");
    std::vector<int> arch;
    for (std::size_t i = 0; i < arch_j.size(); ++i) {
        const std::string path = "model.architecture[" + std::to_string(i) + "]";
        if (!arch_j[i].is_number_integer() || arch_j[i].get<long long>() <= 0)
            throw FormatError(path + ": expected a positive integer");
        arch.push_back(arch_j[i].get<int>());
    }
    try {
        validate_architecture(arch);
    }
    catch (const DimensionMismatch& e) {
        throw FormatError(std::string("model.architecture: ") + e.what());
    }

    const json& layers_j = array_at(member(j, "layers", "model"), "model.layers");
    if (layers_j.size() + 1 != arch.size())
        throw FormatError("model.layers: " + std::to_string(layers_j.size()) + " layers for architecture of "
                          + std::to_string(arch.size()) + " widths");
    std::vector<AffineLayer> layers;
    for (std::size_t t = 0; t < layers_j.size(); ++t) {
        const std::string lpath = "model.layers[" + std::to_string(t) + "]";
        const int rows = arch[t + 1];
        const int cols = arch[t];
        const json& w = array_at(member(layers_j[t], "weights", lpath), lpath + ".weights");
        const json& b = array_at(member(layers_j[t], "bias", lpath), lpath + ".bias");
        if (static_cast<int>(w.size()) != rows)
            throw FormatError(lpath + ".weights: expected " + std::to_string(rows) + " rows, got "
                              + std::to_string(w.size()));
        if (static_cast<int>(b.size()) != rows)
            throw FormatError(lpath + ".bias: expected " + std::to_string(rows) + " entries, got "
                              + std::to_string(b.size()));
        AffineLayer l{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
        for (int r = 0; r < rows; ++r) {
            const std::string rpath = lpath + ".weights[" + std::to_string(r) + "]";
            const json& row = array_at(w[static_cast<std::size_t>(r)], rpath);
            if (static_cast<int>(row.size()) != cols)
                throw FormatError(rpath + ": expected " + std::to_string(cols) + " entries, got "
                                  + std::to_string(row.size()));
            for (int c = 0; c < cols; ++c)
                l.weights(r, c) = finite_number(row[static_cast<std::size_t>(c)],
                                                rpath + "[" + std::to_string(c) + "]");
            l.bias(r) = finite_number(b[static_cast<std::size_t>(r)], lpath + ".bias[" + std::to_string(r) + "]");
        }
        layers.push_back(std::move(l));
    }
    return ReluNetwork(std::move(layers));
}

void write_model(const ReluNetwork& net, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << model_to_json(net).dump(2) << '\n';
}

ReluNetwork read_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open model file " + path.string());
    json j;
    try {
        in >> j;
    }
    catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

void write_vertices_jsonl(std::ostream& out, const std::vector<Vertex>& vertices)
{
    std::vector<const Vertex*> sorted;
    for (const auto& v : vertices)
        sorted.push_back(&v);
    std::sort(sorted.begin(), sorted.end(), [](const Vertex* a, const Vertex* b) { return a->signs < b->signs; });
    for (const Vertex* v : sorted) {
        json j;
        j["coords"] = std::vector<double>(v->coords.data(), v->coords.data() + v->coords.size());
        j["signs"] = v->signs.to_string();
        j["zero_set"] = v->zero_set;
        j["residual"] = v->max_residual;
        out << j.dump() << '\n';
    }
}

std::vector<Vertex> read_vertices_jsonl(std::istream& in)
{
    std::vector<Vertex> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const json j = parse_line(line, lineno);
        const std::string path = "line " + std::to_string(lineno);
        Vertex v;
        const json& coords = array_at(member(j, "coords", path), path + ".coords");
        v.coords.resize(static_cast<Eigen::Index>(coords.size()));
        for (std::size_t i = 0; i < coords.size(); ++i)
            v.coords(static_cast<Eigen::Index>(i)) = finite_number(coords[i], path + ".coords");
        const json& signs = member(j, "signs", path);
        if (!signs.is_string())
            throw FormatError(path + ".signs: expected a string");
        v.signs = SignSequence::parse(signs.get<std::string>());
        for (const json& z : array_at(member(j, "zero_set", path), path + ".zero_set")) {
            if (!z.is_number_unsigned())
                throw FormatError(path + ".zero_set: expected non-negative integers");
            v.zero_set.push_back(z.get<std::size_t>());
        }
        v.max_residual = finite_number(member(j, "residual", path), path + ".residual");
        out.push_back(std::move(v));
    }
    return out;
}

void write_complex_jsonl(std::ostream& out, const CubicalComplex& cx)
{
    for (std::size_t id = 0; id < cx.size(); ++id)
        out << json{{"signs", cx.cell(id).to_string()}, {"dim", cx.dimension(id)}}.dump() << '\n';
}

std::vector<SignSequence> read_complex_jsonl(std::istream& in)
{
    std::vector<SignSequence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const json j = parse_line(line, lineno);
        const json& signs = member(j, "signs", "line " + std::to_string(lineno));
        if (!signs.is_string())
            throw FormatError("line " + std::to_string(lineno) + ".signs: expected a string");
        out.push_back(SignSequence::parse(signs.get<std::string>()));
    }
    return out;
}

json betti_to_json(const BettiReport& report)
{
    return json{{"betti", report.betti}, {"bounded", report.bounded}, {"unbounded", report.unbounded}};
}

json oracle_report_to_json(const OracleReport& report)
{
    auto strings = [](const std::vector<SignSequence>& v) {
        json a = json::array();
        for (const auto& s : v)
            a.push_back(s.to_string());
        return a;
    };
    return json{{"regions_builder", report.regions_builder},
                {"regions_sampled", report.regions_sampled},
                {"missing", strings(report.missing)},
                {"unexpected", strings(report.unexpected)},
                {"unwitnessed", strings(report.unwitnessed)},
                {"counts_ok", report.counts_ok()}};
}

namespace {

struct Segment
{
    Eigen::Vector2d a;
    Eigen::Vector2d b;
};

// Liang-Barsky; returns false when the segment misses the box.
bool clip(Segment& s, const SampleGrid& box)
{
    double t0 = 0.0, t1 = 1.0;
    const Eigen::Vector2d d = s.b - s.a;
    for (int axis = 0; axis < 2; ++axis) {
        const double lo = box.lower[static_cast<std::size_t>(axis)];
        const double hi = box.upper[static_cast<std::size_t>(axis)];
        const double p[2] = {-d(axis), d(axis)};
        const double q[2] = {s.a(axis) - lo, hi - s.a(axis)};
        for (int k = 0; k < 2; ++k) {
            if (p[k] == 0.0) {
                if (q[k] < 0.0)
                    return false;
                continue;
            }
            const double r = q[k] / p[k];
            if (p[k] < 0.0)
                t0 = std::max(t0, r);
            else
                t1 = std::min(t1, r);
        }
    }
    if (t0 > t1)
        return false;
    const Eigen::Vector2d a = s.a + t0 * d;
    s.b = s.a + t1 * d;
    s.a = a;
    return true;
}

}   // namespace

void write_decision_boundary_svg(std::ostream& out, const ReluNetwork& net, const std::vector<Vertex>& vertices,
                                 const CubicalComplex& db, const SampleGrid& box)
{
    if (net.input_dim() != 2)
        throw std::invalid_argument("SVG output is only available for two-dimensional inputs");
    box.validate();
    std::map<SignSequence, Eigen::Vector2d> where;
    for (const auto& v : vertices)
        where.emplace(v.signs, Eigen::Vector2d(v.coords(0), v.coords(1)));

    // Long enough that any ray starting inside or near the box leaves it.
    const Eigen::Vector2d lo(box.lower[0], box.lower[1]), hi(box.upper[0], box.upper[1]);
    const double reach = 4.0 * ((hi - lo).norm() + std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()));
    std::vector<Segment> segments;
    for (std::size_t id : db.cells_of_dim(1)) {
        const SignSequence& edge = db.cell(id);
        std::vector<Eigen::Vector2d> ends;
        for (std::size_t f : db.facets(id))
            ends.push_back(where.at(db.cell(f)));
        if (ends.size() == 2) {
            segments.push_back({ends[0], ends[1]});
            continue;
        }
        // Direction of the edge inside an adjacent region.
        SignSequence region = edge;
        for (std::size_t z : edge.zero_positions())
            region.set(z, 1);
        const auto maps = region_affine_maps(net, region, net.layer_count());
        const std::size_t zero = edge.zero_positions().front();
        const Eigen::Vector2d normal = maps[zero].normal;
        Eigen::Vector2d dir(-normal(1), normal(0));
        dir.normalize();
        if (ends.size() == 1) {
            const Eigen::Vector2d v = ends.front();
            const double probe = 1e-6 * (1.0 + v.norm());
            const Eigen::VectorXd vals = node_map_values(net, Eigen::VectorXd(v + probe * dir));
            bool forward = true;
            for (std::size_t i = 0; i < edge.size() && forward; ++i)
                if (edge[i] != 0)
                    forward = vals(static_cast<Eigen::Index>(i)) * edge[i] > 0;
            if (!forward)
                dir = -dir;
            segments.push_back({v, v + reach * dir});
        }
        else {
            const Eigen::Vector2d p = -maps[zero].offset * normal / normal.squaredNorm();
            segments.push_back({p - reach * dir, p + reach * dir});
        }
    }

    const double size = 600.0;
    const double sx = size / (box.upper[0] - box.lower[0]);
    const double sy = size / (box.upper[1] - box.lower[1]);
    auto px = [&](const Eigen::Vector2d& p) {
        return Eigen::Vector2d((p(0) - box.lower[0]) * sx, size - (p(1) - box.lower[1]) * sy);
    };
    out << std::setprecision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (Segment s : segments) {
        if (!clip(s, box))
            continue;
        const Eigen::Vector2d a = px(s.a), b = px(s.b);
        out << "  <line x1=\"" << a(0) << "\" y1=\"" << a(1) << "\" x2=\"" << b(0) << "\" y2=\"" << b(1)
            << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
    }
    for (std::size_t id : db.cells_of_dim(0)) {
        const Eigen::Vector2d p = where.at(db.cell(id));
        if (p(0) < box.lower[0] || p(0) > box.upper[0] || p(1) < box.lower[1] || p(1) > box.upper[1])
            continue;
        const Eigen::Vector2d q = px(p);
        out << "  <circle cx=\"" << q(0) << "\" cy=\"" << q(1) << "\" r=\"3\" fill=\"black\"/>\n";
    }
    out << "</svg>\n";
}

}   // namespace relucx
