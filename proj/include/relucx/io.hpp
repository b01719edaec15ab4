/**
 * File formats.
 *
 *   model.json     {"architecture":[n0,...,1], "layers":[{"weights":[[...],...], "bias":[...]}, ...]}
 *   vertices.jsonl {"coords":[...], "signs":"(...)", "zero_set":[...], "residual":r} per line
 *   complex.jsonl  {"signs":"(...)", "dim":k} per line
 *   betti.json     {"betti":[...], "bounded":b, "unbounded":u}
 *
 * Every JSONL file is written in canonical sign order.
 */

#ifndef RELUCX_IO_HPP
#define RELUCX_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "relucx/builder.hpp"
#include "relucx/model.hpp"
#include "relucx/oracle.hpp"
#include "relucx/topology.hpp"

namespace relucx {

nlohmann::json model_to_json(const ReluNetwork& net);
/// Throws FormatError naming the offending field.
ReluNetwork model_from_json(const nlohmann::json& j);

void write_model(const ReluNetwork& net, const std::filesystem::path& path);
/// Throws FormatError for unreadable files, malformed JSON or bad fields.
ReluNetwork read_model(const std::filesystem::path& path);

void write_vertices_jsonl(std::ostream& out, const std::vector<Vertex>& vertices);
std::vector<Vertex> read_vertices_jsonl(std::istream& in);

void write_complex_jsonl(std::ostream& out, const CubicalComplex& cx);
/// Cell sign sequences in file order.
std::vector<SignSequence> read_complex_jsonl(std::istream& in);

nlohmann::json betti_to_json(const BettiReport& report);

nlohmann::json oracle_report_to_json(const OracleReport& report);

/**
 * SVG of a two-input decision boundary: one line per boundary edge, rays and
 * lines clipped to the box.  Throws std::invalid_argument unless n0 == 2.
 */
void write_decision_boundary_svg(std::ostream& out, const ReluNetwork& net,
                                 const std::vector<Vertex>& vertices, const CubicalComplex& db,
                                 const SampleGrid& box);

}   // namespace relucx

#endif
