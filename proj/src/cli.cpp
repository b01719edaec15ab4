#include "relucx/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "relucx/errors.hpp"
#include "relucx/io.hpp"
#include "relucx/oracle.hpp"
#include "relucx/topology.hpp"

namespace relucx::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json degenerate_json(const DegenerateNetwork& e)
{
    return {{"error", "degenerate_network"},
            {"kind", DegenerateNetwork::kind_name(e.kind())},
            {"layer", e.layer()},
            {"node", e.node()},
            {"value", e.value()},
            {"detail", e.what()}};
}

json duplicate_json(const DuplicateMismatch& e)
{
    return {{"error", "duplicate_mismatch"}, {"detail", e.what()}};
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::ios_base::failure("cannot write " + path.string());
    return f;
}

void report_diagnostic(const json& diag, const std::optional<fs::path>& out_dir, std::ostream& out)
{
    out << diag.dump() << '\n';
    if (!out_dir)
        return;
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    std::ofstream f(*out_dir / "degenerate.json");
    if (f)
        f << diag.dump(2) << '\n';
}

SampleGrid grid_from_box(const std::vector<double>& box, int n0, int resolution)
{
    if (box.size() == 1)
        return SampleGrid::cube(n0, box[0], resolution);
    if (box.size() != 2 * static_cast<std::size_t>(n0))
        throw std::invalid_argument("--box takes one half-width or " + std::to_string(2 * n0) + " bounds");
    SampleGrid g;
    g.resolution = resolution;
    for (int a = 0; a < n0; ++a) {
        g.lower.push_back(box[2 * static_cast<std::size_t>(a)]);
        g.upper.push_back(box[2 * static_cast<std::size_t>(a) + 1]);
    }
    return g;
}

int default_resolution(int n0)
{
    if (n0 <= 2)
        return 600;
    if (n0 == 3)
        return 100;
    return 30;
}

/// Runs `body`, mapping library exceptions onto exit codes.
template <typename F>
int guarded(F&& body, const std::optional<fs::path>& out_dir, std::ostream& out, std::ostream& err)
{
    try {
        return body();
    }
    catch (const DegenerateNetwork& e) {
        report_diagnostic(degenerate_json(e), out_dir, out);
        err << "error: degenerate network: " << e.what() << '\n';
        return kDegenerate;
    }
    catch (const DuplicateMismatch& e) {
        report_diagnostic(duplicate_json(e), out_dir, out);
        err << "error: " << e.what() << '\n';
        return kDegenerate;
    }
    catch (const ArchitectureUnsupported& e) {
        err << "error: unsupported architecture: " << e.what() << '\n';
        return kUnsupported;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}   // namespace

unsigned default_threads()
{
    if (const char* env = std::getenv("RELUCX_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(v);
        }
        catch (const std::exception&) {
        }
    }
    return 1;
}

int cmd_build(const BuildCommand& cmd, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const ReluNetwork net = read_model(cmd.model);
            const NetworkAnalysis a = analyze_network(net, cmd.options);
            fs::create_directories(cmd.out_dir);
            {
                auto f = open_output(cmd.out_dir / "vertices.jsonl");
                write_vertices_jsonl(f, a.build.vertices);
            }
            {
                auto f = open_output(cmd.out_dir / "complex.jsonl");
                write_complex_jsonl(f, a.complex);
            }
            const json betti = betti_to_json(a.betti);
            {
                auto f = open_output(cmd.out_dir / "betti.json");
                f << betti.dump() << '\n';
            }
            if (cmd.svg) {
                if (net.input_dim() != 2) {
                    err << "warning: --svg ignored, input dimension is " << net.input_dim() << '\n';
                }
                else {
                    const SampleGrid box = cmd.box.empty() ? vertex_bounding_grid(a.build.vertices, 2, 2)
                                                           : grid_from_box(cmd.box, 2, 2);
                    auto f = open_output(cmd.out_dir / "db.svg");
                    write_decision_boundary_svg(f, net, a.build.vertices, a.boundary, box);
                }
            }
            out << betti.dump() << '\n';
            return static_cast<int>(kOk);
        },
        cmd.out_dir, out, err);
}

int cmd_experiment(const ExperimentCommand& cmd, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const StatsRow row = run_experiment(cmd.config);
            fs::create_directories(cmd.out_dir);
            {
                auto f = open_output(cmd.out_dir / "stats.csv");
                write_stats_csv(f, row, true);
            }
            write_stats_csv(out, row, false);
            if (row.total_redraws > 0)
                err << "note: " << row.total_redraws << " degenerate draws replaced\n";
            return static_cast<int>(kOk);
        },
        cmd.out_dir, out, err);
}

int cmd_oracle_check(const OracleCommand& cmd, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const ReluNetwork net = read_model(cmd.model);
            const int n0 = net.input_dim();
            const LayerBuildState build = build_complex(net, cmd.options);

            std::vector<SignSequence> built;
            if (cmd.complex) {
                std::ifstream f(*cmd.complex);
                if (!f)
                    throw FormatError("cannot read " + cmd.complex->string());
                for (auto& s : read_complex_jsonl(f))
                    if (s.all_nonzero())
                        built.push_back(std::move(s));
            }
            else {
                for (const auto& [region, incident] : build.regions)
                    built.push_back(region);
            }

            const int res = cmd.resolution > 0 ? cmd.resolution : default_resolution(n0);
            const SampleGrid grid =
                cmd.box.empty() ? vertex_bounding_grid(build.vertices, n0, res) : grid_from_box(cmd.box, n0, res);
            const auto sampled = sample_region_signs(net, grid, 1e-6, cmd.options.threads);
            const OracleReport report = compare_regions(net, built, sampled, build.vertices);
            const json j = oracle_report_to_json(report);
            out << j.dump(2) << '\n';
            if (cmd.out_dir) {
                fs::create_directories(*cmd.out_dir);
                auto f = open_output(*cmd.out_dir / "oracle.json");
                f << j.dump(2) << '\n';
            }
            if (!report.subset_ok()) {
                err << "oracle: " << report.unexpected.size() << " sampled regions missing from the complex\n";
                return static_cast<int>(kOracleViolation);
            }
            if (!report.counts_ok()) {
                err << "oracle: " << report.unwitnessed.size() << " built regions could not be witnessed\n";
                return static_cast<int>(kOracleViolation);
            }
            return static_cast<int>(kOk);
        },
        cmd.out_dir, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Canonical polyhedral complexes and decision boundary topology of ReLU networks", "relucx"};
    app.require_subcommand(1);

    Tolerances tol;
    unsigned threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--deg-tol", tol.degeneracy_tol, "Near-zero threshold for node map values")
            ->capture_default_str();
        sub->add_option("--cond-max", tol.cond_max, "Largest accepted condition number of a vertex solve")
            ->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads (default: RELUCX_THREADS or 1)")
            ->check(CLI::PositiveNumber);
    };

    BuildCommand build;
    auto* build_cmd = app.add_subcommand("build", "Build the complex and decision boundary of a model");
    build_cmd->add_option("--model", build.model, "Model JSON file")->required();
    build_cmd->add_option("--out", build.out_dir, "Output directory")->required();
    build_cmd->add_flag("--svg", build.svg, "Also write db.svg (two inputs only)");
    build_cmd->add_option("--box", build.box, "SVG box: half-width or lo0,hi0,lo1,hi1")->delimiter(',');
    add_common(build_cmd);

    ExperimentCommand experiment;
    std::string arch;
    auto* exp_cmd = app.add_subcommand("experiment", "Betti statistics over randomly initialised networks");
    exp_cmd->add_option("--arch", arch, "Architecture, e.g. 2,5,1")->required();
    exp_cmd->add_option("--trials", experiment.config.trials, "Number of networks")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    exp_cmd->add_option("--seed", experiment.config.base_seed, "Base seed")->capture_default_str();
    exp_cmd->add_option("--out", experiment.out_dir, "Output directory")->required();
    add_common(exp_cmd);

    OracleCommand oracle;
    std::string complex_path;
    std::string oracle_out;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare built regions against grid sampling");
    oracle_cmd->add_option("--model", oracle.model, "Model JSON file")->required();
    oracle_cmd->add_option("--complex", complex_path, "Check this complex.jsonl instead of a fresh build");
    oracle_cmd->add_option("--box", oracle.box, "Sampling box: half-width or lo0,hi0,...")->delimiter(',');
    oracle_cmd->add_option("--resolution", oracle.resolution, "Grid points per axis")
        ->check(CLI::Range(2, 1 << 20));
    oracle_cmd->add_option("--out", oracle_out, "Also write oracle.json here");
    add_common(oracle_cmd);

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kInputError);
    }

    const unsigned workers = threads > 0 ? threads : default_threads();
    if (build_cmd->parsed()) {
        build.options.tol = tol;
        build.options.threads = workers;
        return cmd_build(build, out, err);
    }
    if (exp_cmd->parsed()) {
        try {
            experiment.config.architecture = parse_architecture(arch);
        }
        catch (const std::exception& e) {
            err << "error: --arch: " << e.what() << '\n';
            return kInputError;
        }
        experiment.config.tol = tol;
        experiment.config.threads = workers;
        return cmd_experiment(experiment, out, err);
    }
    oracle.options.tol = tol;
    oracle.options.threads = workers;
    if (!complex_path.empty())
        oracle.complex = complex_path;
    if (!oracle_out.empty())
        oracle.out_dir = oracle_out;
    return cmd_oracle_check(oracle, out, err);
}

}   // namespace relucx::cli
