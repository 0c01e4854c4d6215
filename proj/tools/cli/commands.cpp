#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <mmq/analytic.hpp>
#include <mmq/io.hpp>
#include <mmq/model.hpp>
#include <mmq/series.hpp>

namespace mmq::cli {

using nlohmann::json;

Format parse_format(const std::string& name)
{
    if (name == "csv") return Format::csv;
    if (name == "json" || name == "structured") return Format::json;
    throw Error(ErrorCode::invalid_argument, "unknown format '" + name + "' (expected csv or json)");
}

namespace {

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::io_error:
    case ErrorCode::invalid_argument: return usage_error;
    default: return invalid_model;
    }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body)
{
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
}

std::string model_label(const io::ModelFile& file, const std::string& path)
{
    return file.name ? *file.name : path;
}

/// Human-readable scalar: shortest round-trip decimal, or an exact fraction with its value.
std::string display(double v) { return fmt::format("{}", v); }
std::string display(const Rational& v)
{
    if (v.get_den() == 1) return v.get_str();
    return fmt::format("{} (~{})", v.get_str(), to_double(v));
}

json json_scalar(double v) { return v; }
json json_scalar(const Rational& v) { return v.get_str(); }

void warn_exact(const CommonOptions& opts, std::ostream& err)
{
    if (opts.backend == Backend::exact)
        err << "warning: exact rational backend selected; run time grows quickly with the number of terms\n";
}

template <typename T>
BasicModel<T> validated_model(const io::ModelFile& file)
{
    if constexpr (ScalarTraits<T>::exact) {
        return validate(file.to_exact()).value();
    } else {
        return validate(file.to_float()).value();
    }
}

/// Runs `body.template operator()<T>()` with T picked by the backend.
template <typename Body>
int with_backend(Backend backend, Body&& body)
{
    if (backend == Backend::exact) return body.template operator()<Rational>();
    return body.template operator()<double>();
}

// ---------------------------------------------------------------- validate

template <typename T>
int report_validation(const io::ModelFile& file, const std::string& label, std::ostream& out)
{
    BasicModel<T> spec;
    if constexpr (ScalarTraits<T>::exact) {
        spec = file.to_exact();
    } else {
        spec = file.to_float();
    }
    const Validation<T> result = validate(spec);
    if (result.ok()) {
        const MomentSummary<T> m = moments(*result.model);
        out << fmt::format("{}: valid; rho={:.4f}\n", label, to_double(m.rho));
        return ok;
    }
    out << fmt::format("{}: invalid; {} violation(s)\n", label, result.violations.size());
    for (const auto& v : result.violations) out << "  " << to_string(v.code) << ": " << v.detail << "\n";
    return invalid_model;
}

// ---------------------------------------------------------------- analyze

template <typename T>
int report_analysis(const io::ModelFile& file, const CommonOptions& opts, std::ostream& out)
{
    const BasicModel<T> spec = validated_model<T>(file);
    const AnalyticReport<T> r = analyze(spec);
    const MomentSummary<T>& m = r.moments;
    const std::string label = model_label(file, opts.model_path);

    if (opts.format == Format::json) {
        json doc = {
            {"model", label},
            {"backend", std::string(to_string(opts.backend))},
            {"f_bar", json_scalar(m.f_bar)},
            {"f2_bar", json_scalar(m.f2_bar)},
            {"g_bar", json_scalar(m.g_bar)},
            {"g2_bar", json_scalar(m.g2_bar)},
            {"rho", json_scalar(m.rho)},
            {"lambda", json_scalar(m.lambda)},
            {"pi0", json_scalar(m.pi0)},
            {"b0", json_scalar(m.b0)},
            {"expected_queue", json_scalar(r.expected_queue)},
            {"expected_delay", json_scalar(r.expected_delay)},
        };
        out << doc.dump(2) << "\n";
        return ok;
    }

    out << "model:   " << label << "\n";
    out << "backend: " << to_string(opts.backend) << "\n";
    const std::pair<const char*, const T*> rows[] = {
        {"f_bar", &m.f_bar}, {"f2_bar", &m.f2_bar}, {"g_bar", &m.g_bar},
        {"g2_bar", &m.g2_bar}, {"rho", &m.rho},     {"lambda", &m.lambda},
        {"pi0", &m.pi0},     {"b0", &m.b0},         {"E[Q]", &r.expected_queue},
        {"E[T]", &r.expected_delay},
    };
    for (const auto& [name, value] : rows) out << fmt::format("{:<8} {}\n", name, display(*value));
    return ok;
}

// ---------------------------------------------------------------- dist

template <typename T>
void add_breakdown_metadata(io::CsvTable& table, const QueueDistribution<T>& dist)
{
    table.metadata.emplace_back("k_max", std::to_string(dist.k_max));
    table.metadata.emplace_back("k_effective", std::to_string(dist.k_effective()));
    table.metadata.emplace_back("mass_accounted", format_scalar(dist.mass_accounted));
    if (dist.breakdown) {
        const Breakdown& b = *dist.breakdown;
        table.metadata.emplace_back("breakdown", std::string(to_string(b.reason)));
        table.metadata.emplace_back("breakdown_index", std::to_string(b.index));
        table.metadata.emplace_back("breakdown_value", format_scalar(b.value));
        table.metadata.emplace_back("breakdown_envelope", format_scalar(b.envelope));
    } else {
        table.metadata.emplace_back("breakdown", "none");
    }
}

template <typename T>
json breakdown_json(const QueueDistribution<T>& dist)
{
    if (!dist.breakdown) return nullptr;
    const Breakdown& b = *dist.breakdown;
    return {{"reason", std::string(to_string(b.reason))},
            {"index", b.index},
            {"value", b.value},
            {"envelope", b.envelope}};
}

template <typename T>
void warn_breakdown(const QueueDistribution<T>& dist, std::ostream& err)
{
    if (!dist.breakdown) return;
    const Breakdown& b = *dist.breakdown;
    err << fmt::format("warning: float64 recursion stopped at k={} ({}, value {:.3g}, envelope {:.3g}); "
                       "rows end at k={}. Use --backend exact for exact coefficients.\n",
                       b.index, to_string(b.reason), b.value, b.envelope, dist.k_effective());
}

template <typename T>
int report_distribution(const io::ModelFile& file, const DistOptions& opts, std::ostream& out, std::ostream& err)
{
    const BasicModel<T> spec = validated_model<T>(file);
    NumericConfig config;
    config.backend = opts.common.backend;
    config.k_max = opts.k_max;
    config.negative_tolerance = opts.negative_tolerance;
    config.detect_rounding_floor = opts.rounding_floor;
    const QueueDistribution<T> dist = queue_distribution(spec, config);
    const std::string label = model_label(file, opts.common.model_path);

    if (opts.common.format == Format::json) {
        json rows = json::array();
        for (std::size_t k = 0; k < dist.p.size(); ++k)
            rows.push_back({{"k", k}, {"p", json_scalar(dist.p[k])}, {"tail", json_scalar(dist.tail[k])}});
        json doc = {{"model", label},
                    {"backend", std::string(to_string(config.backend))},
                    {"k_max", dist.k_max},
                    {"k_effective", dist.k_effective()},
                    {"mass_accounted", json_scalar(dist.mass_accounted)},
                    {"breakdown", breakdown_json(dist)},
                    {"rows", rows}};
        out << doc.dump(2) << "\n";
    } else {
        io::CsvTable table;
        table.header = {"k", "p", "tail"};
        for (std::size_t k = 0; k < dist.p.size(); ++k)
            table.rows.push_back({std::to_string(k), format_scalar(dist.p[k]), format_scalar(dist.tail[k])});
        table.metadata.emplace_back("model", label);
        table.metadata.emplace_back("backend", std::string(to_string(config.backend)));
        add_breakdown_metadata(table, dist);
        out << io::write_csv(table);
    }
    warn_breakdown(dist, err);
    return ok;
}

// ---------------------------------------------------------------- simulate

std::string optional_field(const std::optional<double>& v) { return v ? format_scalar(*v) : std::string(); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void add_simulation_metadata(io::CsvTable& table, const SimulationReport& report, const SimulationConfig& sim)
{
    table.metadata.emplace_back("runs", std::to_string(sim.runs));
    table.metadata.emplace_back("iterations", std::to_string(sim.iterations));
    table.metadata.emplace_back("burn_in", std::to_string(sim.burn_in));
    table.metadata.emplace_back("seed", std::to_string(sim.seed));
    table.metadata.emplace_back("generator", report.generator);
    table.metadata.emplace_back("min_resolvable", format_scalar(report.min_resolvable));
    table.metadata.emplace_back("lumped_above_kmax", format_scalar(report.lumped.mean));
    table.metadata.emplace_back("sim_mean_queue", format_scalar(report.mean_queue.mean));
    table.metadata.emplace_back("sim_mean_queue_ci_low", optional_field(report.mean_queue.ci_low));
    table.metadata.emplace_back("sim_mean_queue_ci_high", optional_field(report.mean_queue.ci_high));
}

json simulation_json(const SimulationReport& report, const SimulationConfig& sim)
{
    return {{"runs", sim.runs},
            {"iterations", sim.iterations},
            {"burn_in", sim.burn_in},
            {"seed", sim.seed},
            {"generator", report.generator},
            {"min_resolvable", report.min_resolvable},
            {"lumped_above_kmax", report.lumped.mean},
            {"mean_queue",
             {{"mean", report.mean_queue.mean},
              {"per_run", report.mean_queue.per_run},
              {"ci_low", optional_json(report.mean_queue.ci_low)},
              {"ci_high", optional_json(report.mean_queue.ci_high)}}}};
}

int report_simulation(const io::ModelFile& file, const SimulateOptions& opts, std::ostream& out)
{
    const ModelSpec spec = validated_model<double>(file);
    const SimulationReport report = simulate(spec, opts.sim);
    const std::string label = model_label(file, opts.common.model_path);

    if (opts.common.format == Format::json) {
        json doc = simulation_json(report, opts.sim);
        doc["model"] = label;
        json rows = json::array();
        for (std::size_t k = 0; k < report.p_hat.size(); ++k) {
            const Estimate& e = report.p_hat[k];
            rows.push_back({{"k", k},
                            {"p_hat", e.mean},
                            {"per_run", e.per_run},
                            {"ci_low", optional_json(e.ci_low)},
                            {"ci_high", optional_json(e.ci_high)}});
        }
        doc["rows"] = rows;
        out << doc.dump(2) << "\n";
        return ok;
    }

    io::CsvTable table;
    table.header = {"k", "p_hat", "ci_low", "ci_high"};
    for (std::size_t k = 0; k < report.p_hat.size(); ++k) {
        const Estimate& e = report.p_hat[k];
        table.rows.push_back({std::to_string(k), format_scalar(e.mean), optional_field(e.ci_low),
                              optional_field(e.ci_high)});
    }
    table.metadata.emplace_back("model", label);
    add_simulation_metadata(table, report, opts.sim);
    out << io::write_csv(table);
    return ok;
}

// ---------------------------------------------------------------- compare

template <typename T>
int report_comparison(const io::ModelFile& file, const CompareOptions& opts, std::ostream& out, std::ostream& err)
{
    const BasicModel<T> spec = validated_model<T>(file);
    NumericConfig config;
    config.backend = opts.common.backend;
    config.k_max = opts.sim.k_max;
    config.detect_rounding_floor = opts.rounding_floor;
    const QueueDistribution<T> dist = queue_distribution(spec, config);
    const double analytic_mean = to_double(analyze(spec).expected_queue);

    const ModelSpec float_spec = validated_model<double>(file);
    const SimulationReport report = simulate(float_spec, opts.sim);

    std::size_t last = std::min(dist.k_effective(), opts.sim.k_max);
    // Rows past the support of both theory and simulation carry no information.
    while (last > 0 && dist.p[last] == 0 && report.p_hat[last].mean == 0.0) --last;

    const double resolvable = 10.0 * report.min_resolvable;
    std::size_t resolvable_rows = 0;
    std::size_t within_rows = 0;

    io::CsvTable table;
    table.header = {"k", "theory", "sim_mean", "ci_low", "ci_high", "within_ci"};
    json rows = json::array();
    for (std::size_t k = 0; k <= last && k < dist.p.size(); ++k) {
        const double theory = to_double(dist.p[k]);
        const Estimate& e = report.p_hat[k];
        const bool has_ci = e.ci_low.has_value();
        const bool within = e.contains(theory);
        if (theory >= resolvable && has_ci) {
            ++resolvable_rows;
            if (within) ++within_rows;
        }
        const std::string flag = has_ci ? (within ? "1" : "0") : "";
        table.rows.push_back({std::to_string(k), format_scalar(theory), format_scalar(e.mean), optional_field(e.ci_low),
                              optional_field(e.ci_high), flag});
        rows.push_back({{"k", k},
                        {"theory", theory},
                        {"sim_mean", e.mean},
                        {"ci_low", optional_json(e.ci_low)},
                        {"ci_high", optional_json(e.ci_high)},
                        {"within_ci", has_ci ? json(within) : json(nullptr)}});
    }
    const double fraction =
        resolvable_rows == 0 ? 1.0 : static_cast<double>(within_rows) / static_cast<double>(resolvable_rows);
    const bool mean_within = report.mean_queue.contains(analytic_mean);
    const std::string summary = fmt::format("{}/{} resolvable rows (theory >= {:.3g}) inside the 95% CI ({:.1f}%)",
                                            within_rows, resolvable_rows, resolvable, 100.0 * fraction);
    const std::string label = model_label(file, opts.common.model_path);

    if (opts.common.format == Format::json) {
        json doc = simulation_json(report, opts.sim);
        doc["model"] = label;
        doc["backend"] = std::string(to_string(config.backend));
        doc["k_effective"] = dist.k_effective();
        doc["breakdown"] = breakdown_json(dist);
        doc["analytic_expected_queue"] = analytic_mean;
        doc["expected_queue_within_ci"] = mean_within;
        doc["resolvable_rows"] = resolvable_rows;
        doc["within_ci_rows"] = within_rows;
        doc["within_ci_fraction"] = fraction;
        doc["summary"] = summary;
        doc["rows"] = rows;
        out << doc.dump(2) << "\n";
    } else {
        table.metadata.emplace_back("model", label);
        table.metadata.emplace_back("backend", std::string(to_string(config.backend)));
        add_breakdown_metadata(table, dist);
        add_simulation_metadata(table, report, opts.sim);
        table.metadata.emplace_back("analytic_expected_queue", format_scalar(analytic_mean));
        table.metadata.emplace_back("expected_queue_within_ci", mean_within ? "1" : "0");
        table.metadata.emplace_back("resolvable_rows", std::to_string(resolvable_rows));
        table.metadata.emplace_back("within_ci_rows", std::to_string(within_rows));
        table.metadata.emplace_back("within_ci_fraction", format_scalar(fraction));
        table.metadata.emplace_back("summary", summary);
        out << io::write_csv(table);
    }
    err << summary << "\n";
    warn_breakdown(dist, err);
    return ok;
}

// ---------------------------------------------------------------- oracle

int report_oracle(const io::ModelFile& file, const OracleOptions& opts, std::ostream& out)
{
    const ModelSpec spec = validated_model<double>(file);
    const oracle::JointChain chain = oracle::build_joint_chain(spec, opts.q_cap);
    const oracle::StationarySolution solution = oracle::joint_stationary(chain);
    const std::vector<double> marginal = oracle::queue_marginal(chain, solution);
    const oracle::OracleMean mean = oracle::oracle_expected_queue(chain, solution);
    const std::size_t last = std::min(opts.k_max, opts.q_cap);
    const std::string label = model_label(file, opts.common.model_path);

    std::vector<double> tail(last + 1);
    double cumulative = 0.0;
    for (std::size_t k = 0; k <= last; ++k) {
        cumulative += marginal[k];
        tail[k] = 1.0 - cumulative;
    }

    if (opts.common.format == Format::json) {
        json rows = json::array();
        for (std::size_t k = 0; k <= last; ++k) rows.push_back({{"k", k}, {"p", marginal[k]}, {"tail", tail[k]}});
        json doc = {{"model", label},
                    {"q_cap", opts.q_cap},
                    {"states", chain.states()},
                    {"residual", solution.residual},
                    {"boundary_mass", mean.boundary_mass},
                    {"expected_queue", mean.value},
                    {"truncation_bias", mean.truncation_bias},
                    {"rows", rows}};
        out << doc.dump(2) << "\n";
        return ok;
    }

    io::CsvTable table;
    table.header = {"k", "p", "tail"};
    for (std::size_t k = 0; k <= last; ++k)
        table.rows.push_back({std::to_string(k), format_scalar(marginal[k]), format_scalar(tail[k])});
    table.metadata.emplace_back("model", label);
    table.metadata.emplace_back("q_cap", std::to_string(opts.q_cap));
    table.metadata.emplace_back("states", std::to_string(chain.states()));
    table.metadata.emplace_back("residual", format_scalar(solution.residual));
    table.metadata.emplace_back("boundary_mass", format_scalar(mean.boundary_mass));
    table.metadata.emplace_back("expected_queue", format_scalar(mean.value));
    table.metadata.emplace_back("truncation_bias", mean.truncation_bias ? "1" : "0");
    out << io::write_csv(table);
    return ok;
}

} // namespace

int cmd_validate(const CommonOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const io::ModelFile file = io::load_model_file(opts.model_path);
        const std::string label = model_label(file, opts.model_path);
        if (opts.backend == Backend::exact) return report_validation<Rational>(file, label, out);
        return report_validation<double>(file, label, out);
    });
}

int cmd_analyze(const CommonOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const io::ModelFile file = io::load_model_file(opts.model_path);
        return with_backend(opts.backend, [&]<typename T>() { return report_analysis<T>(file, opts, out); });
    });
}

int cmd_dist(const DistOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const io::ModelFile file = io::load_model_file(opts.common.model_path);
        warn_exact(opts.common, err);
        return with_backend(opts.common.backend,
                            [&]<typename T>() { return report_distribution<T>(file, opts, out, err); });
    });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const io::ModelFile file = io::load_model_file(opts.common.model_path);
        return report_simulation(file, opts, out);
    });
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const io::ModelFile file = io::load_model_file(opts.common.model_path);
        warn_exact(opts.common, err);
        return with_backend(opts.common.backend,
                            [&]<typename T>() { return report_comparison<T>(file, opts, out, err); });
    });
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const io::ModelFile file = io::load_model_file(opts.common.model_path);
        return report_oracle(file, opts, out);
    });
}

namespace {

void add_common(CLI::App* app, CommonOptions& opts, std::string& backend, std::string& format)
{
    app->add_option("model", opts.model_path, "Model file (JSON with decimal-string arrays f and g)")->required();
    app->add_option("--backend", backend, "Arithmetic: float64 or exact")->capture_default_str();
    app->add_option("--format", format, "Output format: csv or json")->capture_default_str();
}

void add_simulation(CLI::App* app, SimulationConfig& sim)
{
    app->add_option("--iterations", sim.iterations, "Slots per run (burn-in included)")->capture_default_str();
    app->add_option("--runs", sim.runs, "Independent replications")->capture_default_str();
    app->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
    app->add_option("--burn-in", sim.burn_in, "Slots discarded at the start of each run")->capture_default_str();
    app->add_option("--kmax", sim.k_max, "Largest queue length tallied individually")->capture_default_str();
    app->add_option("--threads", sim.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact analysis and simulation of the discrete-time on/off batch-arrival queue"};
    app.require_subcommand(1);

    std::string backend = "float64";
    std::string format = "csv";
    std::string output;

    CommonOptions validate_opts;
    CommonOptions analyze_opts;
    DistOptions dist_opts;
    SimulateOptions sim_opts;
    CompareOptions compare_opts;
    OracleOptions oracle_opts;
    std::string analyze_format = "text";

    auto* validate_cmd = app.add_subcommand("validate", "Check a model file and report every violation");
    validate_cmd->add_option("model", validate_opts.model_path, "Model file")->required();
    validate_cmd->add_option("--backend", backend, "Arithmetic: float64 or exact")->capture_default_str();
    validate_cmd->add_option("--output,-o", output, "Output file");

    auto* analyze_cmd = app.add_subcommand("analyze", "Moments, utilization, E[Q] and E[T]");
    analyze_cmd->add_option("model", analyze_opts.model_path, "Model file")->required();
    analyze_cmd->add_option("--backend", backend, "Arithmetic: float64 or exact")->capture_default_str();
    analyze_cmd->add_option("--format", analyze_format, "Output format: text or json")->capture_default_str();
    analyze_cmd->add_option("--output,-o", output, "Output file");

    auto* dist_cmd = app.add_subcommand("dist", "Queue-length distribution P(Q=k) by power-series division");
    add_common(dist_cmd, dist_opts.common, backend, format);
    dist_cmd->add_option("--kmax", dist_opts.k_max, "Largest k to compute")->capture_default_str();
    dist_cmd->add_option("--negative-tolerance", dist_opts.negative_tolerance,
                         "Float64: coefficients below -tol stop the recursion")
        ->capture_default_str();
    dist_cmd->add_flag("!--no-rounding-floor", dist_opts.rounding_floor,
                       "Float64: do not stop at the accumulated rounding-error envelope");
    dist_cmd->add_option("--output,-o", output, "Output file");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of E[Q] and P(Q=k)");
    add_common(sim_cmd, sim_opts.common, backend, format);
    add_simulation(sim_cmd, sim_opts.sim);
    sim_cmd->add_option("--output,-o", output, "Output file");

    auto* compare_cmd = app.add_subcommand("compare", "Theory against simulation, one row per k");
    add_common(compare_cmd, compare_opts.common, backend, format);
    add_simulation(compare_cmd, compare_opts.sim);
    compare_cmd->add_flag("!--no-rounding-floor", compare_opts.rounding_floor,
                          "Float64: do not stop at the accumulated rounding-error envelope");
    compare_cmd->add_option("--output,-o", output, "Output file");

    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force joint-chain solve (verification)");
    add_common(oracle_cmd, oracle_opts.common, backend, format);
    oracle_cmd->add_option("--qcap", oracle_opts.q_cap, "Queue length cap of the truncated chain")
        ->capture_default_str();
    oracle_cmd->add_option("--kmax", oracle_opts.k_max, "Largest k to print")->capture_default_str();
    oracle_cmd->add_option("--output,-o", output, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg_out;
        std::ostringstream msg_err;
        const int code = app.exit(e, msg_out, msg_err);
        out << msg_out.str();
        err << msg_err.str();
        return code == 0 ? ok : usage_error;
    }

    std::ofstream file_out;
    std::ostream* sink = &out;
    if (!output.empty()) {
        file_out.open(output, std::ios::binary);
        if (!file_out) {
            err << "error: cannot write '" << output << "'\n";
            return usage_error;
        }
        sink = &file_out;
    }

    return guarded(err, [&] {
        const Backend chosen = parse_backend(backend);
        const Format chosen_format = parse_format(format);
        if (*validate_cmd) {
            validate_opts.backend = chosen;
            return cmd_validate(validate_opts, *sink, err);
        }
        if (*analyze_cmd) {
            analyze_opts.backend = chosen;
            if (analyze_format == "json") {
                analyze_opts.format = Format::json;
            } else if (analyze_format != "text") {
                throw Error(ErrorCode::invalid_argument, "analyze --format must be text or json");
            }
            return cmd_analyze(analyze_opts, *sink, err);
        }
        if (*dist_cmd) {
            dist_opts.common.backend = chosen;
            dist_opts.common.format = chosen_format;
            return cmd_dist(dist_opts, *sink, err);
        }
        if (*sim_cmd) {
            sim_opts.common.format = chosen_format;
            return cmd_simulate(sim_opts, *sink, err);
        }
        if (*compare_cmd) {
            compare_opts.common.backend = chosen;
            compare_opts.common.format = chosen_format;
            return cmd_compare(compare_opts, *sink, err);
        }
        oracle_opts.common.format = chosen_format;
        return cmd_oracle(oracle_opts, *sink, err);
    });
}

} // namespace mmq::cli
