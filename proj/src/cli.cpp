#include "ftq/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ftq/bounds.hpp"
#include "ftq/renyi.hpp"

namespace ftq::cli {

using nlohmann::json;

namespace {

// Raised for an output path that cannot be written (exit 3).
struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string bound_kind;

    std::optional<std::string> family;
    std::optional<double> param;
    std::optional<std::string> channel_file;

    int g = 1;
    std::optional<int> d;
    std::optional<int> gates;
    std::optional<double> eps;
    double lipschitz = 1.0;
    std::optional<double> ic;
    std::optional<double> alpha;
    std::vector<double> eps_i;
    std::string constraint = "assisted";

    std::string grid;
    double tol_zero = kDefaultTolZero;
    double tol_param = kDefaultTolParam;
    int k_max = 2;

    OptimizerOptions opts;
    std::string format = "json";
    std::optional<std::string> output;
};

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json matrix_json(const CMatrix& m) {
    json real = json::array();
    json imag = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array();
        json ri = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        real.push_back(std::move(rr));
        imag.push_back(std::move(ri));
    }
    return json{{"real", std::move(real)}, {"imag", std::move(imag)}};
}

json bound_json(const BoundValue& b) {
    return json{{"value", finite_or_null(b.value)}, {"vacuous", b.vacuous}, {"formula", b.formula}};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Echo of every flag given on the command line, numbers parsed back.
json echo_inputs(const CLI::App& sub) {
    json inputs = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
        json values = json::array();
        for (const std::string& raw : opt->results()) {
            char* end = nullptr;
            const long long n = std::strtoll(raw.c_str(), &end, 10);
            if (!raw.empty() && end == raw.c_str() + raw.size()) {
                values.push_back(n);
                continue;
            }
            const double x = std::strtod(raw.c_str(), &end);
            if (!raw.empty() && end == raw.c_str() + raw.size() && std::isfinite(x)) {
                values.push_back(x);
            } else {
                values.push_back(raw);
            }
        }
        inputs[key] = values.size() == 1 ? values.front() : values;
    }
    return inputs;
}

class Provenance {
public:
    explicit Provenance(const OptimizerOptions& opts)
        : doc_{{"seed", opts.seed},
               {"restarts", opts.restarts},
               {"max_iters", opts.max_iters},
               {"initial_step", opts.initial_step},
               {"step_decay", opts.step_decay},
               {"grad_tol", opts.grad_tol},
               {"finite_differences", opts.finite_differences},
               {"converged", json::array()},
               {"formulas", json::array()},
               {"heuristic", false}} {}

    void add_report(const OptimizationReport& report) {
        for (bool c : report.converged) doc_["converged"].push_back(c);
        if (report.heuristic) doc_["heuristic"] = true;
    }
    void add_formula(const std::string& f) { doc_["formulas"].push_back(f); }
    void set_heuristic() { doc_["heuristic"] = true; }
    void set(const std::string& key, json value) { doc_[key] = std::move(value); }
    const json& doc() const { return doc_; }

private:
    json doc_;
};

json report_json(const OptimizationReport& report) {
    json restarts = json::array();
    for (std::size_t k = 0; k < report.restart_values.size(); ++k) {
        restarts.push_back({{"kind", report.restart_kinds[k]},
                            {"value", report.restart_values[k]},
                            {"iterations", report.iterations[k]},
                            {"converged", static_cast<bool>(report.converged[k])}});
    }
    return json{{"value", report.value},
                {"argmax", matrix_json(report.argmax.matrix())},
                {"heuristic", report.heuristic},
                {"restarts", std::move(restarts)}};
}

// Prefixes validation failures with the flag they came from.
template <typename F>
auto with_flag(const std::string& flag, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ValidationError(flag + ": " + e.what());
    }
}

QuantumChannel base_channel(const RunConfig& cfg) {
    const bool has_family = cfg.family.has_value();
    const bool has_file = cfg.channel_file.has_value();
    if (has_family && has_file) {
        throw ValidationError("--family and --channel-file are mutually exclusive channel sources");
    }
    if (has_file) return with_flag("--channel-file", [&] { return load_channel(*cfg.channel_file); });
    if (!has_family) throw ValidationError("a channel source is required: --family with --param, or --channel-file");
    if (!cfg.param) throw ValidationError("--param is required with --family");
    const NoiseFamily family = with_flag("--family", [&] { return NoiseFamily::from_name(*cfg.family); });
    return with_flag("--param", [&] { return family.instantiate(*cfg.param); });
}

bool has_channel_source(const RunConfig& cfg) { return cfg.family.has_value() || cfg.channel_file.has_value(); }

QuantumChannel gate_channel(const RunConfig& cfg) {
    const QuantumChannel base = base_channel(cfg);
    return with_flag("--g", [&] { return tensor_power(base, cfg.g); });
}

NoiseFamily sweep_family_from(const RunConfig& cfg) {
    if (!cfg.family) throw ValidationError("--family is required");
    if (cfg.param) throw ValidationError("--param does not apply; the family parameter is scanned");
    const std::string path = cfg.channel_file.value_or("");
    if (!path.empty() && *cfg.family != "custom_file" && *cfg.family != "custom-file") {
        throw ValidationError("--channel-file only applies with --family custom_file");
    }
    return with_flag("--family", [&] { return NoiseFamily::from_name(*cfg.family, path); });
}

template <typename T>
const T& required(const std::optional<T>& v, const char* flag) {
    if (!v) throw ValidationError(std::string(flag) + " is required for this command");
    return *v;
}

double resolve_ic(const RunConfig& cfg, Provenance& prov, json& result) {
    if (cfg.ic) return *cfg.ic;
    if (!has_channel_source(cfg)) {
        throw ValidationError("--ic is required unless a channel source (--family/--param or --channel-file) is given");
    }
    const OptimizationReport report = maximize_coherent_information(gate_channel(cfg), cfg.opts);
    prov.add_report(report);
    result["ic_computed"] = report.value;
    return report.value;
}

double resolve_renyi_ic(const RunConfig& cfg, double alpha, Provenance& prov, json& result) {
    if (cfg.ic) return *cfg.ic;
    if (!has_channel_source(cfg)) {
        throw ValidationError("--ic is required unless a channel source (--family/--param or --channel-file) is given");
    }
    const OptimizationReport report = maximize_renyi_coherent_information(gate_channel(cfg), alpha, cfg.opts);
    prov.add_report(report);
    result["ic_alpha_computed"] = report.value;
    return report.value;
}

FidelityConstraint parse_constraint(const std::string& s) {
    return s == "unassisted" ? FidelityConstraint::kUnassisted : FidelityConstraint::kClassicalAssisted;
}

json run_bound(const RunConfig& cfg, Provenance& prov) {
    json result = json::object();
    result["kind"] = cfg.bound_kind;
    const std::string& kind = cfg.bound_kind;
    auto put = [&](const BoundValue& b) {
        result.update(bound_json(b));
        prov.add_formula(b.formula);
    };
    if (kind == "prop1") {
        const int d = required(cfg.d, "--d");
        put(prop1_bound(d, cfg.g, resolve_ic(cfg, prov, result)));
    } else if (kind == "thm1") {
        BoundParams params;
        params.d = required(cfg.d, "--d");
        params.g = cfg.g;
        params.eps = required(cfg.eps, "--eps");
        params.lipschitz = cfg.lipschitz;
        params.gates = required(cfg.gates, "--G");
        put(thm1_bound(params, resolve_ic(cfg, prov, result)));
    } else if (kind == "lemma1") {
        if (cfg.eps_i.empty()) throw ValidationError("--eps-i is required for bound lemma1");
        const double ic = resolve_ic(cfg, prov, result);
        const double value =
            lemma1_rhs({cfg.eps_i}, required(cfg.eps, "--eps"), cfg.lipschitz, ic, parse_constraint(cfg.constraint));
        result["value"] = value;
        result["vacuous"] = false;
        result["constraint"] = cfg.constraint;
        const std::string formula = "sum_i (Ic + h2(eps_i)) / (1 - 2 eps_i)";
        result["formula"] = formula;
        prov.add_formula(formula);
    } else if (kind == "oneshot") {
        if (cfg.eps_i.size() != 1) throw ValidationError("--eps-i takes exactly one value for bound oneshot");
        const double value = oneshot_converse(cfg.eps_i.front(), resolve_ic(cfg, prov, result));
        const std::string formula = "(Ic + h2(eps_i)) / (1 - 2 eps_i)";
        result["value"] = value;
        result["vacuous"] = false;
        result["formula"] = formula;
        prov.add_formula(formula);
    } else if (kind == "p1" || kind == "p3") {
        const int gates = required(cfg.gates, "--G");
        const double eps = required(cfg.eps, "--eps");
        const double budget = 2.0 * log_slack(eps, cfg.lipschitz);
        double value = 0.0;
        AllocationOptimum numeric;
        std::string formula;
        if (kind == "p1") {
            const double ic = resolve_ic(cfg, prov, result);
            value = p1_optimum(gates, eps, cfg.lipschitz, ic);
            numeric = maximize_separable_allocation(p1_term(ic), gates, budget);
            formula = "Ic ((G-1) + 1/(1-4ln(1/(1-eps L))))";
        } else {
            value = p3_optimum(gates, eps, cfg.lipschitz);
            numeric = maximize_separable_allocation(p3_term(eps, cfg.lipschitz), gates, budget);
            formula = "G/(1-4ln(1/(1-eps L))) h2(2ln(1/(1-eps L))/G)";
        }
        result["value"] = value;
        result["vacuous"] = false;
        result["formula"] = formula;
        result["numeric_optimum"] = numeric.value;
        result["numeric_argmax"] = numeric.eps_i;
        prov.add_formula(formula);
    } else if (kind == "prop2") {
        put(prop2_bound(required(cfg.d, "--d"), cfg.g));
        if (has_channel_source(cfg)) {
            const OptimizationReport report = maximize_coherent_information(gate_channel(cfg), cfg.opts);
            prov.add_report(report);
            result["ic_computed"] = report.value;
            result["ic_below_tol_zero"] = report.value <= cfg.tol_zero;
        }
    } else if (kind == "corollary1") {
        put(corollary1_overhead(cfg.g, resolve_ic(cfg, prov, result)));
    } else if (kind == "appendixD") {
        const double alpha = required(cfg.alpha, "--alpha");
        const double ic_alpha = resolve_renyi_ic(cfg, alpha, prov, result);
        put(appendixD_bound(required(cfg.gates, "--G"), required(cfg.eps, "--eps"), cfg.lipschitz, alpha, ic_alpha));
    } else if (kind == "appendixD-dmax") {
        put(appendixD_dmax(required(cfg.alpha, "--alpha")));
    } else {
        throw ValidationError("unknown bound kind '" + kind + "'");
    }
    return result;
}

json threshold_json(const ThresholdResult& t) {
    json path = json::array();
    for (const ThresholdPoint& p : t.path) path.push_back({{"param", p.param}, {"ic", p.ic}});
    return json{{"threshold", t.threshold},
                {"bracket", {t.bracket.first, t.bracket.second}},
                {"ic_lo", t.ic_lo},
                {"ic_hi", t.ic_hi},
                {"heuristic", t.heuristic},
                {"path", std::move(path)}};
}

json sweep_json(const SweepResult& s) {
    json points = json::array();
    for (const SweepPoint& p : s.points) {
        json row{{"param", p.param}, {"ic", p.ic}, {"converged", p.converged}};
        row["prop1"] = p.prop1 ? finite_or_null(p.prop1->value) : json(nullptr);
        row["vacuous"] = p.prop1 ? json(p.prop1->vacuous) : json(nullptr);
        points.push_back(std::move(row));
    }
    json out{{"family", s.family.name()}, {"g", s.g}, {"d", s.d}, {"points", std::move(points)}};
    out["threshold"] = s.threshold ? json(*s.threshold) : json(nullptr);
    out["bracket"] = s.bracket ? json{s.bracket->first, s.bracket->second} : json(nullptr);
    return out;
}

void write_output(const std::string& text, const RunConfig& cfg, std::ostream& out) {
    if (!cfg.output) {
        out << text;
        return;
    }
    std::ofstream file(*cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) throw OutputError("--output: cannot open '" + *cfg.output + "' for writing");
    file << text;
    file.flush();
    if (!file) throw OutputError("--output: failed writing '" + *cfg.output + "'");
}

void add_channel_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--family", cfg.family, "Noise family: depolarizing, dephasing, amplitude_damping, custom_file");
    sub->add_option("--param", cfg.param, "Noise parameter of the family");
    sub->add_option("--channel-file", cfg.channel_file, "JSON file with Kraus operators");
}

void add_optimizer_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--seed", cfg.opts.seed, "Seed for every random choice")->capture_default_str();
    sub->add_option("--restarts", cfg.opts.restarts, "Optimizer restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-iters", cfg.opts.max_iters, "Iterations per restart")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--step", cfg.opts.initial_step, "Initial ascent step")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--step-decay", cfg.opts.step_decay, "Backtracking factor in (0, 1)")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6))
        ->capture_default_str();
    sub->add_option("--grad-tol", cfg.opts.grad_tol, "Gradient-norm stopping tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--threads", cfg.opts.threads, "Worker threads (0: FTQ_THREADS or hardware)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--inner-restarts", cfg.opts.inner_restarts, "Random starts of the Renyi inner minimization")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_flag("--finite-differences", cfg.opts.finite_differences, "Finite-difference gradients");
}

void add_output_options(CLI::App* sub, RunConfig& cfg, bool csv) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(csv ? CLI::IsMember({"json", "csv"}) : CLI::IsMember({"json"}))
        ->capture_default_str();
    sub->add_option("--output", cfg.output, "Output file (default: standard output)");
}

CLI::Option* add_gate_size(CLI::App* sub, RunConfig& cfg) {
    return sub->add_option("--g", cfg.g, "Gate size g (noise acts as N^g)")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
    std::string text = "param,ic_bits,prop1_bound,vacuous\n";
    for (const SweepPoint& p : result.points) {
        text += format_number(p.param) + "," + format_number(p.ic) + ",";
        if (p.prop1) text += format_number(p.prop1->value) + "," + (p.prop1->vacuous ? "true" : "false");
        else text += ",";
        text += "\n";
    }
    return text;
}

void emit_sweep_csv(const SweepResult& result, const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << sweep_csv(result);
    file.flush();
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Coherent information and fault-tolerance overhead bounds for quantum noise channels", kToolName};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CLI::App* coherent = app.add_subcommand("coherent-info", "Maximize the coherent information of N^g");
    add_channel_options(coherent, cfg);
    add_gate_size(coherent, cfg);
    add_optimizer_options(coherent, cfg);
    add_output_options(coherent, cfg, false);

    CLI::App* renyi = app.add_subcommand("renyi-info", "Maximize the Renyi coherent information of N^g (heuristic)");
    add_channel_options(renyi, cfg);
    add_gate_size(renyi, cfg);
    renyi->add_option("--alpha", cfg.alpha, "Renyi order, > 1")->required();
    add_optimizer_options(renyi, cfg);
    add_output_options(renyi, cfg, false);

    CLI::App* bound = app.add_subcommand("bound", "Evaluate one overhead bound");
    bound->add_option("kind", cfg.bound_kind, "Bound to evaluate")
        ->required()
        ->check(CLI::IsMember({"prop1", "thm1", "lemma1", "oneshot", "p1", "p3", "prop2", "corollary1", "appendixD",
                               "appendixD-dmax"}));
    add_channel_options(bound, cfg);
    add_gate_size(bound, cfg);
    bound->add_option("--d", cfg.d, "Logical qubits")->check(CLI::PositiveNumber);
    bound->add_option("--G", cfg.gates, "Number of gates")->check(CLI::PositiveNumber);
    bound->add_option("--eps", cfg.eps, "Accuracy in (0, 0.11)")->check(CLI::Range(0.0, 0.11));
    bound->add_option("--L", cfg.lipschitz, "Lipschitz constant")->check(CLI::PositiveNumber)->capture_default_str();
    bound->add_option("--ic", cfg.ic, "Coherent information of N^g in bits (computed from the channel if absent)")
        ->check(CLI::NonNegativeNumber);
    bound->add_option("--alpha", cfg.alpha, "Renyi order, > 1");
    bound->add_option("--eps-i", cfg.eps_i, "Per-gate errors, comma separated")->delimiter(',');
    bound->add_option("--constraint", cfg.constraint, "Fidelity product constraint for lemma1")
        ->check(CLI::IsMember({"assisted", "unassisted"}))
        ->capture_default_str();
    bound->add_option("--tol-zero", cfg.tol_zero, "Zero tolerance for Ic in bits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_optimizer_options(bound, cfg);
    add_output_options(bound, cfg, false);

    CLI::App* threshold = app.add_subcommand("threshold", "Noise strength where Ic(N(p)^g) reaches zero");
    add_channel_options(threshold, cfg);
    add_gate_size(threshold, cfg);
    threshold->add_option("--alpha", cfg.alpha, "Use the Renyi coherent information of this order (heuristic)");
    threshold->add_option("--tol-zero", cfg.tol_zero, "Ic values at or below this count as zero")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    threshold->add_option("--tol-param", cfg.tol_param, "Final bracket width")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_optimizer_options(threshold, cfg);
    add_output_options(threshold, cfg, false);

    CLI::App* sweep = app.add_subcommand("sweep", "Ic and prop1 bound over a parameter grid");
    add_channel_options(sweep, cfg);
    add_gate_size(sweep, cfg);
    sweep->add_option("--grid", cfg.grid, "lo:hi:steps")->required();
    sweep->add_option("--d", cfg.d, "Logical qubits for the prop1 column (default 100)")->check(CLI::PositiveNumber);
    sweep->add_option("--tol-zero", cfg.tol_zero, "Zero tolerance for Ic in bits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_optimizer_options(sweep, cfg);
    add_output_options(sweep, cfg, true);

    CLI::App* compare = app.add_subcommand("compare-capacity", "k / Ic(N^k) for k = 1..k-max");
    add_channel_options(compare, cfg);
    compare->add_option("--k-max", cfg.k_max, "Largest tensor power")->check(CLI::Range(1, 6))->capture_default_str();
    add_optimizer_options(compare, cfg);
    add_output_options(compare, cfg, false);

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back(kToolName);
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();

    try {
        cfg.opts.validate();
        Provenance prov(cfg.opts);
        json result;

        if (cfg.command == "coherent-info") {
            const QuantumChannel channel = gate_channel(cfg);
            const OptimizationReport report = maximize_coherent_information(channel, cfg.opts);
            prov.add_report(report);
            prov.add_formula("max_rho S(N(rho)) - S(N^c(rho))");
            result = report_json(report);
            result["in_dim"] = channel.in_dim();
            result["out_dim"] = channel.out_dim();
            result["env_dim"] = channel.env_dim();
        } else if (cfg.command == "renyi-info") {
            const double alpha = *cfg.alpha;
            const QuantumChannel channel = gate_channel(cfg);
            const OptimizationReport report =
                with_flag("--alpha", [&] { return maximize_renyi_coherent_information(channel, alpha, cfg.opts); });
            prov.add_report(report);
            prov.add_formula("max_rho min_sigma D_alpha(omega_RB || I_R x sigma_B)");
            result = report_json(report);
        } else if (cfg.command == "bound") {
            result = run_bound(cfg, prov);
        } else if (cfg.command == "threshold") {
            const NoiseFamily family = sweep_family_from(cfg);
            const ThresholdResult t =
                cfg.alpha ? find_renyi_threshold(family, cfg.g, *cfg.alpha, cfg.tol_zero, cfg.tol_param, cfg.opts)
                          : find_threshold(family, cfg.g, cfg.tol_zero, cfg.tol_param, cfg.opts);
            if (t.heuristic) prov.set_heuristic();
            prov.add_formula(cfg.alpha ? "boundary of {p : Ic(N(p)^g; alpha) > tol_zero}"
                                       : "boundary of {p : Ic(N(p)^g) > tol_zero}");
            result = threshold_json(t);
            result["family"] = family.name();
            result["range"] = {family.lo, family.hi};
        } else if (cfg.command == "sweep") {
            const NoiseFamily family = sweep_family_from(cfg);
            const std::vector<double> grid = with_flag("--grid", [&] { return parse_grid(cfg.grid); });
            const SweepResult s =
                with_flag("--grid", [&] { return sweep_family(family, cfg.g, grid, cfg.d.value_or(100), cfg.opts, cfg.tol_zero); });
            prov.add_formula("max_rho S(N(rho)) - S(N^c(rho))");
            if (cfg.d.value_or(100) >= 2 * cfg.g) prov.add_formula(prop1_bound(2 * cfg.g, cfg.g, 0.0).formula);
            if (cfg.format == "csv") {
                write_output(sweep_csv(s), cfg, out);
                return 0;
            }
            result = sweep_json(s);
        } else if (cfg.command == "compare-capacity") {
            const QuantumChannel channel = base_channel(cfg);
            const CapacityComparison c = capacity_comparison(channel, cfg.k_max, cfg.opts);
            json rows = json::array();
            for (const CapacityRow& row : c.rows) {
                prov.add_report(row.report);
                rows.push_back({{"k", row.k}, {"ic", row.ic}, {"ratio", finite_or_null(row.ratio)}});
            }
            prov.add_formula("k / Ic(N^k)");
            result = json{{"rows", std::move(rows)},
                          {"min_ratio", finite_or_null(c.min_ratio)},
                          {"argmin_k", c.argmin_k},
                          {"upper_estimate", c.upper_estimate}};
        }

        json doc = json::object();
        doc["tool"] = kToolName;
        doc["version"] = kToolVersion;
        doc["command"] = cfg.command;
        doc["inputs"] = echo_inputs(*sub);
        doc["result"] = std::move(result);
        doc["provenance"] = prov.doc();
        doc["timestamp"] = utc_timestamp();
        write_output(doc.dump(2) + "\n", cfg, out);
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const OutputError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace ftq::cli
