#include "siltlab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "siltlab/dyadic.hpp"
#include "siltlab/local_time.hpp"
#include "siltlab/oracle.hpp"
#include "siltlab/parallel.hpp"
#include "siltlab/rare_event.hpp"
#include "siltlab/rwrs.hpp"

namespace siltlab {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_value(const Value& v) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(std::uint64_t u) const { return std::to_string(u); }
        std::string operator()(double d) const { return format_number(d); }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, v);
}

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

std::size_t ResultTable::index(const std::string& column) const {
    auto it = std::find(columns_.begin(), columns_.end(), column);
    if (it == columns_.end()) {
        throw std::logic_error("unknown result column " + column);
    }
    return static_cast<std::size_t>(it - columns_.begin());
}

void ResultTable::add_row(const std::map<std::string, Value>& base) {
    rows_.emplace_back(columns_.size());
    for (const auto& [k, v] : base) {
        set(k, v);
    }
}

void ResultTable::set(const std::string& column, Value v) { rows_.back()[index(column)] = std::move(v); }

const Value& ResultTable::get(std::size_t row, const std::string& column) const {
    return rows_.at(row)[index(column)];
}

namespace {

void write_csv_cell(std::ostream& os, const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        os << s;
        return;
    }
    os << '"';
    for (char c : s) {
        if (c == '"') {
            os << '"';
        }
        os << c;
    }
    os << '"';
}

}  // namespace

void ResultTable::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) {
            os << ',';
        }
        write_csv_cell(os, columns_[i]);
    }
    os << "\r\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                os << ',';
            }
            write_csv_cell(os, format_value(row[i]));
        }
        os << "\r\n";
    }
}

void ResultTable::write_jsonl(std::ostream& os) const {
    for (const auto& row : rows_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& v = row[i];
            auto& slot = obj[columns_[i]];
            if (std::holds_alternative<bool>(v)) {
                slot = std::get<bool>(v);
            } else if (std::holds_alternative<std::int64_t>(v)) {
                slot = std::get<std::int64_t>(v);
            } else if (std::holds_alternative<std::uint64_t>(v)) {
                slot = std::get<std::uint64_t>(v);
            } else if (std::holds_alternative<double>(v)) {
                const double d = std::get<double>(v);
                if (std::isfinite(d)) {
                    slot = d;
                } else {
                    slot = format_number(d);
                }
            } else if (std::holds_alternative<std::string>(v)) {
                slot = std::get<std::string>(v);
            }
        }
        os << obj.dump() << '\n';
    }
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"walk",  "decompose", "oracle", "tail",  "confine",
                                                   "rwrs",  "zeta",      "report", "sweep"};
    return names;
}

namespace {

const std::vector<ParamSpec> kShared = {
    {"seed", "1", "base seed of the counter-based streams"},
    {"workers", "1", "worker threads (0 = all cores); estimates do not depend on it"},
    {"chunk", "4096", "samples per RNG stream"},
    {"memory_mb", "2048", "memory budget for tables and paths"},
};

std::vector<ParamSpec> with_shared(std::vector<ParamSpec> own) {
    own.insert(own.end(), kShared.begin(), kShared.end());
    return own;
}

const std::map<std::string, std::vector<ParamSpec>>& param_table() {
    static const std::map<std::string, std::vector<ParamSpec>> table = {
        {"walk", with_shared({{"d", "3", "dimension"},
                              {"n", "1024", "number of steps"},
                              {"samples", "10", "number of walks"}})},
        {"decompose", with_shared({{"d", "3", "dimension"},
                                   {"N", "12", "tree depth; walks have 2^N steps"},
                                   {"samples", "10", "number of walks"},
                                   {"threshold", "8", "local-time threshold of the Le Gall bound"},
                                   {"z", "2,4,8", "levels for the inclusion checks"},
                                   {"delta", "0.1,0.5", "splitting fractions for the inclusion checks"}})},
        {"oracle", with_shared({{"quantity", "silt",
                                 "return|silt|range|intersection|survival|eigen|gaussian|enumerate|exact_silt|table"},
                                {"d", "3", "dimension"},
                                {"n", "64", "horizon"},
                                {"radius", "2", "ball radius (survival, eigen, killed tables)"},
                                {"norm", "euclidean", "ball or comparison norm: euclidean|sup"},
                                {"table", "free", "table kind to export: free|killed"},
                                {"out", "", "path of the exported table"}})},
        {"tail", with_shared({{"event", "silt", "silt|range"},
                              {"d", "3", "dimension"},
                              {"n", "1024", "number of steps"},
                              {"y", "6", "deviation parameter"},
                              {"samples", "10000", "number of walks"}})},
        {"confine", with_shared({{"d", "3", "dimension"},
                                 {"n", "4096", "number of steps"},
                                 {"y", "8", "ball size target |B| = n / y (used when radius = 0)"},
                                 {"radius", "0", "explicit euclidean radius"},
                                 {"samples", "1000", "confined samples"},
                                 {"delta0", "0.05", "local-time level fraction"},
                                 {"eps0", "0.05", "visited-site fraction"}})},
        {"rwrs", with_shared({{"mode", "tail", "tail|probe"},
                              {"d", "3", "dimension"},
                              {"n", "1024", "number of steps"},
                              {"alpha", "1", "scenery tail exponent"},
                              {"c", "1", "scenery tail constant"},
                              {"beta", "0.6", "deviation exponent"},
                              {"y", "1", "deviation prefactor"},
                              {"samples", "10000", "samples"},
                              {"delta0", "0.05", "probe: local-time level fraction"},
                              {"eps0", "0.05", "probe: visited-site fraction"}})},
        {"zeta", with_shared({{"alpha", "1", "scenery tail exponent"}, {"beta", "0.6", "deviation exponent"}})},
        {"report", with_shared({{"d", "3", "dimension"},
                                {"n", "1024", "number of steps"},
                                {"z", "2..16:2", "levels"},
                                {"samples", "10000", "pairs of walks"}})},
        {"sweep", with_shared({{"target", "confine", "confine|intersection|synthetic|tail"},
                               {"d", "3", "dimension"},
                               {"ns", "512,1024,2048,4096,8192,16384,32768", "horizons"},
                               {"y", "8", "ball size n / y (confine) or deviation (tail)"},
                               {"samples", "10000", "walks per point (tail)"}})},
    };
    return table;
}

const std::map<std::string, std::vector<std::string>>& output_columns() {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"walk", {"sample", "silt", "range", "max_local_time", "jensen_ok"}},
        {"decompose",
         {"sample", "steps", "identity_residual", "z0", "j_total", "legall_pass", "band0_silt", "band0_pass",
          "inclusion_checks", "cardinality_violations", "mass_violations", "inclusion_pass", "jensen_ok"}},
        {"oracle", {"k", "value", "aux", "detail"}},
        {"tail", {"p_hat", "stderr", "hits", "implication_violations"}},
        {"confine",
         {"ball_radius", "ball_size", "survival", "log_survival", "level", "required_sites", "frequency", "stderr",
          "hits", "audit_violations"}},
        {"rwrs",
         {"threshold", "p_upper", "stderr_upper", "p_lower", "stderr_lower", "u", "v", "zeta", "ball_radius",
          "ball_size", "frequency", "stderr", "log_confinement", "scenery_terms", "scenery_threshold",
          "scenery_p_hat", "scenery_log_gaussian"}},
        {"zeta", {"region", "zeta"}},
        {"report",
         {"row", "level", "mean_size", "se_size", "mean_mass", "se_mass", "mean_mass2", "se_mass2", "kappa",
          "intercept", "r_squared"}},
        {"sweep", {"row", "point_n", "value", "normalized", "exponent", "prefactor", "r_squared", "max_min_ratio"}},
    };
    return table;
}

template <class T>
bool parse_full(const std::string& s, T& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

Value echo_value(const std::string& s) {
    std::int64_t i = 0;
    if (parse_full(s, i)) {
        return i;
    }
    double d = 0;
    if (parse_full(s, d)) {
        return d;
    }
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<ParamSpec>& command_params(const std::string& command) {
    auto it = param_table().find(command);
    if (it == param_table().end()) {
        throw DomainError("unknown command '" + command + "'");
    }
    return it->second;
}

std::string ExperimentConfig::text(const std::string& key) const {
    if (auto it = params.find(key); it != params.end()) {
        return it->second;
    }
    for (const auto& p : command_params(command)) {
        if (p.name == key) {
            return p.fallback;
        }
    }
    throw std::logic_error("command " + command + " has no parameter " + key);
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
    std::int64_t v = 0;
    if (!parse_full(text(key), v)) {
        throw DomainError("--" + key + " expects an integer, got '" + text(key) + "'");
    }
    return v;
}

std::uint64_t ExperimentConfig::count(const std::string& key) const {
    const auto v = integer(key);
    if (v < 0) {
        throw DomainError("--" + key + " must be non-negative");
    }
    return static_cast<std::uint64_t>(v);
}

double ExperimentConfig::real(const std::string& key) const {
    double v = 0;
    if (!parse_full(text(key), v)) {
        throw DomainError("--" + key + " expects a number, got '" + text(key) + "'");
    }
    return v;
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
    const std::string s = text(key);
    auto bad = [&] { return DomainError("--" + key + " expects a list like 1,2,4 or 2..16:2, got '" + s + "'"); };
    std::vector<double> out;
    if (auto dots = s.find(".."); dots != std::string::npos) {
        double lo = 0, hi = 0, step = 1;
        const auto colon = s.find(':', dots);
        if (!parse_full(s.substr(0, dots), lo) ||
            !parse_full(s.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2), hi) ||
            (colon != std::string::npos && !parse_full(s.substr(colon + 1), step)) || !(step > 0) || hi < lo) {
            throw bad();
        }
        for (double v = lo; v <= hi + 1e-9 * step; v += step) {
            out.push_back(v);
        }
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0;
        if (!parse_full(trim(item), v)) {
            throw bad();
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw bad();
    }
    return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) {
            key = key.substr(2);
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw DomainError("cannot read config file " + path.string());
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

void validate_config(const ExperimentConfig& cfg) {
    const auto& specs = command_params(cfg.command);
    for (const auto& [key, value] : cfg.params) {
        const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& p) { return p.name == key; });
        if (!known) {
            throw DomainError("unknown parameter '" + key + "' for command " + cfg.command);
        }
    }
}

namespace {

McConfig mc_config(const ExperimentConfig& cfg) {
    McConfig mc;
    mc.seed = cfg.count("seed");
    mc.workers = static_cast<unsigned>(cfg.count("workers"));
    mc.chunk = cfg.count("chunk");
    const auto mb = cfg.count("memory_mb");
    if (mb == 0) {
        throw DomainError("--memory_mb must be positive");
    }
    mc.budget.max_bytes = static_cast<std::size_t>(mb) << 20;
    return mc;
}

int dim(const ExperimentConfig& cfg) {
    const auto d = cfg.integer("d");
    if (d < 1 || d > kMaxDim) {
        throw DomainError("--d must be between 1 and " + std::to_string(kMaxDim));
    }
    return static_cast<int>(d);
}

std::uint64_t positive(const ExperimentConfig& cfg, const std::string& key) {
    const auto v = cfg.count(key);
    if (v == 0) {
        throw DomainError("--" + key + " must be positive");
    }
    return v;
}

void run_walk(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const int d = dim(cfg);
    const auto n = cfg.count("n");
    const auto samples = positive(cfg, "samples");
    const McConfig mc = mc_config(cfg);
    struct Row {
        SiltSummary s;
        std::uint64_t max_count;
    };
    auto parts = run_chunks<std::vector<Row>>(samples, mc, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        std::vector<Row> rows;
        for (std::uint64_t i = b; i < e; ++i) {
            const auto field = LocalTimeField::sample_walk(d, n, rng, mc.budget);
            rows.push_back({summarize(field), field.max_count()});
        }
        return rows;
    });
    std::uint64_t sample = 0;
    for (const auto& part : parts) {
        for (const auto& r : part) {
            t.add_row(echo);
            t.set("sample", sample++);
            t.set("silt", r.s.silt);
            t.set("range", r.s.range);
            t.set("max_local_time", r.max_count);
            t.set("jensen_ok", check_jensen(r.s));
        }
    }
}

void run_decompose(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const int d = dim(cfg);
    const auto depth = cfg.count("N");
    if (depth < 1 || depth > 40) {
        throw DomainError("--N must be between 1 and 40");
    }
    const auto samples = positive(cfg, "samples");
    const double threshold = cfg.real("threshold");
    if (!(threshold >= 1)) {
        throw DomainError("--threshold must be >= 1");
    }
    const auto zs = cfg.reals("z");
    const auto deltas = cfg.reals("delta");
    for (double delta : deltas) {
        if (!(delta > 0 && delta < 1)) {
            throw DomainError("--delta values must lie in (0, 1)");
        }
    }
    const McConfig mc = mc_config(cfg);
    const std::uint64_t n = std::uint64_t{1} << depth;
    struct Row {
        DecompReport report;
        SiltSummary summary;
    };
    auto parts = run_chunks<std::vector<Row>>(samples, mc, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        std::vector<Row> rows;
        for (std::uint64_t i = b; i < e; ++i) {
            const StrandTree tree = build_tree(simulate_walk(d, n, rng, mc.budget), mc.budget);
            rows.push_back({analyze_tree(tree, threshold, zs, deltas), summarize(tree.field(0, 0))});
        }
        return rows;
    });
    std::uint64_t sample = 0;
    for (const auto& part : parts) {
        for (const auto& r : part) {
            std::uint64_t card = 0;
            std::uint64_t mass = 0;
            for (const auto& c : r.report.inclusion_checks) {
                card += c.cardinality_violations;
                mass += c.mass_violations;
            }
            t.add_row(echo);
            t.set("sample", sample++);
            t.set("steps", n);
            t.set("identity_residual", r.report.identity_residual);
            t.set("z0", r.report.z0);
            t.set("j_total", r.report.j_total);
            t.set("legall_pass", r.report.legall_pass());
            t.set("band0_silt", r.report.band0_silt);
            t.set("band0_pass", r.report.band0_pass(n));
            t.set("inclusion_checks", static_cast<std::uint64_t>(r.report.inclusion_checks.size()));
            t.set("cardinality_violations", card);
            t.set("mass_violations", mass);
            t.set("inclusion_pass", card == 0 && mass == 0);
            t.set("jensen_ok", check_jensen(r.summary));
        }
    }
}

void run_oracle(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const std::string q = cfg.text("quantity");
    const int d = dim(cfg);
    const auto n = cfg.count("n");
    const Norm norm = parse_norm(cfg.text("norm"));
    const BallSpec ball{cfg.real("radius"), norm};
    if (!(ball.radius >= 0)) {
        throw DomainError("--radius must be non-negative");
    }
    const Budget budget = mc_config(cfg).budget;
    auto row = [&](Value k, Value value, Value aux = {}, Value detail = {}) {
        t.add_row(echo);
        t.set("k", std::move(k));
        t.set("value", std::move(value));
        t.set("aux", std::move(aux));
        t.set("detail", std::move(detail));
    };
    if (q == "return") {
        const auto p = return_probabilities(d, n, budget);
        for (std::uint64_t k = 0; k <= n; ++k) {
            row(k, p[k]);
        }
    } else if (q == "silt") {
        row(n, expected_silt(d, n, budget));
    } else if (q == "range") {
        row(n, expected_range(d, n, budget));
    } else if (q == "intersection") {
        row(n, expected_mutual_intersection(d, n, budget));
    } else if (q == "survival") {
        const double log_p = log_survival_prob(d, n, ball, budget);
        row(n, std::exp(log_p), log_p, "aux=log survival");
    } else if (q == "eigen") {
        const auto e = principal_eigen(d, ball, 1e-12, 2'000'000, budget);
        row(e.iterations, e.eigenvalue, e.residual, "k=iterations; aux=residual");
    } else if (q == "gaussian") {
        const auto g = gaussian_comparison_constant(d, n, norm, ScanMode::reduced, budget);
        row(g.argmax_k, g.value, g.pairs, "aux=pairs; argmax x=" + g.argmax_x.str());
    } else if (q == "enumerate") {
        const auto dist = enumerate_paths(d, n);
        row(n, dist.mean_silt(), dist.mean_range(), "value=mean silt; aux=mean range");
    } else if (q == "exact_silt") {
        if (d != 1) {
            throw DomainError("exact rational mode is for d = 1");
        }
        const Rational r = exact_expected_silt_1d(n);
        row(n, static_cast<double>(r), {}, r.str());
    } else if (q == "table") {
        const std::string out = cfg.text("out");
        if (out.empty()) {
            throw DomainError("--out is required for table export");
        }
        const std::string kind = cfg.text("table");
        DenseTable dense;
        if (kind == "free") {
            dense = to_dense(transition_probs(d, n, budget), budget);
        } else if (kind == "killed") {
            dense = to_dense(killed_probs(d, n, ball, budget), budget);
        } else {
            throw DomainError("--table must be free or killed");
        }
        write_table(out, dense);
        row(n, static_cast<std::uint64_t>(dense.values.size()), dense.side(), "value=cells; aux=box side");
    } else {
        throw DomainError("unknown oracle quantity '" + q + "'");
    }
}

void run_tail(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const std::string event = cfg.text("event");
    const int d = dim(cfg);
    const auto n = cfg.count("n");
    const double y = cfg.real("y");
    const auto samples = positive(cfg, "samples");
    const McConfig mc = mc_config(cfg);
    TailEstimate est;
    Value violations;
    if (event == "silt") {
        est = mc_tail_silt(d, n, y, samples, mc);
    } else if (event == "range") {
        const auto r = mc_tail_range(d, n, y, samples, mc);
        est = r.estimate;
        violations = r.implication_violations;
    } else {
        throw DomainError("--event must be silt or range");
    }
    t.add_row(echo);
    t.set("p_hat", est.p_hat);
    t.set("stderr", est.std_error);
    t.set("hits", est.hits);
    t.set("implication_violations", violations);
}

BallSpec confinement_ball(int d, std::uint64_t n, double y, double radius) {
    if (radius > 0) {
        return BallSpec{radius, Norm::euclidean};
    }
    if (!(y > 0)) {
        throw DomainError("--y must be positive");
    }
    return radius_for_cardinality(d, static_cast<double>(n) / y);
}

void run_confine(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const int d = dim(cfg);
    const auto n = cfg.count("n");
    const auto samples = cfg.count("samples");
    const McConfig mc = mc_config(cfg);
    const BallSpec ball = confinement_ball(d, n, cfg.real("y"), cfg.real("radius"));
    const ConfinedSampler sampler(d, n, ball, mc.budget);
    t.add_row(echo);
    t.set("ball_radius", ball.radius);
    t.set("ball_size", sampler.ball_size());
    t.set("survival", sampler.survival());
    t.set("log_survival", sampler.log_survival());
    if (samples > 0) {
        const auto v = visited_fraction_experiment(sampler, cfg.real("delta0"), cfg.real("eps0"), samples, mc);
        t.set("level", v.level);
        t.set("required_sites", v.required_sites);
        t.set("frequency", v.frequency.p_hat);
        t.set("stderr", v.frequency.std_error);
        t.set("hits", v.frequency.hits);
        t.set("audit_violations", v.audit_violations);
    }
}

void run_rwrs(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const std::string mode = cfg.text("mode");
    const auto n = cfg.count("n");
    const SceneryParams params{cfg.real("alpha"), cfg.real("c")};
    const double beta = cfg.real("beta");
    const double y = cfg.real("y");
    const auto samples = positive(cfg, "samples");
    const McConfig mc = mc_config(cfg);
    t.add_row(echo);
    if (mode == "tail") {
        const auto r = mc_tail_rwrs(n, beta, y, params, samples, mc, dim(cfg));
        t.set("threshold", r.threshold);
        t.set("p_upper", r.upper.p_hat);
        t.set("stderr_upper", r.upper.std_error);
        t.set("p_lower", r.lower.p_hat);
        t.set("stderr_lower", r.lower.std_error);
    } else if (mode == "probe") {
        if (dim(cfg) != 3) {
            throw DomainError("the region III probe is defined for d = 3");
        }
        const auto p = region_iii_lower_bound_probe(n, beta, cfg.real("delta0"), cfg.real("eps0"), samples, mc,
                                                    params, y);
        t.set("u", p.u);
        t.set("v", p.v);
        t.set("zeta", p.zeta);
        t.set("ball_radius", p.ball.radius);
        t.set("ball_size", p.ball_size);
        t.set("frequency", p.visited.p_hat);
        t.set("stderr", p.visited.std_error);
        t.set("log_confinement", p.log_confinement);
        t.set("scenery_terms", p.scenery_terms);
        t.set("scenery_threshold", p.scenery_threshold);
        t.set("scenery_p_hat", p.scenery_tail.p_hat);
        t.set("scenery_log_gaussian", p.scenery_log_gaussian);
    } else {
        throw DomainError("--mode must be tail or probe");
    }
}

void run_zeta(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const auto r = zeta_exponent(cfg.real("alpha"), cfg.real("beta"));
    t.add_row(echo);
    t.set("region", std::string(to_string(r.region)));
    if (r.zeta) {
        t.set("zeta", *r.zeta);
    }
}

void run_report(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const int d = dim(cfg);
    const auto n = cfg.count("n");
    const auto samples = positive(cfg, "samples");
    const auto decay = level_decay(d, n, cfg.reals("z"), samples, mc_config(cfg));
    for (const auto& m : decay.moments) {
        t.add_row(echo);
        t.set("row", std::string("level"));
        t.set("level", m.z);
        t.set("mean_size", m.mean_size);
        t.set("se_size", m.se_size);
        t.set("mean_mass", m.mean_mass);
        t.set("se_mass", m.se_mass);
        t.set("mean_mass2", m.mean_mass2);
        t.set("se_mass2", m.se_mass2);
    }
    t.add_row(echo);
    t.set("row", std::string("fit"));
    t.set("kappa", decay.kappa);
    t.set("intercept", decay.fit.intercept);
    t.set("r_squared", decay.fit.r_squared);
}

double intersection_scale(int d, double n) {
    switch (d) {
        case 1: return std::pow(n, 1.5);
        case 2: return n;
        case 3: return std::sqrt(n);
        case 4: return std::log(n);
        default: return 1.0;
    }
}

void run_sweep(const ExperimentConfig& cfg, ResultTable& t, const std::map<std::string, Value>& echo) {
    const std::string target = cfg.text("target");
    const int d = dim(cfg);
    const auto ns = cfg.reals("ns");
    if (ns.size() < 3) {
        throw DomainError("a sweep needs at least 3 points");
    }
    const McConfig mc = mc_config(cfg);
    std::vector<std::pair<double, double>> points;
    std::vector<double> normalized;
    for (double nv : ns) {
        if (!(nv >= 1) || nv != std::floor(nv)) {
            throw DomainError("--ns must list positive integers");
        }
        const auto n = static_cast<std::uint64_t>(nv);
        double value = 0;
        Value norm_value;
        if (target == "confine") {
            const BallSpec ball = confinement_ball(d, n, cfg.real("y"), 0);
            value = -log_survival_prob(d, n, ball, mc.budget);
            points.emplace_back(nv, value);
        } else if (target == "intersection") {
            value = expected_mutual_intersection(d, n, mc.budget);
            normalized.push_back(value / intersection_scale(d, nv));
            norm_value = normalized.back();
        } else if (target == "synthetic") {
            value = 2.0 * std::cbrt(nv);
            points.emplace_back(nv, value);
        } else if (target == "tail") {
            const auto est = mc_tail_silt(d, n, cfg.real("y"), positive(cfg, "samples"), mc);
            value = est.p_hat > 0 ? -std::log(est.p_hat) : std::numeric_limits<double>::infinity();
            if (est.p_hat > 0 && est.p_hat < 1) {
                points.emplace_back(nv, value);
            }
        } else {
            throw DomainError("--target must be confine, intersection, synthetic or tail");
        }
        t.add_row(echo);
        t.set("row", std::string("point"));
        t.set("point_n", n);
        t.set("value", value);
        t.set("normalized", norm_value);
    }
    t.add_row(echo);
    t.set("row", std::string("fit"));
    if (target == "intersection") {
        const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
        t.set("max_min_ratio", *hi / *lo);
    } else {
        const auto fit = fit_exponent(points);
        t.set("exponent", fit.exponent);
        t.set("prefactor", fit.prefactor);
        t.set("r_squared", fit.r_squared);
    }
}

}  // namespace

ResultTable run(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::vector<std::string> columns = {"version", "command"};
    std::map<std::string, Value> echo = {{"version", std::string(kVersion)}, {"command", cfg.command}};
    for (const auto& p : command_params(cfg.command)) {
        columns.push_back(p.name);
        echo[p.name] = echo_value(cfg.text(p.name));
    }
    for (const auto& c : output_columns().at(cfg.command)) {
        columns.push_back(c);
    }
    if (cfg.record_timing) {
        columns.push_back("wall_time_s");
    }
    ResultTable table(columns);
    const auto start = std::chrono::steady_clock::now();
    const std::string& c = cfg.command;
    if (c == "walk") {
        run_walk(cfg, table, echo);
    } else if (c == "decompose") {
        run_decompose(cfg, table, echo);
    } else if (c == "oracle") {
        run_oracle(cfg, table, echo);
    } else if (c == "tail") {
        run_tail(cfg, table, echo);
    } else if (c == "confine") {
        run_confine(cfg, table, echo);
    } else if (c == "rwrs") {
        run_rwrs(cfg, table, echo);
    } else if (c == "zeta") {
        run_zeta(cfg, table, echo);
    } else if (c == "report") {
        run_report(cfg, table, echo);
    } else {
        run_sweep(cfg, table, echo);
    }
    if (cfg.record_timing) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        ResultTable timed(columns);
        for (std::size_t r = 0; r < table.size(); ++r) {
            timed.add_row();
            for (const auto& col : columns) {
                timed.set(col, table.get(r, col));
            }
            timed.set("wall_time_s", secs);
        }
        return timed;
    }
    return table;
}

}  // namespace siltlab
