#include "quec/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "quec/catalog.hpp"
#include "quec/registry.hpp"

namespace quec {

std::string csv_header(const std::string& kind, int version, const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string s = "# quec-" + kind + "/v" + std::to_string(version) + " rng=" + Rng::kName;
    for (const auto& [k, v] : meta) s += " " + k + "=" + v;
    return s + "\n";
}

CodeSpec resolve_code(const ExperimentConfig& cfg, const std::string& name) {
    if (!cfg.catalog.empty())
        for (auto& c : load_catalog(cfg.catalog))
            if (c.name == name) return c;
    return registry_code(name);
}

std::vector<PauliWord> parse_error_spec(const std::string& spec, int d, int n) {
    if (spec == "x") return single_shift_errors(d, n, false);
    if (spec == "z") return single_shift_errors(d, n, true);
    if (spec == "all") return all_single_qudit_errors(d, n);
    if (spec.rfind("erasure:", 0) == 0) {
        const int q = std::stoi(spec.substr(8));
        if (q < 0 || q >= n) throw std::invalid_argument("erasure qudit " + std::to_string(q) + " outside the register");
        std::vector<PauliWord> out;
        for (int a = 1; a < d; ++a) out.push_back(PauliWord::single(d, n, q, a, 0));
        for (int b = 1; b < d; ++b) out.push_back(PauliWord::single(d, n, q, 0, b));
        return out;
    }
    if (spec.rfind("code:", 0) == 0) {
        const CodeSpec c = registry_code(spec.substr(5));
        if (c.d != d || c.n != n) throw std::invalid_argument("error set of " + c.name + " has a different register shape");
        return c.correctable;
    }
    std::vector<PauliWord> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto b = item.find_first_not_of(' ');
        if (b == std::string::npos) continue;
        PauliWord w = parse_compact(d, item.substr(b));
        if (w.n() != n) throw std::invalid_argument("error word '" + item + "' does not have " + std::to_string(n) + " qudits");
        out.push_back(w);
    }
    if (out.empty()) throw std::invalid_argument("empty error set '" + spec + "'");
    return out;
}

bool VerifyReport::ok() const {
    return kl.satisfied() && invalid.empty() && golden_diffs.empty() && correctability_failures == 0;
}

std::string VerifyReport::text() const {
    std::ostringstream os;
    os << "code " << code << "\n";
    os << render_kl(kl) << "\n";
    os << "structure: " << (invalid.empty() ? "ok" : std::to_string(invalid.size()) + " issue(s)") << "\n";
    for (const auto& i : invalid) os << "  " << i << "\n";
    os << "golden rows: " << golden_rows - static_cast<int>(golden_diffs.size()) << "/" << golden_rows << " match\n";
    for (const auto& g : golden_diffs) os << "  " << g << "\n";
    os << "correctability: " << correctability_checks - correctability_failures << "/" << correctability_checks << " cycles\n";
    os << "result: " << (ok() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

VerifyReport verify_code(const CodeSpec& code, std::uint64_t seed, int states) {
    VerifyReport r;
    r.code = code.name;
    r.kl = check_kl(code, code.correctable, code.kl_mode);
    r.invalid = validate_code(code);
    for (const auto& table : golden_tables_for(code.name))
        for (const auto& row : table.rows) {
            ++r.golden_rows;
            const Syndrome got = syndrome_of(row.error, code.stabilizers);
            if (got != row.expected)
                r.golden_diffs.push_back(table.id + " " + row.label + ": printed " + render_syndrome(row.expected) + ", computed " +
                                         render_syndrome(got));
        }
    if (!code.detect_only) {
        Rng rng(seed);
        for (const auto& e : code.correctable)
            for (int s = 0; s < states; ++s) {
                ++r.correctability_checks;
                const QuditState in = random_state(code.d, code.k, rng);
                if (run_cycle(code, e, in, rng).fidelity < 1.0 - 1e-9) ++r.correctability_failures;
            }
    }
    return r;
}

AlphaChannel channel_from(int d, double p, double tau, std::optional<double> p1, std::optional<double> p2) {
    if (d == 2) return AlphaChannel::qubit(p, tau);
    return AlphaChannel::qutrit(p1.value_or(p / 2), p2.value_or(p / 2), tau);
}

BraveOptions brave_options(const ExperimentConfig& cfg, int fs) {
    BraveOptions o;
    o.horizon = cfg.horizon;
    o.fs = fs;
    o.baseline = cfg.baseline;
    o.eta = cfg.eta;
    o.initial_prefs = {cfg.pref_keep, cfg.pref_retrain};
    o.nm.budget = cfg.nm_budget;
    o.nm.initial_step = cfg.nm_step;
    o.mode = parse_fidelity_mode(cfg.fidelity);
    o.shots = cfg.shots;
    o.model = parse_channel_model(cfg.channel_model);
    o.input = parse_input_state(cfg.input);
    for (char c : cfg.mask) o.mask.push_back(c == '1');
    return o;
}

std::string adapt_csv(const ExperimentConfig& cfg, const CodeSpec& code, const AdaptiveRun& run, const std::string& method,
                      std::uint64_t seed) {
    std::ostringstream os;
    os << csv_header("adapt", 1,
                     {{"code", code.name},
                      {"method", method},
                      {"seed", std::to_string(seed)},
                      {"p", format_double(cfg.p)},
                      {"tau", format_double(cfg.tau)},
                      {"fs", std::to_string(cfg.fs)}});
    os << "t,alpha,action,fidelity";
    const int m = code.d * code.d - 1;
    for (int i = 0; i < m; ++i) os << ",theta_" << i;
    os << "\n";
    for (const auto& s : run.steps) {
        os << format_double(s.t) << ',' << format_double(s.alpha) << ',' << (s.retrained ? "retrain" : "keep") << ','
           << format_double(s.fidelity);
        for (double th : s.theta) os << ',' << format_double(th);
        os << "\n";
    }
    return os.str();
}

RegretOptions regret_options(const ExperimentConfig& cfg) {
    RegretOptions o;
    o.eta = cfg.eta;
    o.nu = cfg.nu;
    o.p = cfg.p;
    o.horizon = cfg.T;
    o.g0 = cfg.g0;
    o.pi_max = cfg.pi_max;
    o.grid = cfg.grid;
    o.steps_per_period = cfg.steps_per_period;
    o.floor_at_zero = cfg.floor_at_zero;
    return o;
}

std::string regret_csv(const RegretOptions& o, const RegretTrace& tr) {
    std::ostringstream os;
    os << csv_header("regret", 1,
                     {{"eta", format_double(o.eta)},
                      {"nu", format_double(o.nu)},
                      {"p", format_double(o.p)},
                      {"T", format_double(o.horizon)},
                      {"g0", format_double(o.g0)},
                      {"floor_at_zero", o.floor_at_zero ? "1" : "0"},
                      {"diverged", tr.diverged ? format_double(tr.diverged_at) : "no"}});
    os << "t,g,G,G_ref\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        os << format_double(tr.t[i]) << ',' << format_double(tr.g[i]) << ',' << format_double(tr.G[i]) << ','
           << format_double(regret_reference(o.eta, o.g0, tr.t[i], o.pi_max)) << "\n";
    return os.str();
}

Stat mean_std(const std::vector<double>& xs) {
    Stat s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double v = 0.0;
        for (double x : xs) v += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(v / static_cast<double>(xs.size() - 1));
    }
    return s;
}

std::vector<MetricsRow> run_sweep(const ExperimentConfig& cfg) {
    const auto points = expand_sweep(cfg);
    struct Job {
        std::size_t row;
        int rep;
    };
    std::vector<MetricsRow> rows;
    std::vector<Job> jobs;
    for (const auto& pt : points)
        for (const auto& method : cfg.sweep_methods) {
            for (int r = 0; r < cfg.seeds; ++r) jobs.push_back({rows.size(), r});
            rows.push_back({pt, method, cfg.seeds, {}, {}, {}});
        }
    std::vector<CodeSpec> codes;
    for (const auto& pt : points) codes.push_back(resolve_code(cfg, pt.code));

    struct Sample {
        double error_rate, fraction, retrains;
    };
    std::vector<Sample> samples(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
            try {
                const MetricsRow& row = rows[jobs[j].row];
                const CodeSpec& code = codes[jobs[j].row / cfg.sweep_methods.size()];
                const AlphaChannel ch = channel_from(code.d, row.point.p, row.point.tau);
                const BraveOptions opts = brave_options(cfg, row.point.fs);
                const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(jobs[j].rep);
                const AdaptiveRun run = row.method == "brave" ? brave_run(code, ch, opts, seed) : static_run(code, ch, opts, seed);
                samples[j] = {1.0 - run.mean_fidelity(), run.fraction_at_least(0.99), static_cast<double>(run.retrains)};
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<std::vector<double>> er(rows.size()), fr(rows.size()), rt(rows.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        er[jobs[j].row].push_back(samples[j].error_rate);
        fr[jobs[j].row].push_back(samples[j].fraction);
        rt[jobs[j].row].push_back(samples[j].retrains);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].error_rate = mean_std(er[i]);
        rows[i].fraction = mean_std(fr[i]);
        rows[i].retrains = mean_std(rt[i]);
    }
    return rows;
}

std::string metrics_csv(const ExperimentConfig& cfg, const std::vector<MetricsRow>& rows) {
    std::ostringstream os;
    os << csv_header("sweep", 1,
                     {{"seed", std::to_string(cfg.seed)},
                      {"seeds", std::to_string(cfg.seeds)},
                      {"horizon", format_double(cfg.horizon)},
                      {"baseline", format_double(cfg.baseline)},
                      {"eta", format_double(cfg.eta)},
                      {"fidelity", cfg.fidelity},
                      {"channel_model", cfg.channel_model}});
    os << "system,code,p,tau,fs,method,seeds,error_rate_mean,error_rate_std,fraction_mean,fraction_std,retrains_mean,"
          "retrains_std\n";
    for (const auto& r : rows)
        os << r.point.system << ',' << r.point.code << ',' << format_double(r.point.p) << ',' << format_double(r.point.tau) << ','
           << r.point.fs << ',' << r.method << ',' << r.seeds << ',' << format_double(r.error_rate.mean) << ','
           << format_double(r.error_rate.stddev) << ',' << format_double(r.fraction.mean) << ','
           << format_double(r.fraction.stddev) << ',' << format_double(r.retrains.mean) << ','
           << format_double(r.retrains.stddev) << "\n";
    return os.str();
}

namespace {

TrainConfig train_config(const ExperimentConfig& cfg) {
    TrainConfig t;
    t.max_env_steps = cfg.max_env_steps;
    t.eval_interval = cfg.eval_interval;
    t.baseline_decay = cfg.baseline_decay;
    t.entropy = cfg.entropy;
    t.mlp.hidden = cfg.hidden;
    t.mlp.lr = cfg.lr;
    return t;
}

RewardConfig reward_config(const ExperimentConfig& cfg) {
    return {cfg.r_success, cfg.r_base, cfg.r_penalty, cfg.r_boost, cfg.r_failure};
}

std::string curve(const std::string& stage, const ExperimentConfig& cfg, std::uint64_t seed, const TrainLog& log) {
    return csv_header("curve", 1, {{"stage", stage}, {"seed", std::to_string(seed)}, {"errors", "'" + cfg.errors + "'"}}) +
           log.csv();
}

}  // namespace

DiscoverOutput run_discover(const ExperimentConfig& cfg, std::uint64_t seed) {
    DiscoverOutput out;
    const bool have_code = !cfg.code.empty();
    const CodeSpec given = have_code ? resolve_code(cfg, cfg.code) : CodeSpec{};
    const int d = have_code ? given.d : cfg.d;
    const int n = have_code ? given.n : cfg.n;
    const int k = have_code ? given.k : cfg.k;
    const std::vector<PauliWord> errors = cfg.errors.empty() ? given.correctable : parse_error_spec(cfg.errors, d, n);
    const TrainConfig train = train_config(cfg);
    const std::string name = (have_code ? given.name : std::string("discovered")) + "_" + cfg.stage + "_s" + std::to_string(seed);

    EncoderEnvConfig ec;
    ec.d = d;
    ec.n = n;
    ec.k = k;
    ec.errors = errors;
    ec.t_steps = cfg.t_steps;
    ec.kl_mode = parse_kl_mode(cfg.kl_mode);
    ec.reward = parse_encoder_reward(cfg.reward);
    ec.rewards = reward_config(cfg);
    if (have_code) ec.inputs = given.inputs();

    if (cfg.stage == "pipeline") {
        PipelineConfig pc;
        pc.name = name;
        pc.encoder = ec;
        pc.curriculum_tasks = cfg.curriculum_tasks;
        pc.syndrome_mode = parse_syndrome_mode(cfg.syndrome_mode);
        pc.train = train;
        const PipelineResult r = run_pipeline(pc, seed);
        out.files.push_back({"encoder_curve.csv", curve("encoder", cfg, seed, r.encoder.log)});
        out.files.push_back({"syndrome_curve.csv", curve("syndrome", cfg, seed, r.syndrome.log)});
        out.files.push_back({"recovery_curve.csv", curve("recovery", cfg, seed, r.recovery.log)});
        out.success = r.success;
        out.failure = r.failure;
        if (r.success) out.codes.push_back(r.code);
        return out;
    }

    CodeSpec code = have_code ? given : CodeSpec{};
    code.name = name;
    code.correctable = errors;
    code.kl_mode = ec.kl_mode;
    if (cfg.stage == "encoder") {
        const auto r = train_encoder(ec, make_curriculum(errors, cfg.curriculum_tasks), train, seed);
        out.files.push_back({"encoder_curve.csv", curve("encoder", cfg, seed, r.log)});
        out.success = r.success;
        if (!r.success) out.failure = "encoder: budget exhausted without satisfying KL";
        code.d = d;
        code.n = n;
        code.k = k;
        code.encoder = r.circuit;
        code.logical_inputs = ec.inputs;
        code.stabilizers.clear();
        code.recovery.clear();
        code.detect_only = true;  // no syndrome stage yet
        out.codes.push_back(code);
        return out;
    }
    if (cfg.stage == "syndrome") {
        SyndromeEnvConfig sc;
        sc.d = d;
        sc.n = n;
        sc.generators = errors.empty() ? 0 : n - k;
        for (const auto& s : logical_basis(given)) sc.basis.push_back(s.amps);
        sc.errors = errors;
        sc.mode = parse_syndrome_mode(cfg.syndrome_mode);
        sc.rewards = ec.rewards;
        const auto r = train_syndrome(sc, train, seed);
        out.files.push_back({"syndrome_curve.csv", curve("syndrome", cfg, seed, r.log)});
        out.success = r.success;
        if (!r.success) {
            out.failure = "syndrome: no valid generator set within the budget";
            return out;
        }
        code.stabilizers = r.stabilizers;
        code.recovery = build_recovery_table(code.stabilizers, errors);
        out.codes.push_back(code);
        return out;
    }
    // recovery
    const auto r = train_recovery({given, errors}, train, seed);
    out.files.push_back({"recovery_curve.csv", curve("recovery", cfg, seed, r.log)});
    out.success = r.success;
    if (!r.success) out.failure = "recovery: greedy corrections reach fidelity " + format_double(r.min_reward);
    code.recovery = r.table;
    out.codes.push_back(code);
    return out;
}

}  // namespace quec
