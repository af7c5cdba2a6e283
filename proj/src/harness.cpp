#include "greenran/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "greenran/gsbf.hpp"
#include "greenran/mip.hpp"

namespace greenran::harness {

using nlohmann::json;

const char* to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::L2Box: return "l2box";
        case Algorithm::Gsbf: return "gsbf";
        case Algorithm::Rmip: return "rmip";
        case Algorithm::MipEnum: return "mip_enum";
        case Algorithm::MipBnb: return "mip_bnb";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
    for (Algorithm a : {Algorithm::L2Box, Algorithm::Gsbf, Algorithm::Rmip, Algorithm::MipEnum, Algorithm::MipBnb}) {
        if (name == to_string(a)) return a;
    }
    throw ConfigError("unknown algorithm '" + name + "'");
}

void ExperimentSpec::validate() const {
    base_config.validate();
    l2box.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (algorithms.empty()) throw ConfigError("algorithms must not be empty");
    if (sinr_targets_db.empty()) throw ConfigError("sinr_targets_db must not be empty");
    for (double db : sinr_targets_db) {
        if (!std::isfinite(db)) throw ConfigError("sinr_targets_db entries must be finite");
    }
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    std::set<Algorithm> seen;
    for (Algorithm a : algorithms) {
        if (!seen.insert(a).second) throw ConfigError(std::string("duplicate algorithm '") + to_string(a) + "'");
    }
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
T get_as(const json& value, const std::string& key) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

// Scalars broadcast to `count` entries; arrays must have exactly `count`.
template <typename T>
std::vector<T> broadcast(const json& value, int count, const std::string& key) {
    if (value.is_array()) {
        auto out = get_as<std::vector<T>>(value, key);
        if (static_cast<int>(out.size()) != count) {
            throw ConfigError(fmt::format("key '{}' needs {} entries, got {}", key, count, out.size()));
        }
        return out;
    }
    return std::vector<T>(static_cast<std::size_t>(count), get_as<T>(value, key));
}

SystemConfig parse_system(const json& obj) {
    if (!obj.is_object()) throw ConfigError("base_config must be an object");
    reject_unknown(obj,
                   {"L", "K", "N_l", "P_max_l", "P_fronthaul_l", "eta_l", "noise_power_k", "gamma_k",
                    "region_halfwidth_m", "pathloss_exponent", "pathloss_ref_m", "seed"},
                   "base_config");
    const SystemConfig defaults = default_config();
    const int num_rrh = obj.contains("L") ? get_as<int>(obj["L"], "L") : defaults.num_rrh;
    const int num_users = obj.contains("K") ? get_as<int>(obj["K"], "K") : defaults.num_users;
    if (num_rrh < 1) throw ConfigError("L must be >= 1");
    if (num_users < 1) throw ConfigError("K must be >= 1");

    SystemConfig cfg = make_uniform_config(num_rrh, num_users, 2);
    if (obj.contains("N_l")) cfg.antennas = broadcast<int>(obj["N_l"], num_rrh, "N_l");
    if (obj.contains("P_max_l")) cfg.max_power_w = broadcast<double>(obj["P_max_l"], num_rrh, "P_max_l");
    if (obj.contains("P_fronthaul_l")) {
        cfg.fronthaul_power_w = broadcast<double>(obj["P_fronthaul_l"], num_rrh, "P_fronthaul_l");
    }
    if (obj.contains("eta_l")) cfg.efficiency = broadcast<double>(obj["eta_l"], num_rrh, "eta_l");
    if (obj.contains("noise_power_k")) cfg.noise_power_w = broadcast<double>(obj["noise_power_k"], num_users, "noise_power_k");
    if (obj.contains("gamma_k")) cfg.sinr_target = broadcast<double>(obj["gamma_k"], num_users, "gamma_k");
    if (obj.contains("region_halfwidth_m")) cfg.region_halfwidth_m = get_as<double>(obj["region_halfwidth_m"], "region_halfwidth_m");
    if (obj.contains("pathloss_exponent")) cfg.pathloss_exponent = get_as<double>(obj["pathloss_exponent"], "pathloss_exponent");
    if (obj.contains("pathloss_ref_m")) cfg.pathloss_ref_m = get_as<double>(obj["pathloss_ref_m"], "pathloss_ref_m");
    if (obj.contains("seed")) cfg.seed = get_as<std::uint64_t>(obj["seed"], "seed");
    cfg.validate();
    return cfg;
}

l2box::L2BoxSettings parse_l2box(const json& obj) {
    if (!obj.is_object()) throw ConfigError("l2box must be an object");
    reject_unknown(obj, {"eps1", "eps2", "eps3", "lambda0", "alpha0", "max_outer", "max_inner"}, "l2box");
    l2box::L2BoxSettings s;
    if (obj.contains("eps1")) s.eps1 = get_as<double>(obj["eps1"], "eps1");
    if (obj.contains("eps2")) s.eps2 = get_as<double>(obj["eps2"], "eps2");
    if (obj.contains("eps3")) s.eps3 = get_as<double>(obj["eps3"], "eps3");
    if (obj.contains("lambda0")) s.lambda0 = get_as<double>(obj["lambda0"], "lambda0");
    if (obj.contains("alpha0")) s.alpha0 = get_as<double>(obj["alpha0"], "alpha0");
    if (obj.contains("max_outer")) s.max_outer = get_as<int>(obj["max_outer"], "max_outer");
    if (obj.contains("max_inner")) s.max_inner = get_as<int>(obj["max_inner"], "max_inner");
    s.validate();
    return s;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("experiment document must be a JSON object");
    reject_unknown(doc,
                   {"schema_version", "base_config", "sinr_targets_db", "trials", "algorithms", "base_seed",
                    "output_dir", "parallelism", "l2box", "record_timing"},
                   "experiment");
    if (!doc.contains("schema_version")) throw ConfigError("missing key 'schema_version'");
    const int version = get_as<int>(doc["schema_version"], "schema_version");
    if (version != kSchemaVersion) throw ConfigError(fmt::format("unsupported schema_version {}", version));

    ExperimentSpec spec;
    spec.base_config = doc.contains("base_config") ? parse_system(doc["base_config"]) : default_config();
    if (doc.contains("base_config") && doc["base_config"].contains("seed")) spec.base_seed = spec.base_config.seed;
    if (doc.contains("sinr_targets_db")) spec.sinr_targets_db = get_as<std::vector<double>>(doc["sinr_targets_db"], "sinr_targets_db");
    if (doc.contains("trials")) spec.trials = get_as<int>(doc["trials"], "trials");
    if (doc.contains("algorithms")) {
        spec.algorithms.clear();
        for (const auto& name : get_as<std::vector<std::string>>(doc["algorithms"], "algorithms")) {
            spec.algorithms.push_back(parse_algorithm(name));
        }
    }
    if (doc.contains("base_seed")) spec.base_seed = get_as<std::uint64_t>(doc["base_seed"], "base_seed");
    if (doc.contains("output_dir")) spec.output_dir = get_as<std::string>(doc["output_dir"], "output_dir");
    if (doc.contains("parallelism")) spec.parallelism = get_as<int>(doc["parallelism"], "parallelism");
    if (doc.contains("l2box")) spec.l2box = parse_l2box(doc["l2box"]);
    if (doc.contains("record_timing")) spec.record_timing = get_as<bool>(doc["record_timing"], "record_timing");
    spec.validate();
    return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_spec(text.str());
}

std::string spec_to_json(const ExperimentSpec& spec) {
    const SystemConfig& c = spec.base_config;
    json base = {{"L", c.num_rrh},
                 {"K", c.num_users},
                 {"N_l", c.antennas},
                 {"P_max_l", c.max_power_w},
                 {"P_fronthaul_l", c.fronthaul_power_w},
                 {"eta_l", c.efficiency},
                 {"noise_power_k", c.noise_power_w},
                 {"gamma_k", c.sinr_target},
                 {"region_halfwidth_m", c.region_halfwidth_m},
                 {"pathloss_exponent", c.pathloss_exponent},
                 {"pathloss_ref_m", c.pathloss_ref_m},
                 {"seed", c.seed}};
    std::vector<std::string> algos;
    for (Algorithm a : spec.algorithms) algos.emplace_back(to_string(a));
    const l2box::L2BoxSettings& s = spec.l2box;
    json doc = {{"schema_version", kSchemaVersion},
                {"base_config", base},
                {"sinr_targets_db", spec.sinr_targets_db},
                {"trials", spec.trials},
                {"algorithms", algos},
                {"base_seed", spec.base_seed},
                {"output_dir", spec.output_dir},
                {"parallelism", spec.parallelism},
                {"record_timing", spec.record_timing},
                {"l2box",
                 {{"eps1", s.eps1},
                  {"eps2", s.eps2},
                  {"eps3", s.eps3},
                  {"lambda0", s.lambda0},
                  {"alpha0", s.alpha0},
                  {"max_outer", s.max_outer},
                  {"max_inner", s.max_inner}}}};
    return doc.dump(2) + "\n";
}

bool ResultRecord::feasible() const { return status == to_string(AlgoStatus::Converged) || status == to_string(AlgoStatus::OuterLimit); }

TrialInstance make_instance(const ExperimentSpec& spec, int trial) {
    TrialInstance inst;
    inst.trial = trial;
    inst.seed = spec.base_seed + static_cast<std::uint64_t>(trial);
    inst.topology = generate_topology(spec.base_config, inst.seed);
    inst.channel = generate_channel(spec.base_config, inst.topology, inst.seed);
    return inst;
}

SystemConfig config_for_target(const ExperimentSpec& spec, double sinr_db) {
    SystemConfig cfg = spec.base_config;
    cfg.set_uniform_sinr_db(sinr_db);
    return cfg;
}

AlgoResult run_algorithm(Algorithm algo, const SystemConfig& cfg, const Channel& ch, const l2box::L2BoxSettings& settings) {
    switch (algo) {
        case Algorithm::L2Box: return l2box::run_l2box(cfg, ch, settings);
        case Algorithm::Gsbf: return gsbf::run_gsbf(cfg, ch);
        case Algorithm::Rmip: return mip::run_rmip(cfg, ch);
        case Algorithm::MipEnum: return mip::enumerate_optimal(cfg, ch);
        case Algorithm::MipBnb: return mip::branch_and_bound(cfg, ch);
    }
    throw ConfigError("unknown algorithm");
}

namespace {

std::vector<ResultRecord> run_trial(const ExperimentSpec& spec, const TrialInstance& inst) {
    std::vector<ResultRecord> out;
    for (double db : spec.sinr_targets_db) {
        const SystemConfig cfg = config_for_target(spec, db);
        for (Algorithm algo : spec.algorithms) {
            ResultRecord rec;
            rec.trial = inst.trial;
            rec.seed = inst.seed;
            rec.algo = to_string(algo);
            rec.sinr_db = db;
            rec.active_set = std::string(static_cast<std::size_t>(cfg.num_rrh), '0');
            if (algo == Algorithm::MipEnum && cfg.num_rrh > kEnumerationRrhLimit) {
                rec.status = "skipped";
                out.push_back(std::move(rec));
                continue;
            }
            const auto start = std::chrono::steady_clock::now();
            try {
                const AlgoResult r = run_algorithm(algo, cfg, inst.channel, spec.l2box);
                rec.status = to_string(r.status);
                rec.outer_iterations = r.outer_iterations;
                rec.solver_calls = r.solver_calls;
                if (r.feasible()) {
                    rec.power_w = r.power_w;
                    rec.active_count = static_cast<int>(r.active_set.size());
                    rec.active_set = r.z_final.bitstring();
                }
            } catch (const SolverError& e) {
                spdlog::warn("trial {} {} at {} dB: {}", inst.trial, rec.algo, db, e.what());
                rec.status = "error";
            }
            if (spec.record_timing) {
                rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

}  // namespace

void sort_records(std::vector<ResultRecord>& records) {
    std::sort(records.begin(), records.end(), [](const ResultRecord& a, const ResultRecord& b) {
        if (a.sinr_db != b.sinr_db) return a.sinr_db < b.sinr_db;
        if (a.algo != b.algo) return a.algo < b.algo;
        return a.trial < b.trial;
    });
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, const ProgressFn& progress) {
    spec.validate();
    ExperimentOutput out;
    out.instances.reserve(static_cast<std::size_t>(spec.trials));
    for (int i = 0; i < spec.trials; ++i) out.instances.push_back(make_instance(spec, i));

    std::vector<std::vector<ResultRecord>> per_trial(static_cast<std::size_t>(spec.trials));
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= spec.trials) return;
            try {
                per_trial[static_cast<std::size_t>(i)] = run_trial(spec, out.instances[static_cast<std::size_t>(i)]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(spec.trials);
                return;
            }
            const int finished = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(i, finished, spec.trials);
            }
        }
    };

    const int workers = std::min(spec.parallelism, spec.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& trial_records : per_trial) {
        for (auto& rec : trial_records) out.records.push_back(std::move(rec));
    }
    sort_records(out.records);
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
    std::map<std::pair<double, std::string>, std::vector<const ResultRecord*>> groups;
    for (const ResultRecord& r : records) {
        auto& group = groups[{r.sinr_db, r.algo}];
        if (r.feasible()) group.push_back(&r);
    }
    std::vector<SummaryRow> rows;
    for (const auto& [key, group] : groups) {
        SummaryRow row;
        row.sinr_db = key.first;
        row.algo = key.second;
        row.n_feasible = static_cast<int>(group.size());
        if (!group.empty()) {
            double sum = 0.0;
            double active = 0.0;
            for (const ResultRecord* r : group) {
                sum += r->power_w;
                active += r->active_count;
            }
            row.mean_power_w = sum / row.n_feasible;
            row.mean_active = active / row.n_feasible;
            if (row.n_feasible >= 2) {
                double ss = 0.0;
                for (const ResultRecord* r : group) ss += (r->power_w - row.mean_power_w) * (r->power_w - row.mean_power_w);
                row.std_power_w = std::sqrt(ss / (row.n_feasible - 1));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string num(double value) { return fmt::format("{:.17g}", value); }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

std::string detail_csv(const std::vector<ResultRecord>& records) {
    std::string out = "trial,seed,algo,sinr_db,status,power_w,active_count,active_set,outer_iterations,solver_calls,wall_ms\n";
    for (const ResultRecord& r : records) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.trial, r.seed, r.algo, num(r.sinr_db), r.status,
                           num(r.power_w), r.active_count, r.active_set, r.outer_iterations, r.solver_calls,
                           num(r.wall_ms));
    }
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "sinr_db,algo,n_feasible,mean_power_w,std_power_w,mean_active\n";
    for (const SummaryRow& r : rows) {
        out += fmt::format("{},{},{},{},{},{}\n", num(r.sinr_db), r.algo, r.n_feasible, num(r.mean_power_w),
                           num(r.std_power_w), num(r.mean_active));
    }
    return out;
}

std::string instances_csv(const std::vector<TrialInstance>& instances) {
    std::string out = "trial,seed,channel_digest\n";
    for (const TrialInstance& inst : instances) {
        out += fmt::format("{},{},{:016x}\n", inst.trial, inst.seed, inst.channel.digest());
    }
    return out;
}

std::string trace_csv(const AlgoResult& result) {
    std::string out = "t,lambda,residual,tol1,tol2,lagrangian\n";
    for (const TraceRecord& t : result.trace) {
        out += fmt::format("{},{},{},{},{},{}\n", t.t, num(t.lambda), num(t.residual), num(t.tol1()), num(t.tol2()),
                           num(t.lagrangian));
    }
    return out;
}

std::vector<ResultRecord> parse_detail_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty detail CSV");
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 11) throw ConfigError("detail CSV row has " + std::to_string(f.size()) + " fields");
        ResultRecord r;
        r.trial = std::stoi(f[0]);
        r.seed = std::stoull(f[1]);
        r.algo = f[2];
        r.sinr_db = std::stod(f[3]);
        r.status = f[4];
        r.power_w = std::stod(f[5]);
        r.active_count = std::stoi(f[6]);
        r.active_set = f[7];
        r.outer_iterations = std::stoi(f[8]);
        r.solver_calls = std::stoi(f[9]);
        r.wall_ms = std::stod(f[10]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

void emit_results(const ExperimentOutput& out, const std::filesystem::path& dir) {
    if (out.records.empty()) throw ConfigError("no records to emit");
    write_text(dir / "results.csv", detail_csv(out.records));
    write_text(dir / "summary.csv", summary_csv(summarize(out.records)));
    write_text(dir / "instances.csv", instances_csv(out.instances));
}

void emit_trace(const AlgoResult& result, const std::filesystem::path& path) { write_text(path, trace_csv(result)); }

}  // namespace greenran::harness
