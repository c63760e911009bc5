#include <r1h/bench.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <r1h/baselines.hpp>
#include <r1h/errors.hpp>
#include <r1h/rng.hpp>

namespace r1h
{

namespace
{

constexpr std::pair<Method, std::string_view> method_names[] = {
    {Method::r1h_l2, "r1h_l2"},
    {Method::r1h_l1, "r1h_l1"},
    {Method::matrix_pencil, "matrix_pencil"},
    {Method::hankel_music, "hankel_music"},
    {Method::fbss_music, "fbss_music"},
    {Method::max_energy, "max_energy"},
    {Method::toeplitz_music, "toeplitz_music"},
    {Method::matched_filter_ml, "matched_filter_ml"},
};

const char* const csv_header = "method,M,D,snr_db,noise,theta0_deg,theta_hat_deg,abs_err_deg,seed,ok";

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
        {
            return out;
        }
        start = pos + 1;
    }
}

template <typename T>
T parse_number(const std::string& text, const std::string& what)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+')
    {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
    {
        throw InvalidConfiguration(what + ": cannot parse '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& what)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on")
    {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off")
    {
        return false;
    }
    throw InvalidConfiguration(what + ": expected a boolean, got '" + text + "'");
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what)
{
    std::vector<T> out;
    for (const auto& item : split(text, ','))
    {
        out.push_back(parse_number<T>(item, what));
    }
    return out;
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string_view to_string(Method m)
{
    for (const auto& [method, name] : method_names)
    {
        if (method == m)
        {
            return name;
        }
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    for (const auto& [method, n] : method_names)
    {
        if (n == name)
        {
            return method;
        }
    }
    throw InvalidConfiguration("unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const
{
    if (schema_version != current_schema)
    {
        throw InvalidConfiguration("unsupported schema_version " + std::to_string(schema_version)
                                   + " (this build reads " + std::to_string(current_schema) + ")");
    }
    if (array_sizes.empty())
    {
        throw InvalidConfiguration("array_sizes is empty");
    }
    if (methods.empty())
    {
        throw InvalidConfiguration("methods is empty");
    }
    if (snr_db.empty())
    {
        throw InvalidConfiguration("snr_db is empty");
    }
    if (trials < 1)
    {
        throw InvalidConfiguration("trials must be at least 1");
    }
    if (window_rule == WindowRule::explicit_list && windows.size() != array_sizes.size())
    {
        throw InvalidConfiguration("explicit windows must list one D per array size");
    }
    for (std::size_t i = 0; i < array_sizes.size(); ++i)
    {
        const std::size_t m = array_sizes[i];
        const std::size_t d = window_for(i);
        if (m < 2 || d < 1 || d > m)
        {
            throw InvalidConfiguration("array size " + std::to_string(m) + " with D = "
                                       + std::to_string(d) + " is not a valid array");
        }
        if (faults)
        {
            for (std::size_t s : faults->faulty_sensors)
            {
                if (s >= m)
                {
                    throw InvalidConfiguration("faulty sensor " + std::to_string(s)
                                               + " outside an array of " + std::to_string(m));
                }
            }
        }
    }
    if (!(theta_step > 0.0 && theta_step <= 180.0))
    {
        throw InvalidConfiguration("theta_step must lie in (0, 180]");
    }
    if (!(spacing_ratio > 0.0))
    {
        throw InvalidConfiguration("spacing_ratio must be positive");
    }
    if (theta0.kind == ThetaPolicy::Kind::uniform && !(theta0.low < theta0.high))
    {
        throw InvalidConfiguration("theta0 range is empty");
    }
    if (theta0.kind == ThetaPolicy::Kind::fixed && !(theta0.value >= -90.0 && theta0.value < 90.0))
    {
        throw InvalidConfiguration("theta0_value must lie in [-90, 90)");
    }
    if (threads < 1)
    {
        throw InvalidConfiguration("threads must be at least 1");
    }
    if (!(failure_threshold >= 0.0 && failure_threshold <= 1.0))
    {
        throw InvalidConfiguration("failure_threshold must lie in [0, 1]");
    }
    if (!plot_path.empty() && plot_format != "svg" && plot_format != "gnuplot")
    {
        throw InvalidConfiguration("plot_format must be svg or gnuplot");
    }
    try
    {
        noise.validate();
    }
    catch (const InvalidArgument& e)
    {
        throw InvalidConfiguration(e.what());
    }
}

std::size_t ExperimentConfig::window_for(std::size_t index) const
{
    if (window_rule == WindowRule::explicit_list)
    {
        return windows.at(index);
    }
    return std::max<std::size_t>(array_sizes.at(index) / 2, 1);
}

std::string ExperimentConfig::noise_label() const
{
    if (noiseless)
    {
        return "none";
    }
    return noise.kind == NoiseKind::white_gaussian ? "white" : "impulsive";
}

ExperimentConfig ExperimentConfig::parse_ini(const std::string& text)
{
    // the property_tree reader only accepts comments on their own line
    std::string cleaned;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
        {
            const auto cut = line.find_first_of(";#");
            cleaned += trim(line.substr(0, cut));
            cleaned += '\n';
        }
    }

    boost::property_tree::ptree tree;
    try
    {
        std::istringstream in(cleaned);
        boost::property_tree::read_ini(in, tree);
    }
    catch (const boost::property_tree::ini_parser_error& e)
    {
        throw InvalidConfiguration(std::string("malformed config: ") + e.what());
    }

    static const std::map<std::string, std::set<std::string>> allowed = {
        {"experiment",
         {"array_sizes", "d_rule", "windows", "snr_db", "trials", "methods", "theta0",
          "theta0_value", "theta0_low", "theta0_high", "master_seed", "theta_step", "spacing_ratio",
          "refine", "l1_two_stage", "threads", "failure_threshold"}},
        {"noise", {"kind", "sigma2", "p", "sigma1_2", "sigma2_2"}},
        {"faults", {"sensors", "alpha_db"}},
        {"output", {"csv", "plot", "plot_format"}},
    };

    ExperimentConfig cfg;
    bool saw_version = false;
    for (const auto& [key, node] : tree)
    {
        if (node.empty())
        {
            if (key != "schema_version")
            {
                throw InvalidConfiguration("unknown top-level key '" + key + "'");
            }
            cfg.schema_version = parse_number<int>(node.data(), "schema_version");
            saw_version = true;
            continue;
        }
        const auto section = allowed.find(key);
        if (section == allowed.end())
        {
            throw InvalidConfiguration("unknown section [" + key + "]");
        }
        for (const auto& [name, leaf] : node)
        {
            if (!section->second.contains(name))
            {
                throw InvalidConfiguration("unknown key '" + name + "' in [" + key + "]");
            }
        }
    }
    if (!saw_version)
    {
        throw InvalidConfiguration("missing schema_version");
    }

    auto get = [&](const char* path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(boost::property_tree::ptree::path_type(path, '.')))
        {
            return trim(*v);
        }
        return std::nullopt;
    };

    if (auto v = get("experiment.array_sizes"))
    {
        cfg.array_sizes = parse_list<std::size_t>(*v, "array_sizes");
    }
    if (auto v = get("experiment.d_rule"))
    {
        if (*v == "half_of_m")
        {
            cfg.window_rule = WindowRule::half_of_m;
        }
        else if (*v == "explicit")
        {
            cfg.window_rule = WindowRule::explicit_list;
        }
        else
        {
            throw InvalidConfiguration("d_rule must be half_of_m or explicit");
        }
    }
    if (auto v = get("experiment.windows"))
    {
        cfg.windows = parse_list<std::size_t>(*v, "windows");
    }
    if (auto v = get("experiment.snr_db"))
    {
        cfg.snr_db = parse_list<double>(*v, "snr_db");
    }
    if (auto v = get("experiment.trials"))
    {
        cfg.trials = parse_number<std::size_t>(*v, "trials");
    }
    if (auto v = get("experiment.methods"))
    {
        cfg.methods.clear();
        for (const auto& name : split(*v, ','))
        {
            cfg.methods.push_back(parse_method(name));
        }
    }
    if (auto v = get("experiment.theta0"))
    {
        if (*v == "uniform")
        {
            cfg.theta0.kind = ThetaPolicy::Kind::uniform;
        }
        else if (*v == "fixed")
        {
            cfg.theta0.kind = ThetaPolicy::Kind::fixed;
        }
        else
        {
            throw InvalidConfiguration("theta0 must be uniform or fixed");
        }
    }
    if (auto v = get("experiment.theta0_value"))
    {
        cfg.theta0.value = parse_number<double>(*v, "theta0_value");
    }
    if (auto v = get("experiment.theta0_low"))
    {
        cfg.theta0.low = parse_number<double>(*v, "theta0_low");
    }
    if (auto v = get("experiment.theta0_high"))
    {
        cfg.theta0.high = parse_number<double>(*v, "theta0_high");
    }
    if (auto v = get("experiment.master_seed"))
    {
        cfg.master_seed = parse_number<std::uint64_t>(*v, "master_seed");
    }
    if (auto v = get("experiment.theta_step"))
    {
        cfg.theta_step = parse_number<double>(*v, "theta_step");
    }
    if (auto v = get("experiment.spacing_ratio"))
    {
        cfg.spacing_ratio = parse_number<double>(*v, "spacing_ratio");
    }
    if (auto v = get("experiment.refine"))
    {
        cfg.refine = parse_bool(*v, "refine");
    }
    if (auto v = get("experiment.l1_two_stage"))
    {
        cfg.l1_two_stage = parse_bool(*v, "l1_two_stage");
    }
    if (auto v = get("experiment.threads"))
    {
        cfg.threads = parse_number<std::size_t>(*v, "threads");
    }
    if (auto v = get("experiment.failure_threshold"))
    {
        cfg.failure_threshold = parse_number<double>(*v, "failure_threshold");
    }

    if (auto v = get("noise.kind"))
    {
        if (*v == "white")
        {
            cfg.noise.kind = NoiseKind::white_gaussian;
        }
        else if (*v == "impulsive")
        {
            cfg.noise.kind = NoiseKind::bernoulli_gaussian;
        }
        else if (*v == "none")
        {
            cfg.noiseless = true;
        }
        else
        {
            throw InvalidConfiguration("noise kind must be white, impulsive or none");
        }
    }
    if (auto v = get("noise.sigma2"))
    {
        cfg.noise.sigma2 = parse_number<double>(*v, "sigma2");
    }
    if (auto v = get("noise.p"))
    {
        cfg.noise.p = parse_number<double>(*v, "p");
    }
    if (auto v = get("noise.sigma1_2"))
    {
        cfg.noise.sigma1_2 = parse_number<double>(*v, "sigma1_2");
    }
    if (auto v = get("noise.sigma2_2"))
    {
        cfg.noise.sigma2_2 = parse_number<double>(*v, "sigma2_2");
    }

    if (tree.get_child_optional("faults"))
    {
        FaultSpec spec;
        if (auto v = get("faults.sensors"); v && !v->empty())
        {
            for (std::size_t s : parse_list<std::size_t>(*v, "sensors"))
            {
                spec.faulty_sensors.insert(s);
            }
        }
        if (auto v = get("faults.alpha_db"))
        {
            spec.alpha_db = parse_number<double>(*v, "alpha_db");
        }
        cfg.faults = spec;
    }

    if (auto v = get("output.csv"))
    {
        cfg.csv_path = *v;
    }
    if (auto v = get("output.plot"))
    {
        cfg.plot_path = *v;
    }
    if (auto v = get("output.plot_format"))
    {
        cfg.plot_format = *v;
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot read config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ini(ss.str());
}

std::size_t ExperimentResult::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const TrialRecord& r) { return !r.ok; }));
}

double ExperimentResult::failed_fraction() const
{
    return records.empty() ? 0.0
                           : static_cast<double>(failures()) / static_cast<double>(records.size());
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t elements, std::size_t snr_index,
                         std::size_t trial)
{
    return derive_seed(master, {elements, snr_index, trial});
}

DoaScene make_trial_scene(const ExperimentConfig& cfg, std::size_t elements, std::size_t window,
                          double snr_db, std::uint64_t seed)
{
    const ArrayConfig array{elements, window, cfg.spacing_ratio};
    Rng rng(seed);
    double theta0 = cfg.theta0.value;
    if (cfg.theta0.kind == ThetaPolicy::Kind::uniform)
    {
        theta0 = cfg.theta0.low + (cfg.theta0.high - cfg.theta0.low) * rng.uniform();
    }
    const Complex amplitude = calibrate_amplitude(snr_db, cfg.noise, rng);
    std::optional<NoiseModel> noise;
    if (!cfg.noiseless)
    {
        noise = cfg.noise;
    }
    DoaScene scene = acquire(array, theta0, amplitude, noise, derive_seed(seed, {1}));
    if (cfg.faults && !cfg.faults->faulty_sensors.empty())
    {
        Rng fault_rng(derive_seed(seed, {2}));
        scene.measurements =
            inject_faults(scene.measurements, SensorMap::sliding_ula(window, array.acquisitions()),
                          *cfg.faults, fault_rng);
    }
    return scene;
}

double run_method(Method method, const DoaScene& scene, const ExperimentConfig& cfg)
{
    const ThetaGrid grid{cfg.theta_step};
    const ComplexMatrix& x = scene.measurements;
    const ArrayConfig& array = scene.config;
    switch (method)
    {
    case Method::r1h_l2:
        return estimate_doa_l2(x, array, grid, cfg.refine).theta_deg;
    case Method::r1h_l1:
    {
        L1SearchOptions opts;
        opts.two_stage = cfg.l1_two_stage;
        opts.refine = cfg.refine;
        return estimate_doa_l1(x, array, grid, {}, opts).theta_deg;
    }
    case Method::matrix_pencil:
        return r1h::matrix_pencil(x, array).theta_deg;
    case Method::hankel_music:
        return r1h::hankel_music(x, array, grid).theta_deg;
    case Method::fbss_music:
        return r1h::fbss_music(x, array, grid).theta_deg;
    case Method::max_energy:
        return r1h::max_energy(average_per_sensor(x, array), array, grid).theta_deg;
    case Method::toeplitz_music:
        return r1h::toeplitz_music(average_per_sensor(x, array), array, grid).theta_deg;
    case Method::matched_filter_ml:
        return r1h::matched_filter_ml(x, array, grid).theta_deg;
    }
    throw InvalidArgument("run_method: unknown method");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const std::size_t n_m = cfg.array_sizes.size();
    const std::size_t n_snr = cfg.snr_db.size();
    const std::size_t n_method = cfg.methods.size();
    const std::size_t n_trial = cfg.trials;
    const std::string label = cfg.noise_label();

    ExperimentResult result;
    result.records.resize(n_m * n_snr * n_method * n_trial);
    const std::size_t n_tasks = n_m * n_snr * n_trial;

    // one task = one scene, shared by every method
    auto run_task = [&](std::size_t task) {
        const std::size_t trial = task % n_trial;
        const std::size_t cell = task / n_trial;
        const std::size_t si = cell % n_snr;
        const std::size_t mi = cell / n_snr;
        const std::size_t m = cfg.array_sizes[mi];
        const std::size_t d = cfg.window_for(mi);
        const std::uint64_t seed = trial_seed(cfg.master_seed, m, si, trial);

        std::optional<DoaScene> scene;
        std::string scene_error;
        try
        {
            scene = make_trial_scene(cfg, m, d, cfg.snr_db[si], seed);
        }
        catch (const std::exception& e)
        {
            scene_error = e.what();
        }

        for (std::size_t k = 0; k < n_method; ++k)
        {
            TrialRecord& rec = result.records[((mi * n_snr + si) * n_method + k) * n_trial + trial];
            rec.method = cfg.methods[k];
            rec.elements = m;
            rec.window = d;
            rec.snr_db = cfg.snr_db[si];
            rec.noise = label;
            rec.seed = seed;
            rec.theta0 = scene ? scene->theta0 : std::numeric_limits<double>::quiet_NaN();
            const auto t0 = std::chrono::steady_clock::now();
            try
            {
                if (!scene)
                {
                    throw std::runtime_error(scene_error);
                }
                rec.theta_hat = run_method(rec.method, *scene, cfg);
                rec.abs_error = std::abs(rec.theta_hat - rec.theta0);
                rec.ok = std::isfinite(rec.abs_error);
                if (!rec.ok)
                {
                    rec.error = "non-finite estimate";
                }
            }
            catch (const std::exception& e)
            {
                rec.ok = false;
                rec.error = e.what();
            }
            if (!rec.ok)
            {
                rec.theta_hat = std::numeric_limits<double>::quiet_NaN();
                rec.abs_error = std::numeric_limits<double>::quiet_NaN();
            }
            rec.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    const std::size_t n_threads = std::min(cfg.threads, std::max<std::size_t>(n_tasks, 1));
    if (n_threads <= 1)
    {
        for (std::size_t t = 0; t < n_tasks; ++t)
        {
            run_task(t);
        }
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i)
        {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < n_tasks; t = next++)
                {
                    run_task(t);
                }
            });
        }
    }

    result.summary = summarize(result.records);
    return result;
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records)
{
    std::vector<CellSummary> out;
    std::vector<double> sums;
    for (const TrialRecord& r : records)
    {
        if (out.empty() || out.back().method != r.method || out.back().elements != r.elements
            || out.back().window != r.window || out.back().snr_db != r.snr_db)
        {
            out.push_back({r.method, r.elements, r.window, r.snr_db, 0, 0, 0.0});
            sums.push_back(0.0);
        }
        if (r.ok)
        {
            ++out.back().ok;
            sums.back() += r.abs_error;
        }
        else
        {
            ++out.back().failed;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i].mean_abs_error = out[i].ok > 0 ? sums[i] / static_cast<double>(out[i].ok)
                                              : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

std::string format_csv(const std::vector<TrialRecord>& records)
{
    std::string out = csv_header;
    out += '\n';
    for (const TrialRecord& r : records)
    {
        out += to_string(r.method);
        out += ',' + std::to_string(r.elements);
        out += ',' + std::to_string(r.window);
        out += ',' + format_double(r.snr_db);
        out += ',' + r.noise;
        out += ',' + format_double(r.theta0);
        out += ',' + format_double(r.theta_hat);
        out += ',' + format_double(r.abs_error);
        out += ',' + std::to_string(r.seed);
        out += r.ok ? ",1\n" : ",0\n";
    }
    return out;
}

std::vector<TrialRecord> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != csv_header)
    {
        throw InvalidArgument("parse_csv: missing or unexpected header");
    }
    std::vector<TrialRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (trim(line).empty())
        {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 10)
        {
            throw InvalidArgument("parse_csv: line " + std::to_string(line_no) + " has "
                                  + std::to_string(f.size()) + " fields");
        }
        try
        {
            TrialRecord r;
            r.method = parse_method(f[0]);
            r.elements = parse_number<std::size_t>(f[1], "M");
            r.window = parse_number<std::size_t>(f[2], "D");
            r.snr_db = parse_number<double>(f[3], "snr_db");
            r.noise = f[4];
            r.theta0 = parse_number<double>(f[5], "theta0_deg");
            r.theta_hat = parse_number<double>(f[6], "theta_hat_deg");
            r.abs_error = parse_number<double>(f[7], "abs_err_deg");
            r.seed = parse_number<std::uint64_t>(f[8], "seed");
            r.ok = parse_bool(f[9], "ok");
            out.push_back(std::move(r));
        }
        catch (const InvalidConfiguration& e)
        {
            throw InvalidArgument("parse_csv: line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw IoError("cannot write " + path.string());
    }
    out << format_csv(records);
    out.flush();
    if (!out)
    {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace r1h
