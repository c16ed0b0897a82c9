// regime-lab: file-based pipeline for market-regime clustering experiments.
//
//   regime-lab <simulate|cluster|validate|score|sweep> --config <json>
//              [--out <dir>] [--seed <u64>]
//
// Exit codes: 0 success, 1 numerical failure, 2 config/IO error.
// REGIME_LAB_THREADS caps the number of worker threads.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "regime/experiment.hpp"
#include "regime/io.hpp"
#include "regime/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace regime;

namespace {

unsigned thread_cap() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("REGIME_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0 && static_cast<unsigned long>(v) < n)
            n = static_cast<unsigned>(v);
    }
    return n;
}

// Run fn(i) for i in [0, count) on up to thread_cap() threads.
template <class Fn>
void parallel_for(std::size_t count, Fn fn) {
    const unsigned workers = std::min<std::size_t>(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

GbmParams gbm_from_json(const json& j) {
    GbmParams p;
    p.mu = j.at("mu").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.validate();
    return p;
}

MertonParams merton_from_json(const json& j) {
    MertonParams p;
    p.mu = j.at("mu").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.delta = j.at("delta").get<double>();
    p.validate();
    return p;
}

SchedulePolicy policy_from_json(const json& j) {
    SchedulePolicy pol;
    if (!j.contains("schedule")) return pol;
    const json& s = j.at("schedule");
    pol.random_length = s.value("random_length", pol.random_length);
    pol.fixed_length = s.value("fixed_length", pol.fixed_length);
    pol.min_length = s.value("min_length", pol.min_length);
    pol.max_length = s.value("max_length", pol.max_length);
    return pol;
}

json policy_to_json(const SchedulePolicy& pol) {
    return {{"random_length", pol.random_length},
            {"fixed_length", pol.fixed_length},
            {"min_length", pol.min_length},
            {"max_length", pol.max_length}};
}

PathRecord simulate_from_json(const json& cfg, std::uint64_t seed) {
    const std::string model = cfg.at("model").get<std::string>();
    const double t_years = cfg.at("t_years").get<double>();
    const int n_regimes = cfg.at("n_regimes").get<int>();
    const double s0 = cfg.value("s0", 100.0);
    const auto schedule = build_schedule(t_years, n_regimes, policy_from_json(cfg), seed);
    if (model == "gbm")
        return simulate_gbm(schedule, gbm_from_json(cfg.at("bull")),
                            gbm_from_json(cfg.at("bear")), s0, seed);
    if (model == "merton")
        return simulate_merton(schedule, merton_from_json(cfg.at("bull")),
                               merton_from_json(cfg.at("bear")), s0, seed);
    throw InvalidInput("simulate: model must be 'gbm' or 'merton', got '" + model + "'");
}

RunConfig run_config_from_json(const json& cfg, std::uint64_t seed) {
    RunConfig rc;
    if (cfg.contains("window")) {
        rc.window.h1 = cfg.at("window").value("h1", rc.window.h1);
        rc.window.h2 = cfg.at("window").value("h2", rc.window.h2);
    }
    rc.window.validate();
    rc.kmeans.k = cfg.value("k", rc.kmeans.k);
    rc.kmeans.restarts = cfg.value("restarts", rc.kmeans.restarts);
    rc.kmeans.tolerance = cfg.value("tolerance", rc.kmeans.tolerance);
    rc.kmeans.max_iterations = cfg.value("max_iterations", rc.kmeans.max_iterations);
    rc.kmeans.seed = seed;
    rc.wasserstein_p = cfg.value("wasserstein_p", rc.wasserstein_p);
    rc.p_moments = cfg.value("p_moments", rc.p_moments);
    rc.hmm.seed = seed;
    rc.hmm.max_em_iterations = cfg.value("max_em_iterations", rc.hmm.max_em_iterations);
    return rc;
}

json run_config_to_json(const RunConfig& rc, Algorithm algo, std::uint64_t seed) {
    return {{"algorithm", algorithm_name(algo)},
            {"window", {{"h1", rc.window.h1}, {"h2", rc.window.h2}}},
            {"k", rc.kmeans.k},
            {"restarts", rc.kmeans.restarts},
            {"tolerance", rc.kmeans.tolerance},
            {"max_iterations", rc.kmeans.max_iterations},
            {"wasserstein_p", rc.wasserstein_p},
            {"p_moments", rc.p_moments},
            {"max_em_iterations", rc.hmm.max_em_iterations},
            {"seed", seed}};
}

json windows_to_json(const std::vector<IndexRange>& windows) {
    json out = json::array();
    for (const auto& w : windows) out.push_back({{"begin", w.begin}, {"end", w.end}});
    return out;
}

std::uint64_t resolve_seed(const json& cfg, const std::optional<std::uint64_t>& cli_seed) {
    if (cli_seed) return *cli_seed;
    return cfg.value("seed", std::uint64_t{0});
}

int cmd_simulate(const json& cfg, const fs::path& out, std::optional<std::uint64_t> cli_seed) {
    const std::uint64_t seed = resolve_seed(cfg, cli_seed);
    const auto record = simulate_from_json(cfg, seed);
    fs::create_directories(out);
    write_price_csv(out / "prices.csv", to_price_stream(record));
    json resolved = cfg;
    resolved["seed"] = seed;
    resolved["s0"] = cfg.value("s0", 100.0);
    resolved["schedule"] = policy_to_json(policy_from_json(cfg));
    write_json(out / "schedule.json", json{{"config", resolved},
                                           {"model", record.model},
                                           {"seed", seed},
                                           {"schedule", to_json(record.schedule)}});
    std::cout << "wrote " << (out / "prices.csv").string() << " and "
              << (out / "schedule.json").string() << "\n";
    return 0;
}

int cmd_cluster(const json& cfg, const fs::path& out, std::optional<std::uint64_t> cli_seed) {
    const std::uint64_t seed = resolve_seed(cfg, cli_seed);
    const auto algo = algorithm_from_name(cfg.at("algorithm").get<std::string>());
    const auto rc = run_config_from_json(cfg, seed);
    const auto prices = read_price_csv(cfg.at("input_csv").get<std::string>());
    const auto returns = log_returns(prices);
    const auto run = run_algorithm(returns, algo, rc);

    json result = {{"config", run_config_to_json(rc, algo, seed)},
                   {"input_csv", cfg.at("input_csv")},
                   {"n_returns", returns.size()},
                   {"windows", windows_to_json(run.windows)},
                   {"window_labels", run.window_labels},
                   {"memberships", run.memberships}};
    if (run.wk) result["kmeans"] = to_json(*run.wk);
    if (run.mk) result["kmeans"] = to_json(*run.mk);
    if (run.hmm) {
        result["hmm"] = to_json(run.hmm->model);
        result["hmm_loglik_trace"] = run.hmm->loglik_trace;
        result["hmm_return_labels"] = run.hmm_return_labels;
    }

    fs::create_directories(out);
    write_json(out / "clustering.json", result);

    // Mean-variance scatter of the lifted windows, coloured by label.
    {
        std::ofstream scatter(out / "scatter.csv");
        if (!scatter) throw InvalidInput("cannot write scatter.csv");
        scatter << "window,sd,mean,label\n";
        const auto measures = measures_from_returns(returns, rc.window);
        for (std::size_t w = 0; w < measures.size(); ++w) {
            const auto proj = mean_variance_projection(measures[w]);
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%d\n", w, proj.sd, proj.mean,
                          run.window_labels[w]);
            scatter << buf;
        }
    }

    // Per-return normalized membership fractions (historical colouring).
    {
        std::ofstream col(out / "colouring.csv");
        if (!col) throw InvalidInput("cannot write colouring.csv");
        col << "return";
        for (int c = 0; c < rc.kmeans.k; ++c) col << ",frac_" << c;
        col << "\n";
        const auto series = colouring_series(run.memberships);
        for (std::size_t i = 0; i < series.size(); ++i) {
            col << i;
            for (double f : series[i]) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), ",%.17g", f);
                col << buf;
            }
            col << "\n";
        }
    }
    std::cout << "wrote " << (out / "clustering.json").string() << "\n";
    return 0;
}

int cmd_validate(const json& cfg, const fs::path& out, std::optional<std::uint64_t> cli_seed) {
    const std::uint64_t seed = resolve_seed(cfg, cli_seed);
    const json clustering = read_json(cfg.at("clustering_json").get<std::string>());
    const auto prices = read_price_csv(clustering.at("input_csv").get<std::string>());
    const auto returns = log_returns(prices);
    WindowConfig window{clustering.at("config").at("window").at("h1").get<std::size_t>(),
                        clustering.at("config").at("window").at("h2").get<std::size_t>()};
    const auto measures = measures_from_returns(returns, window);
    const auto labels = clustering.at("window_labels").get<std::vector<int>>();
    const int k = clustering.at("config").at("k").get<int>();
    if (labels.size() != measures.size())
        throw InvalidInput("validate: clustering does not match the input stream");

    MmdSamplingConfig sampling;
    sampling.n_pairs = cfg.value("n_pairs", sampling.n_pairs);
    sampling.seed = seed;
    KernelConfig kernel;
    kernel.sigma = cfg.value("sigma", kernel.sigma);

    std::vector<std::vector<EmpiricalMeasure>> clusters(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < measures.size(); ++i)
        clusters[static_cast<std::size_t>(labels[i])].push_back(measures[i]);

    json within = json::array();
    for (int c = 0; c < k; ++c) {
        const auto score = within_cluster_similarity(clusters[static_cast<std::size_t>(c)],
                                                     sampling, kernel);
        within.push_back({{"cluster", c},
                          {"score", score.score},
                          {"histogram", score.histogram}});
    }
    json between = json::array();
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            const auto score = between_cluster_mmd(clusters[static_cast<std::size_t>(a)],
                                                   clusters[static_cast<std::size_t>(b)],
                                                   sampling, kernel);
            between.push_back({{"clusters", {a, b}},
                               {"score", score.score},
                               {"histogram", score.histogram}});
        }

    // Classic indexes in mean-variance space.
    std::vector<std::vector<double>> points;
    points.reserve(measures.size());
    for (const auto& m : measures) {
        const auto proj = mean_variance_projection(m);
        points.push_back({proj.sd, proj.mean});
    }
    std::vector<std::vector<double>> centroids(static_cast<std::size_t>(k),
                                               std::vector<double>(2, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        centroids[c][0] += points[i][0];
        centroids[c][1] += points[i][1];
        ++counts[c];
    }
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        if (counts[c] == 0) throw InvalidInput("validate: empty cluster");
        centroids[c][0] /= static_cast<double>(counts[c]);
        centroids[c][1] /= static_cast<double>(counts[c]);
    }
    const double alpha = cfg.value("silhouette_alpha", 1.0);
    const auto sil = silhouette_alpha(points, labels, static_cast<std::size_t>(k), euclidean,
                                      alpha, seed);

    json resolved = cfg;
    resolved["seed"] = seed;
    resolved["n_pairs"] = sampling.n_pairs;
    resolved["sigma"] = kernel.sigma;
    resolved["silhouette_alpha"] = alpha;
    fs::create_directories(out);
    write_json(out / "validation.json",
               json{{"config", resolved},
                    {"within_cluster", within},
                    {"between_cluster", between},
                    {"davies_bouldin",
                     davies_bouldin(points, labels, centroids, euclidean)},
                    {"dunn", dunn(points, labels, static_cast<std::size_t>(k), euclidean)},
                    {"silhouette",
                     {{"score", sil.score}, {"sampled", sil.sampled}, {"skipped", sil.skipped}}}});
    std::cout << "wrote " << (out / "validation.json").string() << "\n";
    return 0;
}

int cmd_score(const json& cfg, const fs::path& out, std::optional<std::uint64_t>) {
    const json clustering = read_json(cfg.at("clustering_json").get<std::string>());
    const json sched_doc = read_json(cfg.at("schedule_json").get<std::string>());
    const auto schedule = schedule_from_json(
        sched_doc.contains("schedule") ? sched_doc.at("schedule") : sched_doc);
    const auto memberships = clustering.at("memberships").get<std::vector<std::vector<int>>>();
    const auto report = accuracy_scores(memberships, schedule);

    json result = {{"config", cfg},
                   {"total", report.total},
                   {"regime_on", report.regime_on},
                   {"regime_off", report.regime_off},
                   {"uncovered_returns", report.uncovered_returns}};
    if (clustering.contains("hmm_return_labels") &&
        !clustering.at("hmm_return_labels").empty()) {
        const auto per_return = score_hmm_returns(
            clustering.at("hmm_return_labels").get<std::vector<int>>(), schedule);
        result["hmm_per_return"] = {{"total", per_return.total},
                                    {"regime_on", per_return.regime_on},
                                    {"regime_off", per_return.regime_off}};
    }
    fs::create_directories(out);
    write_json(out / "score.json", result);
    std::cout << "wrote " << (out / "score.json").string() << "\n";
    return 0;
}

int cmd_sweep(const json& cfg, const fs::path& out, std::optional<std::uint64_t> cli_seed) {
    const std::uint64_t seed = resolve_seed(cfg, cli_seed);
    const auto algo = algorithm_from_name(cfg.value("algorithm", std::string("wkmeans")));
    const int runs = cfg.value("runs", 5);
    if (runs < 1) throw InvalidInput("sweep: runs must be >= 1");

    std::vector<std::size_t> h1_values;
    if (cfg.contains("h1_values")) {
        h1_values = cfg.at("h1_values").get<std::vector<std::size_t>>();
    } else {
        for (int i = 1; i <= 10; ++i) h1_values.push_back(static_cast<std::size_t>(7 + 7 * i));
    }
    if (h1_values.empty()) throw InvalidInput("sweep: no h1 values");

    struct Row {
        std::size_t h1, h2;
        AggregateStats ta, rons, rofs;
    };
    std::vector<Row> rows(h1_values.size());
    struct Job {
        std::size_t h1_index;
        int run;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < h1_values.size(); ++i)
        for (int r = 0; r < runs; ++r) jobs.push_back({i, r});

    std::vector<std::vector<AccuracyReport>> reports(
        h1_values.size(), std::vector<AccuracyReport>(static_cast<std::size_t>(runs)));
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto [h1_index, run] = jobs[j];
        // Same path seed per run index across h1 values, so the sweep varies
        // only the window geometry.
        const std::uint64_t path_seed = seed + static_cast<std::uint64_t>(run);
        const auto record = simulate_from_json(cfg, path_seed);
        const auto returns = log_returns(to_price_stream(record));
        RunConfig rc = run_config_from_json(cfg, path_seed);
        rc.window.h1 = h1_values[h1_index];
        rc.window.h2 = 3 * rc.window.h1 / 4;
        rc.window.validate();
        const auto output = run_algorithm(returns, algo, rc);
        reports[h1_index][static_cast<std::size_t>(run)] =
            score_run(output, record.schedule);
    });

    for (std::size_t i = 0; i < h1_values.size(); ++i) {
        std::vector<double> ta, rons, rofs;
        for (const auto& rep : reports[i]) {
            ta.push_back(rep.total);
            rons.push_back(rep.regime_on);
            rofs.push_back(rep.regime_off);
        }
        rows[i] = {h1_values[i], 3 * h1_values[i] / 4, aggregate(ta), aggregate(rons),
                   aggregate(rofs)};
    }

    fs::create_directories(out);
    {
        std::ofstream csv(out / "sweep.csv");
        if (!csv) throw InvalidInput("cannot write sweep.csv");
        csv << "h1,h2,ta_mean,ta_ci95,rons_mean,rons_ci95,rofs_mean,rofs_ci95\n";
        for (const auto& row : rows) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          row.h1, row.h2, row.ta.mean, row.ta.ci95, row.rons.mean,
                          row.rons.ci95, row.rofs.mean, row.rofs.ci95);
            csv << buf;
        }
    }
    json resolved = cfg;
    resolved["seed"] = seed;
    resolved["runs"] = runs;
    resolved["algorithm"] = algorithm_name(algo);
    resolved["h1_values"] = h1_values;
    json jrows = json::array();
    for (const auto& row : rows)
        jrows.push_back({{"h1", row.h1},
                         {"h2", row.h2},
                         {"ta", {{"mean", row.ta.mean}, {"ci95", row.ta.ci95}}},
                         {"rons", {{"mean", row.rons.mean}, {"ci95", row.rons.ci95}}},
                         {"rofs", {{"mean", row.rofs.mean}, {"ci95", row.rofs.ci95}}}});
    write_json(out / "sweep.json", json{{"config", resolved}, {"rows", jrows}});
    std::cout << "wrote " << (out / "sweep.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regime-lab: market-regime clustering experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> cli_seed;

    int (*handler)(const json&, const fs::path&, std::optional<std::uint64_t>) = nullptr;
    for (const auto& [name, fn] : {std::pair{"simulate", &cmd_simulate},
                                   std::pair{"cluster", &cmd_cluster},
                                   std::pair{"validate", &cmd_validate},
                                   std::pair{"score", &cmd_score},
                                   std::pair{"sweep", &cmd_sweep}}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", cli_seed, "override the config seed");
        sub->callback([&handler, fn] { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const json cfg = read_json(config_path);
        return handler(cfg, out_dir, cli_seed);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
