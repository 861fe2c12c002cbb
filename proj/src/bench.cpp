#include "bam/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <new>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "bam/errors.hpp"
#include "bam/monitor.hpp"
#include "bam/random.hpp"

namespace bam {

void BenchParams::validate() const {
    if (boxes < 1 || dimension < 1 || queries < 1 || threads < 1) {
        throw InvalidArgument("bench: boxes, dimension, queries and threads must all be >= 1");
    }
    if (!(inside_fraction >= 0.0 && inside_fraction <= 1.0)) {
        throw InvalidArgument("bench: inside_fraction must lie in [0, 1]");
    }
}

LatencyStats summarize_latencies(std::vector<double> latencies_ms) {
    LatencyStats stats;
    stats.queries = latencies_ms.size();
    if (latencies_ms.empty()) return stats;
    std::sort(latencies_ms.begin(), latencies_ms.end());
    stats.total_ms = std::accumulate(latencies_ms.begin(), latencies_ms.end(), 0.0);
    stats.mean_ms = stats.total_ms / static_cast<double>(latencies_ms.size());
    const std::size_t mid = latencies_ms.size() / 2;
    stats.median_ms = latencies_ms.size() % 2 == 1
                          ? latencies_ms[mid]
                          : 0.5 * (latencies_ms[mid - 1] + latencies_ms[mid]);
    // Nearest-rank percentile.
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(latencies_ms.size())));
    stats.p99_ms = latencies_ms[std::max<std::size_t>(rank, 1) - 1];
    return stats;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Workload {
    Eigen::MatrixXd lower;
    Eigen::MatrixXd upper;
    Eigen::MatrixXd queries;
};

Workload make_workload(const BenchParams& p) {
    const auto n = static_cast<Eigen::Index>(p.dimension);
    const auto k = static_cast<Eigen::Index>(p.boxes);
    Rng rng(p.seed);
    Workload w;
    w.lower.resize(n, k);
    w.upper.resize(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double center = rng.uniform(0.0, 10.0);
            const double half = rng.uniform(0.1, 1.0);
            w.lower(i, j) = center - half;
            w.upper(i, j) = center + half;
        }
    }

    const auto total = static_cast<Eigen::Index>(p.queries);
    const auto inside = static_cast<Eigen::Index>(
        std::llround(p.inside_fraction * static_cast<double>(p.queries)));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
    }

    w.queries.resize(n, total);
    for (Eigen::Index q = 0; q < total; ++q) {
        auto col = w.queries.col(order[static_cast<std::size_t>(q)]);
        if (q < inside) {
            const auto j = static_cast<Eigen::Index>(rng.index(p.boxes));
            for (Eigen::Index i = 0; i < n; ++i) col(i) = rng.uniform(w.lower(i, j), w.upper(i, j));
        } else {
            // Every upper bound is below 11, so one coordinate past 11 puts
            // the query outside all boxes.
            for (Eigen::Index i = 0; i < n; ++i) col(i) = rng.uniform(-1.0, 11.0);
            col(static_cast<Eigen::Index>(rng.index(p.dimension))) = rng.uniform(11.0, 12.0);
        }
    }
    return w;
}

} // namespace

BenchReport bench_throughput(const BenchParams& params) {
    params.validate();
    BenchReport report;
    report.params = params;
    try {
        const Workload work = make_workload(params);
        const ClassMonitor monitor("bench", work.lower, work.upper);
        const std::size_t threads = std::min(params.threads, params.queries);

        std::vector<std::vector<double>> latencies(threads);
        std::vector<std::size_t> accepted(threads, 0);
        auto run = [&](std::size_t t) {
            const std::size_t begin = params.queries * t / threads;
            const std::size_t end = params.queries * (t + 1) / threads;
            auto& mine = latencies[t];
            mine.reserve(end - begin);
            for (std::size_t q = begin; q < end; ++q) {
                const auto start = Clock::now();
                const MonitorDistance d =
                    monitor_distance(work.queries.col(static_cast<Eigen::Index>(q)), monitor);
                const auto stop = Clock::now();
                if (d.distance == 0.0) ++accepted[t];
                mine.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
            }
        };

        const auto wall_start = Clock::now();
        if (threads == 1) {
            run(0);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run, t);
        }
        report.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - wall_start).count();

        std::vector<double> all;
        for (std::size_t t = 0; t < threads; ++t) {
            report.per_thread.push_back(summarize_latencies(latencies[t]));
            all.insert(all.end(), latencies[t].begin(), latencies[t].end());
            report.accepted += accepted[t];
        }
        report.aggregate = summarize_latencies(std::move(all));
    } catch (const std::bad_alloc&) {
        throw Error("bench: out of memory allocating " + std::to_string(params.boxes) + " boxes x " +
                    std::to_string(params.dimension) + " dimensions");
    }
    return report;
}

std::string to_json(const BenchReport& report) {
    using json = nlohmann::ordered_json;
    auto stats_json = [](const LatencyStats& s) {
        return json{{"queries", s.queries},
                    {"mean_ms", s.mean_ms},
                    {"median_ms", s.median_ms},
                    {"p99_ms", s.p99_ms},
                    {"total_ms", s.total_ms}};
    };
    json j{{"format", "bam-bench-report"},
           {"schema_version", 1},
           {"boxes", report.params.boxes},
           {"dimension", report.params.dimension},
           {"queries", report.params.queries},
           {"inside_fraction", report.params.inside_fraction},
           {"seed", report.params.seed},
           {"threads", report.params.threads},
           {"accepted", report.accepted},
           {"wall_ms", report.wall_ms},
           {"aggregate", stats_json(report.aggregate)}};
    json per_thread = json::array();
    for (const auto& s : report.per_thread) per_thread.push_back(stats_json(s));
    j["per_thread"] = std::move(per_thread);
    return j.dump(2);
}

} // namespace bam
