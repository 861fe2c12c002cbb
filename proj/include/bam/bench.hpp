#ifndef BAM_BENCH_HPP
#define BAM_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bam {

struct BenchParams {
    std::size_t boxes = 7000;
    std::size_t dimension = 1024;
    std::size_t queries = 1000;
    /// Fraction of queries drawn inside a randomly chosen box.
    double inside_fraction = 0.0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    void validate() const;
};

struct LatencyStats {
    std::size_t queries = 0;
    double mean_ms = 0.0;
    double median_ms = 0.0;
    double p99_ms = 0.0;
    double total_ms = 0.0;
};

struct BenchReport {
    BenchParams params;
    LatencyStats aggregate;
    std::vector<LatencyStats> per_thread;
    double wall_ms = 0.0;
    std::size_t accepted = 0;
};

/// Times monitor_distance queries against a random monitor of the requested
/// shape. Timings are hardware dependent.
BenchReport bench_throughput(const BenchParams& params);

LatencyStats summarize_latencies(std::vector<double> latencies_ms);

std::string to_json(const BenchReport& report);

} // namespace bam

#endif // BAM_BENCH_HPP
