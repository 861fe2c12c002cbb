#include "bam/synth.hpp"

#include <cmath>
#include <numbers>

#include "bam/errors.hpp"
#include "bam/random.hpp"

namespace bam {

namespace {

constexpr int kMaxRejections = 100000;

Eigen::VectorXd round_to_float(const Eigen::VectorXd& v) {
    return v.cast<float>().cast<double>();
}

double min_distance_to_means(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& means,
                             std::size_t* nearest = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < means.size(); ++c) {
        const double d = (x - means[c]).norm();
        if (d < best) {
            best = d;
            if (nearest != nullptr) *nearest = c;
        }
    }
    return best;
}

Eigen::VectorXd random_direction(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd dir(n);
    double norm = 0.0;
    do {
        for (Eigen::Index i = 0; i < n; ++i) dir(i) = rng.normal();
        norm = dir.norm();
    } while (norm == 0.0);
    return dir / norm;
}

FeatureRecord make_record(std::string key, Label label, Eigen::VectorXd values) {
    FeatureRecord r;
    r.class_key = std::move(key);
    r.label = label;
    r.score = 1.0;
    r.values = std::move(values);
    return r;
}

std::size_t share(std::size_t total, std::size_t parts, std::size_t index) {
    return total / parts + (index < total % parts ? 1 : 0);
}

} // namespace

SynthPreset parse_preset(std::string_view name) {
    if (name == "gauss-mix" || name == "GAUSS_MIX") return SynthPreset::GaussMix;
    if (name == "moons" || name == "MOONS") return SynthPreset::Moons;
    if (name == "ring-ood" || name == "RING_OOD") return SynthPreset::RingOod;
    if (name == "uniform-ood" || name == "UNIFORM_OOD") return SynthPreset::UniformOod;
    throw InvalidArgument("unknown synthetic preset '" + std::string(name) + "'");
}

std::string_view to_string(SynthPreset preset) {
    switch (preset) {
    case SynthPreset::GaussMix: return "gauss-mix";
    case SynthPreset::Moons: return "moons";
    case SynthPreset::RingOod: return "ring-ood";
    case SynthPreset::UniformOod: return "uniform-ood";
    }
    return "gauss-mix";
}

void SynthParams::validate(SynthPreset preset) const {
    if (n_points < 1) throw InvalidArgument("synth: n_points must be at least 1");
    if (dimension < 1) throw InvalidArgument("synth: dimension must be at least 1");
    if (components < 1) throw InvalidArgument("synth: components must be at least 1");
    if (!(spread > 0.0)) throw InvalidArgument("synth: spread must be positive");
    if (!(separation >= 0.0)) throw InvalidArgument("synth: separation must be non-negative");
    if (!(exclusion >= 0.0)) throw InvalidArgument("synth: exclusion must be non-negative");
    if (!(ring_width >= 0.0)) throw InvalidArgument("synth: ring width must be non-negative");
    if (!(margin >= 0.0)) throw InvalidArgument("synth: margin must be non-negative");
    if (layer_tag.empty()) throw InvalidArgument("synth: layer tag must be non-empty");
    if (preset == SynthPreset::Moons && dimension < 2) {
        throw InvalidArgument("synth: moons need at least two dimensions");
    }
    if (!means.empty()) {
        if (means.size() != components) {
            throw InvalidArgument("synth: number of explicit means must equal components");
        }
        for (const auto& m : means) detail::check_dimension("synth mean", dimension, m.size());
    }
}

std::vector<Eigen::VectorXd> component_means(const SynthParams& params) {
    if (!params.means.empty()) return params.means;
    const std::size_t count = params.components;
    const double side = params.separation * params.spread;
    std::vector<Eigen::VectorXd> means(count, Eigen::VectorXd::Zero(params.dimension));
    if (count == 1) return means;
    if (params.dimension == 1) {
        for (std::size_t c = 0; c < count; ++c) means[c](0) = side * static_cast<double>(c);
        return means;
    }
    const double radius = side / (2.0 * std::sin(std::numbers::pi / static_cast<double>(count)));
    for (std::size_t c = 0; c < count; ++c) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                             static_cast<double>(count);
        means[c](0) = radius * std::cos(angle);
        means[c](1) = radius * std::sin(angle);
    }
    return means;
}

std::string class_key_for_component(const SynthParams& params, std::size_t component) {
    const std::size_t group = params.groups == 0 ? component : component % params.groups;
    return params.class_prefix + std::to_string(group);
}

FeatureSet synth_generate(SynthPreset preset, const SynthParams& params) {
    params.validate(preset);
    Rng rng(params.seed);
    FeatureSet out(params.dimension, params.layer_tag);
    const Eigen::Index n = params.dimension;
    const auto means = component_means(params);
    const double exclusion = params.exclusion * params.spread;

    switch (preset) {
    case SynthPreset::GaussMix: {
        for (std::size_t c = 0; c < means.size(); ++c) {
            const std::size_t count = share(params.n_points, means.size(), c);
            for (std::size_t i = 0; i < count; ++i) {
                Eigen::VectorXd x(n);
                for (Eigen::Index d = 0; d < n; ++d) x(d) = means[c](d) + params.spread * rng.normal();
                out.add(make_record(class_key_for_component(params, c), Label::Id, round_to_float(x)));
            }
        }
        break;
    }
    case SynthPreset::Moons: {
        // Two interleaved half circles of radius separation * spread / 2.
        const double radius = params.separation * params.spread / 2.0;
        for (std::size_t c = 0; c < 2; ++c) {
            const std::size_t count = share(params.n_points, 2, c);
            for (std::size_t i = 0; i < count; ++i) {
                const double t = std::numbers::pi * rng.uniform();
                Eigen::VectorXd x(n);
                for (Eigen::Index d = 0; d < n; ++d) x(d) = params.spread * rng.normal();
                if (c == 0) {
                    x(0) += radius * std::cos(t);
                    x(1) += radius * std::sin(t);
                } else {
                    x(0) += radius * (1.0 - std::cos(t));
                    x(1) += radius * (0.5 - std::sin(t));
                }
                out.add(make_record(class_key_for_component(params, c), Label::Id, round_to_float(x)));
            }
        }
        break;
    }
    case SynthPreset::RingOod: {
        for (std::size_t i = 0; i < params.n_points; ++i) {
            const std::size_t c = i % means.size();
            for (int attempt = 0;; ++attempt) {
                if (attempt == kMaxRejections) {
                    throw InvalidArgument("synth: ring samples keep falling inside the exclusion zone");
                }
                const double r = exclusion + params.ring_width * params.spread * rng.uniform();
                const Eigen::VectorXd x = round_to_float(means[c] + r * random_direction(rng, n));
                std::size_t nearest = 0;
                if (min_distance_to_means(x, means, &nearest) < exclusion) continue;
                out.add(make_record(class_key_for_component(params, nearest), Label::Ood, x));
                break;
            }
        }
        break;
    }
    case SynthPreset::UniformOod: {
        Eigen::VectorXd lo = means.front();
        Eigen::VectorXd hi = means.front();
        for (const auto& m : means) {
            lo = lo.cwiseMin(m);
            hi = hi.cwiseMax(m);
        }
        lo.array() -= params.margin * params.spread;
        hi.array() += params.margin * params.spread;
        if ((hi - lo).maxCoeff() <= 0.0) {
            throw InvalidArgument("synth: uniform OoD region is empty; use a positive margin");
        }
        for (std::size_t i = 0; i < params.n_points; ++i) {
            for (int attempt = 0;; ++attempt) {
                if (attempt == kMaxRejections) {
                    throw InvalidArgument("synth: uniform OoD region is covered by the exclusion zone");
                }
                Eigen::VectorXd x(n);
                for (Eigen::Index d = 0; d < n; ++d) x(d) = rng.uniform(lo(d), hi(d));
                x = round_to_float(x);
                std::size_t nearest = 0;
                if (min_distance_to_means(x, means, &nearest) < exclusion) continue;
                out.add(make_record(class_key_for_component(params, nearest), Label::Ood, x));
                break;
            }
        }
        break;
    }
    }
    return out;
}

} // namespace bam
