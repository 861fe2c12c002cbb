#ifndef BAM_SYNTH_HPP
#define BAM_SYNTH_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bam/features.hpp"

namespace bam {

enum class SynthPreset { GaussMix, Moons, RingOod, UniformOod };

SynthPreset parse_preset(std::string_view name);
std::string_view to_string(SynthPreset preset);

/// Shared geometry for the ID mixture and the OoD samplers built around it.
/// Distances (separation, exclusion, ring width) are in units of `spread`.
struct SynthParams {
    std::size_t n_points = 300;
    Eigen::Index dimension = 2;
    std::size_t components = 3;
    /// Components are assigned to classes round-robin; 0 means one class per component.
    std::size_t groups = 0;
    double separation = 10.0;
    double spread = 1.0;
    /// OoD samples keep at least exclusion * spread from every component mean.
    double exclusion = 3.0;
    double ring_width = 2.0;
    /// Uniform OoD region: bounding box of the means, padded by margin * spread.
    double margin = 0.0;
    std::uint64_t seed = 0;
    std::string layer_tag = "synthetic";
    std::string class_prefix = "class";
    /// Overrides the default layout when non-empty.
    std::vector<Eigen::VectorXd> means;

    void validate(SynthPreset preset) const;
};

/// Component means: explicit `means`, or a regular polygon in the first two
/// coordinates with side separation * spread (a line when dimension is 1).
std::vector<Eigen::VectorXd> component_means(const SynthParams& params);

std::string class_key_for_component(const SynthParams& params, std::size_t component);

/// Deterministic for a fixed seed. Values are rounded to 32-bit precision so
/// the set survives a BAMF round trip unchanged.
FeatureSet synth_generate(SynthPreset preset, const SynthParams& params);

} // namespace bam

#endif // BAM_SYNTH_HPP
