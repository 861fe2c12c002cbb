#ifndef BAM_FEATURE_IO_HPP
#define BAM_FEATURE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "bam/features.hpp"

namespace bam {

/// Binary feature dump ("BAMF"), all integers and floats little-endian:
///
///   magic "BAMF" | u16 version | u32 dimension | u64 record_count |
///   u32 tag length | layer tag bytes
///   then per record:
///   u32 key length | class key bytes | u8 label | f32 score | dimension x f32
///
/// Values are narrowed to 32-bit floats on write.
inline constexpr char kBamfMagic[4] = {'B', 'A', 'M', 'F'};
inline constexpr std::uint16_t kBamfVersion = 1;

struct FeatureDumpHeader {
    std::uint16_t format_version = kBamfVersion;
    std::uint32_t dimension = 0;
    std::uint64_t record_count = 0;
    std::string layer_tag;
};

void write_bamf(const FeatureSet& features, std::ostream& out);
FeatureSet read_bamf(std::istream& in);
FeatureDumpHeader read_bamf_header(std::istream& in);

/// CSV with header `class_key,label,score,f0,...,f{n-1}`, preceded by an
/// optional `# layer_tag=<tag>` line.
void write_csv(const FeatureSet& features, std::ostream& out);
FeatureSet read_csv(std::istream& in, const std::string& default_layer_tag = "csv");

void save_features(const FeatureSet& features, const std::filesystem::path& path);
/// Detects BAMF by its magic bytes and falls back to CSV.
FeatureSet load_features(const std::filesystem::path& path);

/// "sha256:<hex>" over the canonical BAMF encoding, so equal feature sets
/// digest equally whatever file format they came from.
std::string feature_digest(const FeatureSet& features);

std::string sha256_hex(const std::string& bytes);

} // namespace bam

#endif // BAM_FEATURE_IO_HPP
