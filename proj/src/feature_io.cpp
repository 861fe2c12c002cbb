#include "bam/feature_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include <openssl/sha.h>

#include "bam/errors.hpp"

namespace bam {

namespace {

template <typename UInt>
void put_le(std::ostream& out, UInt value) {
    std::array<char, sizeof(UInt)> bytes{};
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
    }
    out.write(bytes.data(), bytes.size());
}

void put_f32(std::ostream& out, double value) {
    put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(value)));
}

void put_string(std::ostream& out, const std::string& text) {
    put_le(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void read_exact(std::istream& in, char* dst, std::size_t n, const char* what) {
    in.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw FormatError(std::string("BAMF truncated while reading ") + what);
    }
}

template <typename UInt>
UInt get_le(std::istream& in, const char* what) {
    std::array<unsigned char, sizeof(UInt)> bytes{};
    read_exact(in, reinterpret_cast<char*>(bytes.data()), bytes.size(), what);
    UInt value = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        value |= static_cast<UInt>(bytes[i]) << (8 * i);
    }
    return value;
}

double get_f32(std::istream& in, const char* what) {
    return static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(in, what)));
}

std::string get_string(std::istream& in, const char* what) {
    const auto length = get_le<std::uint32_t>(in, what);
    std::string text;
    // Grow in chunks so a corrupt length cannot trigger a huge allocation.
    constexpr std::size_t kChunk = 1 << 16;
    while (text.size() < length) {
        const std::size_t step = std::min<std::size_t>(kChunk, length - text.size());
        const std::size_t old = text.size();
        text.resize(old + step);
        read_exact(in, text.data() + old, step, what);
    }
    return text;
}

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && *first == ' ') ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\r')) --last;
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) {
        throw FormatError("CSV line " + std::to_string(line) + ": bad number '" +
                          std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

} // namespace

void write_bamf(const FeatureSet& features, std::ostream& out) {
    out.write(kBamfMagic, sizeof(kBamfMagic));
    put_le(out, kBamfVersion);
    put_le(out, static_cast<std::uint32_t>(features.dimension()));
    put_le(out, static_cast<std::uint64_t>(features.size()));
    put_string(out, features.layer_tag());
    for (const auto& record : features.records()) {
        put_string(out, record.class_key);
        out.put(static_cast<char>(record.label));
        put_f32(out, record.score);
        for (Eigen::Index i = 0; i < record.values.size(); ++i) put_f32(out, record.values(i));
    }
    if (!out) throw FormatError("failed writing BAMF stream");
}

FeatureDumpHeader read_bamf_header(std::istream& in) {
    std::array<char, 4> magic{};
    read_exact(in, magic.data(), magic.size(), "magic");
    if (std::memcmp(magic.data(), kBamfMagic, magic.size()) != 0) {
        throw SchemaError("not a BAMF stream (bad magic)");
    }
    FeatureDumpHeader header;
    header.format_version = get_le<std::uint16_t>(in, "version");
    if (header.format_version != kBamfVersion) {
        throw SchemaError("unsupported BAMF version " + std::to_string(header.format_version));
    }
    header.dimension = get_le<std::uint32_t>(in, "dimension");
    if (header.dimension < 1) throw FormatError("BAMF dimension must be at least 1");
    header.record_count = get_le<std::uint64_t>(in, "record count");
    header.layer_tag = get_string(in, "layer tag");
    if (header.layer_tag.empty()) throw FormatError("BAMF layer tag is empty");
    return header;
}

FeatureSet read_bamf(std::istream& in) {
    const FeatureDumpHeader header = read_bamf_header(in);
    FeatureSet features(header.dimension, header.layer_tag);
    for (std::uint64_t r = 0; r < header.record_count; ++r) {
        FeatureRecord record;
        record.class_key = get_string(in, "class key");
        const auto label = get_le<std::uint8_t>(in, "label");
        if (label > 2) throw FormatError("BAMF record has invalid label byte");
        record.label = static_cast<Label>(label);
        record.score = get_f32(in, "score");
        record.values.resize(header.dimension);
        for (std::uint32_t i = 0; i < header.dimension; ++i) {
            record.values(i) = get_f32(in, "feature values");
        }
        try {
            features.add(std::move(record));
        } catch (const InvariantViolation& e) {
            throw FormatError("BAMF record " + std::to_string(r) + ": " + e.what());
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("BAMF has trailing bytes after the declared record count");
    }
    return features;
}

void write_csv(const FeatureSet& features, std::ostream& out) {
    out << "# layer_tag=" << features.layer_tag() << '\n';
    out << "class_key,label,score";
    for (Eigen::Index i = 0; i < features.dimension(); ++i) out << ",f" << i;
    out << '\n';
    for (const auto& record : features.records()) {
        out << record.class_key << ',' << to_string(record.label) << ','
            << format_double(record.score);
        for (Eigen::Index i = 0; i < record.values.size(); ++i) {
            out << ',' << format_double(record.values(i));
        }
        out << '\n';
    }
}

FeatureSet read_csv(std::istream& in, const std::string& default_layer_tag) {
    std::string layer_tag = default_layer_tag;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    Eigen::Index dimension = 0;
    std::optional<FeatureSet> features;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            constexpr std::string_view kTag = "# layer_tag=";
            if (!have_header && line.starts_with(kTag)) layer_tag = line.substr(kTag.size());
            continue;
        }
        const auto fields = split_commas(line);
        if (!have_header) {
            if (fields.size() < 4 || fields[0] != "class_key" || fields[1] != "label" ||
                fields[2] != "score") {
                throw FormatError("CSV header must be class_key,label,score,f0,...");
            }
            for (std::size_t i = 3; i < fields.size(); ++i) {
                if (fields[i] != "f" + std::to_string(i - 3)) {
                    throw FormatError("CSV header column " + std::to_string(i) +
                                      " must be f" + std::to_string(i - 3));
                }
            }
            dimension = static_cast<Eigen::Index>(fields.size() - 3);
            features.emplace(dimension, layer_tag);
            have_header = true;
            continue;
        }
        if (static_cast<Eigen::Index>(fields.size()) != dimension + 3) {
            throw FormatError("CSV line " + std::to_string(line_no) + ": expected " +
                              std::to_string(dimension + 3) + " fields, got " +
                              std::to_string(fields.size()));
        }
        FeatureRecord record;
        record.class_key = std::string(fields[0]);
        record.label = parse_label(fields[1]);
        record.score = parse_double(fields[2], line_no);
        record.values.resize(dimension);
        for (Eigen::Index i = 0; i < dimension; ++i) {
            record.values(i) = parse_double(fields[static_cast<std::size_t>(i) + 3], line_no);
        }
        try {
            features->add(std::move(record));
        } catch (const InvariantViolation& e) {
            throw FormatError("CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) throw FormatError("CSV input has no header line");
    return std::move(*features);
}

void save_features(const FeatureSet& features, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    if (path.extension() == ".csv") {
        write_csv(features, out);
    } else {
        write_bamf(features, out);
    }
    out.flush();
    if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

FeatureSet load_features(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    const bool is_bamf = in.gcount() == 4 &&
                         std::memcmp(magic.data(), kBamfMagic, magic.size()) == 0;
    in.clear();
    in.seekg(0);
    return is_bamf ? read_bamf(in) : read_csv(in);
}

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest.data());
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * digest.size());
    for (unsigned char b : digest) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xF]);
    }
    return out;
}

std::string feature_digest(const FeatureSet& features) {
    std::ostringstream canonical(std::ios::binary);
    write_bamf(features, canonical);
    return "sha256:" + sha256_hex(canonical.str());
}

} // namespace bam
