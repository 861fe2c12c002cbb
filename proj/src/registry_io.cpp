#include "bam/registry_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bam/errors.hpp"

namespace bam {

using json = nlohmann::ordered_json;

namespace {

json meta_to_json(const BuildMeta& meta) {
    return json{{"density", meta.density},
                {"cap", meta.cap},
                {"target_tpr", meta.target_tpr},
                {"seed", meta.seed},
                {"score_threshold", meta.score_threshold},
                {"max_iterations", meta.max_iterations},
                {"shift_tolerance", meta.shift_tolerance},
                {"feature_space", meta.feature_space},
                {"source_digest", meta.source_digest}};
}

BuildMeta meta_from_json(const json& j) {
    BuildMeta meta;
    meta.density = j.at("density").get<double>();
    meta.cap = j.at("cap").get<std::size_t>();
    meta.target_tpr = j.at("target_tpr").get<double>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.score_threshold = j.at("score_threshold").get<double>();
    meta.max_iterations = j.at("max_iterations").get<int>();
    meta.shift_tolerance = j.at("shift_tolerance").get<double>();
    meta.feature_space = j.at("feature_space").get<std::string>();
    meta.source_digest = j.at("source_digest").get<std::string>();
    return meta;
}

json column_to_json(const Eigen::MatrixXd& m, Eigen::Index col) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(m(i, col));
    return out;
}

void read_bounds(const json& list, Eigen::MatrixXd& dst, Eigen::Index col, const std::string& key) {
    if (!list.is_array() || static_cast<Eigen::Index>(list.size()) != dst.rows()) {
        throw FormatError("class '" + key + "': bound list length does not match dimension");
    }
    for (Eigen::Index i = 0; i < dst.rows(); ++i) {
        const json& v = list[static_cast<std::size_t>(i)];
        if (!v.is_number()) throw FormatError("class '" + key + "': non-numeric bound");
        dst(i, col) = v.get<double>();
    }
}

} // namespace

void write_registry(const MonitorRegistry& registry, std::ostream& out) {
    // One box per line keeps large monitors diff- and grep-friendly.
    out << "{\n";
    out << "  \"format\": " << json(kMonitorFormat).dump() << ",\n";
    out << "  \"schema_version\": " << kMonitorSchemaVersion << ",\n";
    out << "  \"layer_tag\": " << json(registry.layer_tag()).dump() << ",\n";
    out << "  \"dimension\": " << registry.dimension() << ",\n";
    out << "  \"build_meta\": " << meta_to_json(registry.meta()).dump() << ",\n";
    out << "  \"classes\": [";
    bool first_class = true;
    for (const auto& [key, monitor] : registry.monitors()) {
        out << (first_class ? "\n" : ",\n");
        first_class = false;
        out << "    {\"class_key\": " << json(key).dump() << ", \"boxes\": [\n";
        for (Eigen::Index j = 0; j < monitor.lower().cols(); ++j) {
            json box{{"lower", column_to_json(monitor.lower(), j)},
                     {"upper", column_to_json(monitor.upper(), j)}};
            out << "      " << box.dump() << (j + 1 < monitor.lower().cols() ? ",\n" : "\n");
        }
        out << "    ]}";
    }
    out << "\n  ]\n}\n";
    if (!out) throw FormatError("failed writing monitor file");
}

std::string registry_to_string(const MonitorRegistry& registry) {
    std::ostringstream out;
    write_registry(registry, out);
    return out.str();
}

MonitorRegistry read_registry(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(std::string("monitor file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("format") ||
            doc.at("format") != kMonitorFormat) {
            throw SchemaError("not a monitor file (missing or wrong \"format\" tag)");
        }
        const int version = doc.at("schema_version").get<int>();
        if (version != kMonitorSchemaVersion) {
            throw SchemaError("unsupported monitor schema_version " + std::to_string(version));
        }
        const auto layer_tag = doc.at("layer_tag").get<std::string>();
        const auto dimension = doc.at("dimension").get<Eigen::Index>();
        if (dimension < 1) throw InvariantViolation("monitor dimension must be positive");
        BuildMeta meta = meta_from_json(doc.at("build_meta"));

        std::vector<ClassMonitor> monitors;
        for (const json& entry : doc.at("classes")) {
            const auto key = entry.at("class_key").get<std::string>();
            const json& boxes = entry.at("boxes");
            if (!boxes.is_array() || boxes.empty()) {
                throw InvariantViolation("class '" + key + "' has no boxes");
            }
            const auto k = static_cast<Eigen::Index>(boxes.size());
            Eigen::MatrixXd lower(dimension, k);
            Eigen::MatrixXd upper(dimension, k);
            for (Eigen::Index j = 0; j < k; ++j) {
                const json& box = boxes[static_cast<std::size_t>(j)];
                read_bounds(box.at("lower"), lower, j, key);
                read_bounds(box.at("upper"), upper, j, key);
            }
            monitors.emplace_back(key, std::move(lower), std::move(upper));
        }
        return {layer_tag, dimension, std::move(meta), std::move(monitors)};
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed monitor file: ") + e.what());
    }
}

void save_registry(const MonitorRegistry& registry, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    write_registry(registry, out);
    out.flush();
    if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

MonitorRegistry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    return read_registry(in);
}

} // namespace bam
