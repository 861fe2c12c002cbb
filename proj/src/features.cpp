#include "bam/features.hpp"

#include "bam/errors.hpp"

namespace bam {

std::string_view to_string(Label label) {
    switch (label) {
    case Label::Id: return "ID";
    case Label::Ood: return "OOD";
    case Label::Unlabeled: return "UNLABELED";
    }
    return "UNLABELED";
}

Label parse_label(std::string_view text) {
    if (text == "ID" || text == "id" || text == "0") return Label::Id;
    if (text == "OOD" || text == "ood" || text == "1") return Label::Ood;
    if (text == "UNLABELED" || text == "unlabeled" || text == "2") return Label::Unlabeled;
    throw FormatError("unknown label '" + std::string(text) + "'");
}

FeatureSet::FeatureSet(Eigen::Index dimension, std::string layer_tag)
    : m_dimension(dimension), m_layer_tag(std::move(layer_tag)) {
    if (m_dimension < 1) {
        throw InvariantViolation("feature set dimension must be positive");
    }
    if (m_layer_tag.empty()) {
        throw InvariantViolation("feature set layer tag must be non-empty");
    }
}

void FeatureSet::add(FeatureRecord record) {
    detail::check_dimension("feature record", m_dimension, record.values.size());
    if (!(record.score >= 0.0 && record.score <= 1.0)) {
        throw InvariantViolation("feature record score outside [0, 1]");
    }
    if (!record.values.allFinite()) {
        throw InvariantViolation("feature record contains a non-finite value");
    }
    m_records.push_back(std::move(record));
}

std::map<std::string, std::vector<std::size_t>> FeatureSet::indices_by_class() const {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < m_records.size(); ++i) {
        groups[m_records[i].class_key].push_back(i);
    }
    return groups;
}

Eigen::MatrixXd FeatureSet::matrix(const std::vector<std::size_t>& indices) const {
    Eigen::MatrixXd out(m_dimension, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = m_records.at(indices[j]).values;
    }
    return out;
}

Eigen::MatrixXd FeatureSet::matrix() const {
    Eigen::MatrixXd out(m_dimension, static_cast<Eigen::Index>(m_records.size()));
    for (std::size_t j = 0; j < m_records.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = m_records[j].values;
    }
    return out;
}

} // namespace bam
