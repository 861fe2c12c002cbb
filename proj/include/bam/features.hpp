#ifndef BAM_FEATURES_HPP
#define BAM_FEATURES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bam {

enum class Label : std::uint8_t { Id = 0, Ood = 1, Unlabeled = 2 };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

/// One extracted feature vector. Values are held in double precision even
/// when they were read from a 32-bit payload.
struct FeatureRecord {
    std::string class_key;
    Label label = Label::Unlabeled;
    double score = 1.0;
    Eigen::VectorXd values;

    friend bool operator==(const FeatureRecord& a, const FeatureRecord& b) {
        return a.class_key == b.class_key && a.label == b.label && a.score == b.score &&
               a.values.size() == b.values.size() && a.values == b.values;
    }
};

/// A dimension-consistent, ordered collection of feature records from one layer.
class FeatureSet {
public:
    FeatureSet(Eigen::Index dimension, std::string layer_tag);

    Eigen::Index dimension() const { return m_dimension; }
    const std::string& layer_tag() const { return m_layer_tag; }
    const std::vector<FeatureRecord>& records() const { return m_records; }
    std::size_t size() const { return m_records.size(); }
    bool empty() const { return m_records.empty(); }

    /// Validates dimension and score range before appending.
    void add(FeatureRecord record);

    /// Record indices grouped by class key (keys in lexicographic order,
    /// indices ascending).
    std::map<std::string, std::vector<std::size_t>> indices_by_class() const;

    /// Packs the selected records' values as columns of a dense matrix.
    Eigen::MatrixXd matrix(const std::vector<std::size_t>& indices) const;
    Eigen::MatrixXd matrix() const;

    friend bool operator==(const FeatureSet& a, const FeatureSet& b) {
        return a.m_dimension == b.m_dimension && a.m_layer_tag == b.m_layer_tag &&
               a.m_records == b.m_records;
    }

private:
    Eigen::Index m_dimension;
    std::string m_layer_tag;
    std::vector<FeatureRecord> m_records;
};

} // namespace bam

#endif // BAM_FEATURES_HPP
