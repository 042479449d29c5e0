#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sdtk {

/// One embedded segment: its time span and a fixed-length vector.
struct Segment {
    double onset = 0.0;
    double offset = 0.0;
    std::vector<double> vector;
};

/// Per-recording segment embeddings, sorted by onset.
struct EmbeddingSet {
    std::string recording_id;
    std::size_t dim = 0;
    std::vector<Segment> segments;

    std::size_t size() const { return segments.size(); }
    /// n x dim matrix, one row per segment.
    Eigen::MatrixXd matrix() const;
    /// Throws ValidationError on any broken invariant.
    void validate() const;
};

using EmbeddingMap = std::map<std::string, EmbeddingSet>;

/// Parses "recording_id,onset,offset,e0,...,e{d-1}" CSV.
EmbeddingMap parse_embeddings(std::string_view text);
EmbeddingMap read_embeddings_file(const std::string& path);
/// Writes the same CSV schema with shortest round-trip number formatting.
std::string serialize_embeddings(const EmbeddingMap& sets);

/// Scales every vector to unit Euclidean norm. Throws ValidationError on a zero vector.
EmbeddingSet unit_normalize(const EmbeddingSet& set);

}  // namespace sdtk
