#include "sdtk/embeddings.hpp"

#include "sdtk/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>

namespace sdtk {

namespace {

bool is_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

Eigen::MatrixXd EmbeddingSet::matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(segments.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < segments.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = segments[i].vector[j];
    return m;
}

void EmbeddingSet::validate() const {
    if (dim < 1) throw ValidationError(recording_id + ": embedding dimension must be at least 1");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (s.vector.size() != dim)
            throw ValidationError(recording_id + ": segment " + std::to_string(i) + " has wrong dimension");
        if (!(s.offset > s.onset))
            throw ValidationError(recording_id + ": segment " + std::to_string(i) + " has offset <= onset");
        if (is_zero(s.vector))
            throw ValidationError(recording_id + ": segment " + std::to_string(i) + " is the zero vector");
        if (i > 0 && segments[i - 1].onset > s.onset)
            throw ValidationError(recording_id + ": segments not sorted by onset");
    }
}

EmbeddingMap parse_embeddings(std::string_view text) {
    auto lines = detail::split_lines(text);
    std::size_t line_no = 0;
    std::size_t columns = 0;
    EmbeddingMap out;
    for (std::string_view raw : lines) {
        ++line_no;
        std::string_view line = detail::trim(raw);
        if (line.empty()) continue;
        auto fields = detail::split_char(line, ',');
        if (columns == 0) {
            if (fields.size() < 4 || detail::trim(fields[0]) != "recording_id" ||
                detail::trim(fields[1]) != "onset" || detail::trim(fields[2]) != "offset")
                throw ParseError(line_no, "expected header 'recording_id,onset,offset,e0,...'");
            for (std::size_t j = 3; j < fields.size(); ++j)
                if (detail::trim(fields[j]) != "e" + std::to_string(j - 3))
                    throw ParseError(line_no, "unexpected header column '" + std::string(fields[j]) + "'");
            columns = fields.size();
            continue;
        }
        if (fields.size() != columns)
            throw ParseError(line_no, "expected " + std::to_string(columns) + " columns, found " +
                                          std::to_string(fields.size()));
        Segment seg;
        std::string id(detail::trim(fields[0]));
        if (id.empty()) throw ParseError(line_no, "empty recording id");
        auto onset = detail::parse_double(detail::trim(fields[1]));
        auto offset = detail::parse_double(detail::trim(fields[2]));
        if (!onset || !offset) throw ParseError(line_no, "non-numeric segment timing");
        seg.onset = *onset;
        seg.offset = *offset;
        seg.vector.reserve(columns - 3);
        for (std::size_t j = 3; j < columns; ++j) {
            auto v = detail::parse_double(detail::trim(fields[j]));
            if (!v) throw ParseError(line_no, "non-numeric embedding value '" + std::string(fields[j]) + "'");
            seg.vector.push_back(*v);
        }
        if (!(seg.offset > seg.onset)) throw ValidationError("line " + std::to_string(line_no) + ": offset <= onset");
        if (is_zero(seg.vector)) throw ValidationError("line " + std::to_string(line_no) + ": zero embedding vector");
        auto& set = out[id];
        set.recording_id = id;
        set.dim = columns - 3;
        set.segments.push_back(std::move(seg));
    }
    for (auto& [id, set] : out) {
        std::stable_sort(set.segments.begin(), set.segments.end(),
                         [](const Segment& a, const Segment& b) { return a.onset < b.onset; });
    }
    return out;
}

EmbeddingMap read_embeddings_file(const std::string& path) {
    try {
        return parse_embeddings(detail::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.what());
    }
}

std::string serialize_embeddings(const EmbeddingMap& sets) {
    std::size_t dim = 0;
    for (const auto& [id, set] : sets) {
        if (dim != 0 && set.dim != dim) throw ValidationError("recordings have different embedding dimensions");
        dim = set.dim;
    }
    std::string out = "recording_id,onset,offset";
    for (std::size_t j = 0; j < dim; ++j) out += ",e" + std::to_string(j);
    out += '\n';
    for (const auto& [id, set] : sets) {
        for (const auto& seg : set.segments) {
            out += id;
            out += ',' + detail::format_double(seg.onset);
            out += ',' + detail::format_double(seg.offset);
            for (double v : seg.vector) out += ',' + detail::format_double(v);
            out += '\n';
        }
    }
    return out;
}

EmbeddingSet unit_normalize(const EmbeddingSet& set) {
    EmbeddingSet out = set;
    for (std::size_t i = 0; i < out.segments.size(); ++i) {
        auto& v = out.segments[i].vector;
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0)
            throw ValidationError(set.recording_id + ": segment " + std::to_string(i) + " is the zero vector");
        for (double& x : v) x /= norm;
    }
    return out;
}

}  // namespace sdtk
