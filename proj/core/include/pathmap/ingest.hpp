#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace pathmap::ingest {

/// Genes x ordered conditions; dense, row-major, finite non-negative values.
struct ExpressionMatrix {
    std::vector<std::string> gene_ids;
    std::vector<std::string> condition_labels;
    std::vector<double> values; // row-major, gene_ids.size() * condition_labels.size()

    std::size_t n_genes() const { return gene_ids.size(); }
    std::size_t n_conditions() const { return condition_labels.size(); }
    double at(std::size_t gene, std::size_t cond) const {
        return values[gene * condition_labels.size() + cond];
    }
    std::set<std::string> gene_set() const {
        return {gene_ids.begin(), gene_ids.end()};
    }
};

struct KoMapping {
    std::map<std::string, std::set<std::string>> entries; // gene_id -> KO ids
};

struct CandidateSet {
    std::string label;
    std::set<std::string> genes;
};

struct GoAnnotation {
    struct TermMeta {
        std::string name;
        std::string ns;
    };
    std::map<std::string, std::set<std::string>> gene_terms; // gene_id -> term ids
    std::map<std::string, TermMeta> term_meta;
};

ExpressionMatrix parse_expression_table(std::istream& in);
KoMapping parse_ko_mapping(std::istream& in);
std::vector<CandidateSet> parse_candidate_lists(std::istream& in);
GoAnnotation parse_go_annotation(std::istream& in);

/// Writes the matrix back as TSV (header + one row per gene). Round-trips
/// through parse_expression_table.
void write_expression_table(const ExpressionMatrix& m, std::ostream& out);

/// Cross-checks auxiliary inputs against the matrix; returns warning
/// messages for genes/labels the matrix does not know. Never throws: the
/// matrix defines the universe, everything else merely narrows or extends
/// display.
std::vector<std::string> cross_check(const ExpressionMatrix& matrix,
                                     const KoMapping& mapping,
                                     const std::vector<CandidateSet>& candidates);

} // namespace pathmap::ingest
