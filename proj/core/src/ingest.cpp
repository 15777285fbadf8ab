#include "pathmap/ingest.hpp"

#include "pathmap/error.hpp"
#include "pathmap/tsv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_set>

namespace pathmap::ingest {

namespace {

double parse_number(const std::string& token, std::size_t line_no, std::size_t col) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw Error(errc::non_numeric_value, "'" + token + "' is not a number", line_no, col);
    }
    if (!std::isfinite(value)) {
        throw Error(errc::non_numeric_value, "'" + token + "' is not finite", line_no, col);
    }
    if (value < 0.0) {
        throw Error(errc::negative_value, "'" + token + "' is negative", line_no, col);
    }
    return value;
}

bool is_ko_id(const std::string& token) {
    if (token.size() != 6 || token[0] != 'K') return false;
    for (std::size_t i = 1; i < 6; ++i) {
        if (token[i] < '0' || token[i] > '9') return false;
    }
    return true;
}

} // namespace

ExpressionMatrix parse_expression_table(std::istream& in) {
    ExpressionMatrix m;
    bool have_header = false;
    bool have_data = false;
    std::unordered_set<std::string> seen_genes;

    tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& fields) {
        if (!have_header) {
            if (fields.size() < 2) {
                throw Error(errc::ragged_row, "header needs gene_id plus at least one condition",
                            line_no);
            }
            std::unordered_set<std::string> seen_conds;
            for (std::size_t i = 1; i < fields.size(); ++i) {
                if (!seen_conds.insert(fields[i]).second) {
                    throw Error(errc::ragged_row,
                                "duplicate condition label '" + fields[i] + "'", line_no,
                                i + 1);
                }
                m.condition_labels.push_back(fields[i]);
            }
            have_header = true;
            return;
        }
        if (fields.size() != m.condition_labels.size() + 1) {
            throw Error(errc::ragged_row, "expected " +
                        std::to_string(m.condition_labels.size() + 1) + " fields, got " +
                        std::to_string(fields.size()), line_no);
        }
        if (!seen_genes.insert(fields[0]).second) {
            throw Error(errc::duplicate_gene, "gene '" + fields[0] + "' repeated", line_no);
        }
        m.gene_ids.push_back(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            m.values.push_back(parse_number(fields[i], line_no, i + 1));
        }
        have_data = true;
    });

    if (!have_header || !have_data) {
        throw Error(errc::empty_file, "expression table has no data rows");
    }
    return m;
}

KoMapping parse_ko_mapping(std::istream& in) {
    KoMapping mapping;
    tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& fields) {
        if (fields.size() != 2) {
            throw Error(errc::ragged_row, "expected 2 fields, got " +
                        std::to_string(fields.size()), line_no);
        }
        if (!is_ko_id(fields[1])) {
            throw Error(errc::malformed_ko_id,
                        "'" + fields[1] + "' is not of the form K#####", line_no, 2);
        }
        mapping.entries[fields[0]].insert(fields[1]);
    });
    return mapping;
}

std::vector<CandidateSet> parse_candidate_lists(std::istream& in) {
    std::vector<CandidateSet> sets;
    std::map<std::string, std::size_t> index; // label -> position, first-appearance order
    tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& fields) {
        if (fields.size() != 2) {
            throw Error(errc::ragged_row, "expected 2 fields, got " +
                        std::to_string(fields.size()), line_no);
        }
        if (fields[0].empty()) {
            throw Error(errc::ragged_row, "empty candidate label", line_no, 1);
        }
        auto [it, inserted] = index.try_emplace(fields[0], sets.size());
        if (inserted) sets.push_back({fields[0], {}});
        sets[it->second].genes.insert(fields[1]);
    });
    return sets;
}

GoAnnotation parse_go_annotation(std::istream& in) {
    GoAnnotation ann;
    tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& fields) {
        if (fields.size() != 3 && fields.size() != 4) {
            throw Error(errc::ragged_row, "expected 3 or 4 fields, got " +
                        std::to_string(fields.size()), line_no);
        }
        const std::string& gene = fields[0];
        const std::string& term = fields[1];
        const std::string& ns = fields[2];
        std::string name = fields.size() == 4 ? fields[3] : term;

        auto it = ann.term_meta.find(term);
        if (it == ann.term_meta.end()) {
            ann.term_meta.emplace(term, GoAnnotation::TermMeta{name, ns});
        } else if (it->second.ns != ns) {
            throw Error(errc::conflicting_namespace,
                        "term '" + term + "' assigned to both '" + it->second.ns +
                        "' and '" + ns + "'", line_no);
        }
        ann.gene_terms[gene].insert(term);
    });
    return ann;
}

void write_expression_table(const ExpressionMatrix& m, std::ostream& out) {
    out << "gene_id";
    for (const auto& c : m.condition_labels) out << '\t' << c;
    out << '\n';
    char buf[64];
    for (std::size_t g = 0; g < m.n_genes(); ++g) {
        out << m.gene_ids[g];
        for (std::size_t c = 0; c < m.n_conditions(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.at(g, c));
            out << '\t' << buf;
        }
        out << '\n';
    }
}

std::vector<std::string> cross_check(const ExpressionMatrix& matrix,
                                     const KoMapping& mapping,
                                     const std::vector<CandidateSet>& candidates) {
    std::vector<std::string> warnings;
    auto universe = matrix.gene_set();
    std::set<std::string> conditions(matrix.condition_labels.begin(),
                                     matrix.condition_labels.end());
    for (const auto& [gene, kos] : mapping.entries) {
        if (!universe.count(gene)) {
            warnings.push_back("KO mapping gene '" + gene + "' absent from matrix");
        }
    }
    for (const auto& set : candidates) {
        if (!conditions.count(set.label)) {
            warnings.push_back("candidate label '" + set.label +
                               "' does not match any matrix condition");
        }
        for (const auto& gene : set.genes) {
            if (!universe.count(gene)) {
                warnings.push_back("candidate gene '" + gene + "' (" + set.label +
                                   ") absent from matrix");
            }
        }
    }
    return warnings;
}

} // namespace pathmap::ingest
