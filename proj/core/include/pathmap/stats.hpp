#pragma once

#include "pathmap/ingest.hpp"
#include "pathmap/kegg.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pathmap::stats {

/// 2x2 table for over-representation:
///   a = selected & annotated, b = selected only,
///   c = annotated only,       d = neither.
struct ContingencyTable {
    long a = 0;
    long b = 0;
    long c = 0;
    long d = 0;
    long total() const { return a + b + c + d; }
};

struct EnrichmentResult {
    std::string term_id;
    std::string term_name;
    ContingencyTable table;
    double p_value = 1.0;
    double p_adjusted = 1.0;
    std::vector<std::string> hit_genes; // sorted, size == table.a
};

/// Exact hypergeometric point mass P(X = k) for a draw of n from a
/// population of N with K successes. Log-gamma based.
double hypergeometric_pmf(long k, long N, long K, long n);

/// One-sided Fisher p-value, alternative "greater": P(X >= a).
double fisher_exact_greater(const ContingencyTable& table);

/// Benjamini-Hochberg step-up; output order matches input order.
std::vector<double> bh_adjust(const std::vector<double>& p_values);

/// One Fisher test per pathway containing at least one universe gene.
/// A gene is "in" a pathway when any of its KOs appears in any
/// ortholog/gene entry. BH across all tested pathways; results sorted by
/// (p_adjusted, term_id).
std::vector<EnrichmentResult> pathway_overrepresentation(
    const std::set<std::string>& selected,
    const std::vector<kegg::Pathway>& pathways,
    const ingest::KoMapping& mapping,
    const std::set<std::string>& universe);

struct GoEnrichment {
    // namespace label -> results sorted by (p_adjusted, term_id)
    std::map<std::string, std::vector<EnrichmentResult>> full;
    std::map<std::string, std::vector<EnrichmentResult>> filtered; // p_adjusted < alpha
};

/// Per-namespace flat hypergeometric term tests, BH within namespace.
GoEnrichment go_enrichment(const std::set<std::string>& selected,
                           const ingest::GoAnnotation& annotation,
                           const std::set<std::string>& universe,
                           double alpha);

/// Genes of the universe mapped into the pathway (via KO mapping).
std::set<std::string> pathway_gene_set(const kegg::Pathway& pathway,
                                       const ingest::KoMapping& mapping,
                                       const std::set<std::string>& universe);

} // namespace pathmap::stats
