#include "pathmap/stats.hpp"

#include "pathmap/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pathmap::stats {

namespace {

// log C(n, k); lgamma is exact enough for genome-scale counts
double log_choose(long n, long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

void check_table(const ContingencyTable& t) {
    if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0) {
        throw Error(errc::domain_error, "negative contingency count");
    }
}

ContingencyTable make_table(const std::set<std::string>& selected,
                            const std::set<std::string>& annotated,
                            const std::set<std::string>& universe,
                            std::vector<std::string>& hits) {
    ContingencyTable t;
    for (const auto& gene : universe) {
        bool sel = selected.count(gene) > 0;
        bool ann = annotated.count(gene) > 0;
        if (sel && ann) {
            ++t.a;
            hits.push_back(gene);
        } else if (sel) {
            ++t.b;
        } else if (ann) {
            ++t.c;
        } else {
            ++t.d;
        }
    }
    return t;
}

void sort_results(std::vector<EnrichmentResult>& results) {
    std::sort(results.begin(), results.end(),
              [](const EnrichmentResult& x, const EnrichmentResult& y) {
                  if (x.p_adjusted != y.p_adjusted) return x.p_adjusted < y.p_adjusted;
                  return x.term_id < y.term_id;
              });
}

void apply_bh(std::vector<EnrichmentResult>& results) {
    std::vector<double> raw;
    raw.reserve(results.size());
    for (const auto& r : results) raw.push_back(r.p_value);
    auto adjusted = bh_adjust(raw);
    for (std::size_t i = 0; i < results.size(); ++i) results[i].p_adjusted = adjusted[i];
    sort_results(results);
}

} // namespace

double hypergeometric_pmf(long k, long N, long K, long n) {
    if (N < 0 || K < 0 || K > N || n < 0 || n > N) {
        throw Error(errc::domain_error, "invalid hypergeometric parameters");
    }
    long lo = std::max(0L, n + K - N);
    long hi = std::min(n, K);
    if (k < lo || k > hi) {
        throw Error(errc::domain_error, "k outside hypergeometric support");
    }
    double log_p = log_choose(K, k) + log_choose(N - K, n - k) - log_choose(N, n);
    return std::exp(log_p);
}

double fisher_exact_greater(const ContingencyTable& t) {
    check_table(t);
    long N = t.total();
    long K = t.a + t.c; // annotated
    long n = t.a + t.b; // selected
    long hi = std::min(n, K);
    // sum from the thin end of the tail first
    double p = 0.0;
    for (long k = hi; k >= t.a; --k) {
        p += hypergeometric_pmf(k, N, K, n);
    }
    return std::min(p, 1.0);
}

std::vector<double> bh_adjust(const std::vector<double>& p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(errc::domain_error, "p-value outside [0,1]");
        }
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return p_values[x] < p_values[y]; });

    std::vector<double> adjusted(m);
    double running_min = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        // multiply by the ratio (>= 1 exactly) so rounding can never push
        // the scaled value below the raw p
        double scaled = p_values[order[i]] * (double(m) / double(i + 1));
        running_min = std::min(running_min, scaled);
        adjusted[order[i]] = running_min;
    }
    return adjusted;
}

std::set<std::string> pathway_gene_set(const kegg::Pathway& pathway,
                                       const ingest::KoMapping& mapping,
                                       const std::set<std::string>& universe) {
    std::set<std::string> pathway_kos;
    for (const auto& entry : pathway.entries) {
        if (entry.kind == kegg::EntryKind::ortholog || entry.kind == kegg::EntryKind::gene) {
            pathway_kos.insert(entry.ko_ids.begin(), entry.ko_ids.end());
        }
    }
    std::set<std::string> genes;
    for (const auto& gene : universe) {
        auto it = mapping.entries.find(gene);
        if (it == mapping.entries.end()) continue;
        for (const auto& ko : it->second) {
            if (pathway_kos.count(ko)) {
                genes.insert(gene);
                break;
            }
        }
    }
    return genes;
}

std::vector<EnrichmentResult> pathway_overrepresentation(
    const std::set<std::string>& selected,
    const std::vector<kegg::Pathway>& pathways,
    const ingest::KoMapping& mapping,
    const std::set<std::string>& universe) {
    if (universe.empty()) {
        throw Error(errc::empty_universe, "pathway over-representation needs a universe");
    }
    std::vector<EnrichmentResult> results;
    for (const auto& pathway : pathways) {
        auto annotated = pathway_gene_set(pathway, mapping, universe);
        if (annotated.empty()) continue; // not testable, excluded from the BH family
        EnrichmentResult r;
        r.term_id = pathway.id.str();
        r.term_name = pathway.title;
        r.table = make_table(selected, annotated, universe, r.hit_genes);
        r.p_value = fisher_exact_greater(r.table);
        results.push_back(std::move(r));
    }
    apply_bh(results);
    return results;
}

GoEnrichment go_enrichment(const std::set<std::string>& selected,
                           const ingest::GoAnnotation& annotation,
                           const std::set<std::string>& universe,
                           double alpha) {
    if (universe.empty()) {
        throw Error(errc::empty_universe, "GO enrichment needs a universe");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw Error(errc::domain_error, "alpha must be in (0,1]");
    }

    // term -> universe genes carrying it
    std::map<std::string, std::set<std::string>> term_genes;
    for (const auto& [gene, terms] : annotation.gene_terms) {
        if (!universe.count(gene)) continue;
        for (const auto& term : terms) term_genes[term].insert(gene);
    }

    std::map<std::string, std::vector<EnrichmentResult>> by_ns;
    for (const auto& [term, genes] : term_genes) {
        EnrichmentResult r;
        r.term_id = term;
        const auto& meta = annotation.term_meta.at(term);
        r.term_name = meta.name;
        r.table = make_table(selected, genes, universe, r.hit_genes);
        r.p_value = fisher_exact_greater(r.table);
        by_ns[meta.ns].push_back(std::move(r));
    }

    GoEnrichment out;
    for (auto& [ns, results] : by_ns) {
        apply_bh(results); // BH family = one namespace
        for (const auto& r : results) {
            if (r.p_adjusted < alpha) out.filtered[ns].push_back(r);
        }
        out.full[ns] = std::move(results);
        if (!out.filtered.count(ns)) out.filtered[ns] = {};
    }
    return out;
}

} // namespace pathmap::stats
