#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pathmap::kegg {

struct PathwayId {
    std::string org_code; // 2-4 lowercase letters or "ko"
    std::string number;   // 5 decimal digits

    std::string str() const { return org_code + number; }
    auto operator<=>(const PathwayId&) const = default;
};

/// Parses `ko00010`-style ids; throws on malformed input.
PathwayId parse_pathway_id(const std::string& text);

enum class Shape { rectangle, circle, line, other };

struct GraphicsBox {
    double center_x = 0;
    double center_y = 0;
    double width = 0;
    double height = 0;
    Shape shape = Shape::other;
    std::string shape_label; // original attribute value
};

enum class EntryKind { ortholog, gene, compound, map, other };

struct PathwayEntry {
    int entry_id = 0;
    std::set<std::string> ko_ids;
    EntryKind kind = EntryKind::other;
    std::string kind_label;
    std::vector<GraphicsBox> graphics;
};

struct Pathway {
    PathwayId id;
    std::string title;
    std::vector<PathwayEntry> entries;
    int image_width = 0;  // 0 until an image has been attached
    int image_height = 0;
};

const char* entry_kind_name(EntryKind kind);
const char* shape_name(Shape shape);

/// Parses a KGML document. Image dimensions stay 0; fetch_pathway fills
/// them from the PNG and checks box bounds.
Pathway parse_kgml(const std::string& xml);

/// Transport abstraction so tests and offline mode never hit the network.
class Fetcher {
public:
    virtual ~Fetcher() = default;
    /// `path` is relative to the KEGG REST root, e.g. "list/pathway/ko".
    virtual std::string get(const std::string& path) = 0;
};

/// Real REST client. Requests are serialized with a minimum inter-request
/// delay; never call the public service in parallel.
class HttpFetcher : public Fetcher {
public:
    explicit HttpFetcher(std::string base_url = "https://rest.kegg.jp",
                         int min_delay_ms = 350);
    std::string get(const std::string& path) override;

private:
    std::string base_url_;
    int min_delay_ms_;
    std::mutex mutex_;
    std::int64_t last_request_ms_ = 0;
};

/// Serves artifacts from a fixture directory laid out like the cache:
/// <root>/<org>/pathways.list, <root>/<org>/<id>.kgml, <root>/<org>/<id>.png
class FixtureFetcher : public Fetcher {
public:
    explicit FixtureFetcher(std::filesystem::path root);
    std::string get(const std::string& path) override;

private:
    std::filesystem::path root_;
};

/// Counts requests going through an inner fetcher; used to assert the
/// cache contract.
class CountingFetcher : public Fetcher {
public:
    explicit CountingFetcher(std::shared_ptr<Fetcher> inner) : inner_(std::move(inner)) {}
    std::string get(const std::string& path) override {
        ++count_;
        return inner_->get(path);
    }
    int count() const { return count_; }

private:
    std::shared_ptr<Fetcher> inner_;
    int count_ = 0;
};

/// Cache-first pathway store. Layout:
///   <cache_dir>/<org>/pathways.list
///   <cache_dir>/<org>/<pathway_id>.kgml
///   <cache_dir>/<org>/<pathway_id>.png
class Client {
public:
    Client(std::shared_ptr<Fetcher> fetcher, std::filesystem::path cache_dir,
           bool refresh = false);

    std::vector<PathwayId> list_pathways(const std::string& org_code);
    /// Pathway with image dimensions resolved, plus the raw PNG bytes.
    std::pair<Pathway, std::string> fetch_pathway(const PathwayId& id);

    /// Pathway titles seen in the listing (id -> title).
    const std::map<std::string, std::string>& titles() const { return titles_; }

private:
    std::string load_or_fetch(const std::filesystem::path& cached,
                              const std::string& remote_path);

    std::shared_ptr<Fetcher> fetcher_;
    std::filesystem::path cache_dir_;
    bool refresh_;
    std::mutex fetch_mutex_; // single-writer cache fill
    std::map<std::string, std::string> titles_;
};

/// Reads width/height from a PNG header; throws ImageDecodeError.
std::pair<int, int> png_dimensions(const std::string& png_bytes);

} // namespace pathmap::kegg
