#include "pathmap/kegg.hpp"

#include "pathmap/error.hpp"
#include "pathmap/tsv.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

namespace pathmap::kegg {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::fixture_missing, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io_error, "cannot write " + path.string());
    out.write(data.data(), std::streamsize(data.size()));
}

EntryKind entry_kind_of(const std::string& label) {
    if (label == "ortholog") return EntryKind::ortholog;
    if (label == "gene") return EntryKind::gene;
    if (label == "compound") return EntryKind::compound;
    if (label == "map") return EntryKind::map;
    return EntryKind::other;
}

Shape shape_of(const std::string& label) {
    if (label == "rectangle") return Shape::rectangle;
    if (label == "circle") return Shape::circle;
    if (label == "line") return Shape::line;
    return Shape::other;
}

std::uint32_t be32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

} // namespace

const char* entry_kind_name(EntryKind kind) {
    switch (kind) {
    case EntryKind::ortholog: return "ortholog";
    case EntryKind::gene: return "gene";
    case EntryKind::compound: return "compound";
    case EntryKind::map: return "map";
    case EntryKind::other: return "other";
    }
    return "other";
}

const char* shape_name(Shape shape) {
    switch (shape) {
    case Shape::rectangle: return "rectangle";
    case Shape::circle: return "circle";
    case Shape::line: return "line";
    case Shape::other: return "other";
    }
    return "other";
}

PathwayId parse_pathway_id(const std::string& text) {
    std::string body = text;
    if (body.rfind("path:", 0) == 0) body = body.substr(5);
    if (body.size() < 7 || body.size() > 9) {
        throw Error(errc::domain_error, "malformed pathway id '" + text + "'");
    }
    std::string digits = body.substr(body.size() - 5);
    std::string org = body.substr(0, body.size() - 5);
    for (char c : digits) {
        if (c < '0' || c > '9') {
            throw Error(errc::domain_error, "malformed pathway id '" + text + "'");
        }
    }
    for (char c : org) {
        if (c < 'a' || c > 'z') {
            throw Error(errc::domain_error, "malformed pathway id '" + text + "'");
        }
    }
    return PathwayId{org, digits};
}

Pathway parse_kgml(const std::string& xml) {
    pt::ptree tree;
    try {
        std::istringstream in(xml);
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw Error(errc::xml_syntax, e.message(), e.line());
    }

    auto root = tree.get_child_optional("pathway");
    if (!root) throw Error(errc::xml_syntax, "no <pathway> root element");

    Pathway pathway;
    auto name = root->get_optional<std::string>("<xmlattr>.name");
    if (name) {
        // "path:ko00010" -> id
        try {
            pathway.id = parse_pathway_id(*name);
        } catch (const Error&) {
            // keep default id; listing supplies canonical ids
        }
    }
    pathway.title = root->get<std::string>("<xmlattr>.title", "");

    for (const auto& [tag, node] : *root) {
        if (tag != "entry") continue;

        auto id_attr = node.get_optional<int>("<xmlattr>.id");
        if (!id_attr) throw Error(errc::missing_attribute, "entry: missing 'id'");

        PathwayEntry entry;
        entry.entry_id = *id_attr;
        entry.kind_label = node.get<std::string>("<xmlattr>.type", "other");
        entry.kind = entry_kind_of(entry.kind_label);

        std::istringstream names(node.get<std::string>("<xmlattr>.name", ""));
        std::string token;
        while (names >> token) {
            if (token.rfind("ko:", 0) == 0) entry.ko_ids.insert(token.substr(3));
        }
        // ortholog/gene entries carry KO ids by contract; entries that
        // resolve to none (organism-local ids only) are kept as plain boxes
        if (entry.ko_ids.empty() &&
            (entry.kind == EntryKind::ortholog || entry.kind == EntryKind::gene)) {
            entry.kind = EntryKind::other;
        }
        if (!entry.ko_ids.empty() &&
            entry.kind != EntryKind::ortholog && entry.kind != EntryKind::gene) {
            entry.ko_ids.clear();
        }

        for (const auto& [gtag, gnode] : node) {
            if (gtag != "graphics") continue;
            GraphicsBox box;
            box.shape_label = gnode.get<std::string>("<xmlattr>.type", "rectangle");
            box.shape = shape_of(box.shape_label);
            auto x = gnode.get_optional<double>("<xmlattr>.x");
            auto y = gnode.get_optional<double>("<xmlattr>.y");
            auto w = gnode.get_optional<double>("<xmlattr>.width");
            auto h = gnode.get_optional<double>("<xmlattr>.height");
            bool boxy = box.shape == Shape::rectangle || box.shape == Shape::circle;
            if (boxy) {
                if (!x) throw Error(errc::missing_attribute, "graphics: missing 'x' (entry " +
                                    std::to_string(entry.entry_id) + ")");
                if (!y) throw Error(errc::missing_attribute, "graphics: missing 'y' (entry " +
                                    std::to_string(entry.entry_id) + ")");
                if (!w) throw Error(errc::missing_attribute, "graphics: missing 'width' (entry " +
                                    std::to_string(entry.entry_id) + ")");
                if (!h) throw Error(errc::missing_attribute, "graphics: missing 'height' (entry " +
                                    std::to_string(entry.entry_id) + ")");
            }
            box.center_x = x.value_or(0);
            box.center_y = y.value_or(0);
            box.width = w.value_or(0);
            box.height = h.value_or(0);
            if (box.center_x < 0 || box.center_y < 0 ||
                (boxy && (box.width <= 0 || box.height <= 0))) {
                throw Error(errc::bad_coordinate,
                            "entry " + std::to_string(entry.entry_id));
            }
            entry.graphics.push_back(box);
        }

        pathway.entries.push_back(std::move(entry));
    }

    // entry ids unique within the pathway
    std::vector<int> ids;
    for (const auto& e : pathway.entries) ids.push_back(e.entry_id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw Error(errc::bad_coordinate, "duplicate entry id in pathway");
    }
    return pathway;
}

HttpFetcher::HttpFetcher(std::string base_url, int min_delay_ms)
    : base_url_(std::move(base_url)), min_delay_ms_(min_delay_ms) {}

std::string HttpFetcher::get(const std::string& path) {
    std::lock_guard lock(mutex_); // one request at a time against the service
    using clock = std::chrono::steady_clock;
    auto now_ms = [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   clock::now().time_since_epoch()).count();
    };
    std::int64_t wait = last_request_ms_ + min_delay_ms_ - now_ms();
    if (last_request_ms_ > 0 && wait > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(wait));
    }
    last_request_ms_ = now_ms();

    httplib::Client client(base_url_);
    client.set_follow_location(true);
    auto res = client.Get("/" + path);
    if (!res) {
        throw Error(errc::network_error, base_url_ + "/" + path + ": " +
                    httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(errc::network_error, base_url_ + "/" + path + ": HTTP " +
                    std::to_string(res->status));
    }
    return res->body;
}

FixtureFetcher::FixtureFetcher(fs::path root) : root_(std::move(root)) {}

std::string FixtureFetcher::get(const std::string& path) {
    // list/pathway/<org> ; get/<id>/kgml ; get/<id>/image
    fs::path target;
    if (path.rfind("list/pathway/", 0) == 0) {
        target = root_ / path.substr(13) / "pathways.list";
    } else if (path.rfind("get/", 0) == 0) {
        std::string rest = path.substr(4);
        auto slash = rest.find('/');
        if (slash == std::string::npos) {
            throw Error(errc::fixture_missing, path);
        }
        std::string id_text = rest.substr(0, slash);
        std::string what = rest.substr(slash + 1);
        PathwayId id = parse_pathway_id(id_text);
        if (what == "kgml") {
            target = root_ / id.org_code / (id.str() + ".kgml");
        } else if (what == "image") {
            target = root_ / id.org_code / (id.str() + ".png");
        } else {
            throw Error(errc::fixture_missing, path);
        }
    } else {
        throw Error(errc::fixture_missing, path);
    }
    if (!fs::exists(target)) throw Error(errc::fixture_missing, target.string());
    return read_file(target);
}

Client::Client(std::shared_ptr<Fetcher> fetcher, fs::path cache_dir, bool refresh)
    : fetcher_(std::move(fetcher)), cache_dir_(std::move(cache_dir)), refresh_(refresh) {}

std::string Client::load_or_fetch(const fs::path& cached, const std::string& remote_path) {
    if (!refresh_ && fs::exists(cached)) return read_file(cached);
    std::lock_guard lock(fetch_mutex_);
    if (!refresh_ && fs::exists(cached)) return read_file(cached); // filled meanwhile
    std::string data = fetcher_->get(remote_path);
    write_file(cached, data);
    return data;
}

std::vector<PathwayId> Client::list_pathways(const std::string& org_code) {
    std::string listing =
        load_or_fetch(cache_dir_ / org_code / "pathways.list", "list/pathway/" + org_code);
    std::vector<PathwayId> ids;
    std::istringstream in(listing);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = tsv::split_fields(line);
        PathwayId id = parse_pathway_id(fields[0]);
        if (fields.size() > 1) titles_[id.str()] = fields[1];
        ids.push_back(std::move(id));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::pair<Pathway, std::string> Client::fetch_pathway(const PathwayId& id) {
    fs::path dir = cache_dir_ / id.org_code;
    std::string kgml = load_or_fetch(dir / (id.str() + ".kgml"), "get/" + id.str() + "/kgml");
    std::string png = load_or_fetch(dir / (id.str() + ".png"), "get/" + id.str() + "/image");

    Pathway pathway = parse_kgml(kgml);
    pathway.id = id;
    auto [width, height] = png_dimensions(png);
    pathway.image_width = width;
    pathway.image_height = height;

    constexpr double tolerance = 2.0; // KEGG art is occasionally off by a pixel
    for (const auto& entry : pathway.entries) {
        for (const auto& box : entry.graphics) {
            if (box.center_x + box.width / 2 > width + tolerance ||
                box.center_y + box.height / 2 > height + tolerance) {
                throw Error(errc::dimension_mismatch,
                            id.str() + " entry " + std::to_string(entry.entry_id) +
                            " exceeds image bounds");
            }
        }
    }
    return {std::move(pathway), std::move(png)};
}

std::pair<int, int> png_dimensions(const std::string& png) {
    static const unsigned char signature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    if (png.size() < 33 ||
        !std::equal(std::begin(signature), std::end(signature),
                    reinterpret_cast<const unsigned char*>(png.data()))) {
        throw Error(errc::image_decode_error, "not a PNG stream");
    }
    const auto* bytes = reinterpret_cast<const unsigned char*>(png.data());
    if (std::string(png.data() + 12, 4) != "IHDR") {
        throw Error(errc::image_decode_error, "missing IHDR chunk");
    }
    // truncated files lack the IEND trailer
    if (png.size() < 12 || png.find("IEND", png.size() - 12) == std::string::npos) {
        throw Error(errc::image_decode_error, "truncated PNG stream");
    }
    int width = int(be32(bytes + 16));
    int height = int(be32(bytes + 20));
    if (width <= 0 || height <= 0) {
        throw Error(errc::image_decode_error, "bad PNG dimensions");
    }
    return {width, height};
}

} // namespace pathmap::kegg
