#include "pathmap/zipfile.hpp"

#include "pathmap/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace pathmap::zipfile {

namespace fs = std::filesystem;

namespace {

void put16(std::string& out, std::uint16_t v) {
    out.push_back(char(v & 0xFF));
    out.push_back(char((v >> 8) & 0xFF));
}

void put32(std::string& out, std::uint32_t v) {
    put16(out, std::uint16_t(v & 0xFFFF));
    put16(out, std::uint16_t(v >> 16));
}

struct EntryRecord {
    std::string name;
    std::uint32_t crc;
    std::uint32_t size;
    std::uint32_t offset;
};

} // namespace

void pack_directory(const fs::path& directory, const fs::path& archive_path) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path() != archive_path) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::string archive;
    std::vector<EntryRecord> records;
    // DOS timestamp 2000-01-01 00:00:00
    const std::uint16_t dos_time = 0;
    const std::uint16_t dos_date = (20 << 9) | (1 << 5) | 1;

    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw Error(errc::io_error, "cannot read " + file.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string data = buf.str();

        std::string name = fs::relative(file, directory).generic_string();
        std::uint32_t crc = std::uint32_t(
            crc32(0, reinterpret_cast<const Bytef*>(data.data()), uInt(data.size())));

        EntryRecord rec{name, crc, std::uint32_t(data.size()),
                        std::uint32_t(archive.size())};
        records.push_back(rec);

        archive += "PK\x03\x04";
        put16(archive, 20);       // version needed
        put16(archive, 0);        // flags
        put16(archive, 0);        // method: stored
        put16(archive, dos_time);
        put16(archive, dos_date);
        put32(archive, crc);
        put32(archive, rec.size); // compressed
        put32(archive, rec.size); // uncompressed
        put16(archive, std::uint16_t(name.size()));
        put16(archive, 0);        // extra length
        archive += name;
        archive += data;
    }

    std::uint32_t central_start = std::uint32_t(archive.size());
    for (const auto& rec : records) {
        archive += "PK\x01\x02";
        put16(archive, 20); // version made by
        put16(archive, 20); // version needed
        put16(archive, 0);
        put16(archive, 0);
        put16(archive, dos_time);
        put16(archive, dos_date);
        put32(archive, rec.crc);
        put32(archive, rec.size);
        put32(archive, rec.size);
        put16(archive, std::uint16_t(rec.name.size()));
        put16(archive, 0);
        put16(archive, 0);
        put16(archive, 0);
        put16(archive, 0);
        put32(archive, 0);
        put32(archive, rec.offset);
        archive += rec.name;
    }
    std::uint32_t central_size = std::uint32_t(archive.size()) - central_start;

    archive += "PK\x05\x06";
    put16(archive, 0);
    put16(archive, 0);
    put16(archive, std::uint16_t(records.size()));
    put16(archive, std::uint16_t(records.size()));
    put32(archive, central_size);
    put32(archive, central_start);
    put16(archive, 0);

    std::ofstream out(archive_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io_error, "cannot write " + archive_path.string());
    out.write(archive.data(), std::streamsize(archive.size()));
}

} // namespace pathmap::zipfile
