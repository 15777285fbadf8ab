#include "pathmap/error.hpp"

#include <sstream>

namespace pathmap {

const char* errc_name(errc code) {
    switch (code) {
    case errc::empty_file: return "EmptyFile";
    case errc::duplicate_gene: return "DuplicateGene";
    case errc::ragged_row: return "RaggedRow";
    case errc::non_numeric_value: return "NonNumericValue";
    case errc::negative_value: return "NegativeValue";
    case errc::malformed_ko_id: return "MalformedKoId";
    case errc::conflicting_namespace: return "ConflictingNamespace";
    case errc::network_error: return "NetworkError";
    case errc::fixture_missing: return "FixtureMissing";
    case errc::xml_syntax: return "XmlSyntax";
    case errc::missing_attribute: return "MissingAttribute";
    case errc::bad_coordinate: return "BadCoordinate";
    case errc::image_decode_error: return "ImageDecodeError";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::domain_error: return "DomainError";
    case errc::empty_universe: return "EmptyUniverse";
    case errc::too_few_time_points: return "TooFewTimePoints";
    case errc::empty_replicate_group: return "EmptyReplicateGroup";
    case errc::empty_values: return "EmptyValues";
    case errc::io_error: return "IoError";
    case errc::config_error: return "ConfigError";
    }
    return "UnknownError";
}

std::string Error::format(errc code, const std::string& message,
                          std::size_t line, std::size_t column) {
    std::ostringstream out;
    out << errc_name(code);
    if (line > 0) {
        out << " (line " << line;
        if (column > 0) out << ", col " << column;
        out << ")";
    }
    out << ": " << message;
    return out.str();
}

} // namespace pathmap
