#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathmap {

enum class errc {
    // ingest
    empty_file,
    duplicate_gene,
    ragged_row,
    non_numeric_value,
    negative_value,
    malformed_ko_id,
    conflicting_namespace,
    // kegg
    network_error,
    fixture_missing,
    xml_syntax,
    missing_attribute,
    bad_coordinate,
    image_decode_error,
    dimension_mismatch,
    // stats / profiles / render
    domain_error,
    empty_universe,
    too_few_time_points,
    empty_replicate_group,
    empty_values,
    // pipeline
    io_error,
    config_error,
};

const char* errc_name(errc code);

/// Structured error: a code plus the location that triggered it.
/// line/column are 1-based; 0 means "not applicable".
class Error : public std::runtime_error {
public:
    Error(errc code, std::string message, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(format(code, message, line, column)),
          code_(code), line_(line), column_(column) {}

    errc code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(errc code, const std::string& message,
                              std::size_t line, std::size_t column);

    errc code_;
    std::size_t line_;
    std::size_t column_;
};

} // namespace pathmap
