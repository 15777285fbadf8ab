#include "pathmap/tsv.hpp"

#include <cmath>
#include <cstdio>

namespace pathmap::tsv {

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

void for_each_row(std::istream& in,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        fn(line_no, split_fields(line));
    }
}

std::string format_value(double v) {
    char buf[64];
    double mag = std::fabs(v);
    if (mag != 0.0 && mag < 1e-4) {
        int exp = static_cast<int>(std::floor(std::log10(mag)));
        double mantissa = v / std::pow(10.0, exp);
        // rounding can push the mantissa to 10.0
        if (std::fabs(mantissa) >= 10.0 - 5e-7) {
            mantissa /= 10.0;
            ++exp;
        }
        std::snprintf(buf, sizeof(buf), "%.6fe%d", mantissa, exp);
    } else {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
    }
    return buf;
}

} // namespace pathmap::tsv
