#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pathmap::img {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Plain RGB8 pixel buffer.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = {255, 255, 255});

    int width() const { return width_; }
    int height() const { return height_; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    Rgb get(int x, int y) const {
        const auto* p = &pixels_[std::size_t(y) * width_ * 3 + std::size_t(x) * 3];
        return {p[0], p[1], p[2]};
    }
    void set(int x, int y, Rgb color) {
        if (!in_bounds(x, y)) return;
        auto* p = &pixels_[std::size_t(y) * width_ * 3 + std::size_t(x) * 3];
        p[0] = color.r;
        p[1] = color.g;
        p[2] = color.b;
    }

    void fill_rect(int x0, int y0, int x1, int y1, Rgb color); // inclusive bounds
    void draw_rect_outline(int x0, int y0, int x1, int y1, Rgb color);

    /// 5x7 bitmap text at (x, y) top-left, 1 px inter-glyph spacing.
    void draw_text(int x, int y, const std::string& text, Rgb color);
    static int text_width(const std::string& text);

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// libpng round-trip; RGB8, no interlacing, fixed encoder settings so
/// identical images encode to identical bytes.
Image decode_png(const std::string& bytes);
std::string encode_png(const Image& image);

} // namespace pathmap::img
