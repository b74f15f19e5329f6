#pragma once

#include "hutchinf/cantor.hpp"
#include "hutchinf/geometry.hpp"

#include <string>
#include <vector>

namespace hutchinf {

struct Viewport {
    Point min{0.0, 0.0};
    Point max{1.0, 1.0};
    int resolution = 512;

    void validate() const;
};

// Binary P6 image, white background, black set pixels, row-major from the top
// row down. Bytes are deterministic for a fixed input.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<unsigned char> rgb;  // 3 bytes per pixel

    std::size_t black_pixel_count() const;
};

Image rasterize_points(const FiniteSet& cloud, const Viewport& vp);
Image rasterize_squares(const std::vector<std::pair<TildeAddress, Square>>& sq,
                        const Viewport& vp);

std::string encode_ppm(const Image& img);

// Write-temp-then-rename so partially written files are never observed.
void atomic_write_file(const std::string& path, const std::string& bytes);

}  // namespace hutchinf
