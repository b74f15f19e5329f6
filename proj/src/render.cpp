#include "hutchinf/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hutchinf {

void Viewport::validate() const {
    if (min.size() != 2 || max.size() != 2)
        throw std::invalid_argument("Viewport: two axes required");
    for (int d = 0; d < 2; ++d)
        if (!(min[d] < max[d]))
            throw std::invalid_argument("Viewport: min must be below max");
    if (resolution < 1) throw std::invalid_argument("Viewport: resolution >= 1");
}

std::size_t Image::black_pixel_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < rgb.size(); i += 3)
        if (rgb[i] == 0) ++n;
    return n;
}

namespace {

Image blank(int res) {
    Image img;
    img.width = res;
    img.height = res;
    img.rgb.assign(static_cast<std::size_t>(res) * res * 3, 255);
    return img;
}

void set_black(Image& img, int px, int py) {
    if (px < 0 || py < 0 || px >= img.width || py >= img.height) return;
    std::size_t at = (static_cast<std::size_t>(py) * img.width + px) * 3;
    img.rgb[at] = img.rgb[at + 1] = img.rgb[at + 2] = 0;
}

int to_px(double v, double lo, double hi, int res) {
    double t = (v - lo) / (hi - lo);
    int p = static_cast<int>(std::floor(t * res));
    if (v == hi) p = res - 1;  // the top edge belongs to the last pixel
    return p;
}

}  // namespace

Image rasterize_points(const FiniteSet& cloud, const Viewport& vp) {
    vp.validate();
    if (cloud.dim() != 2)
        throw std::invalid_argument("rasterize_points: two-dimensional clouds only");
    Image img = blank(vp.resolution);
    for (const Point& p : cloud.points()) {
        if (p[0] < vp.min[0] || p[0] > vp.max[0] || p[1] < vp.min[1] ||
            p[1] > vp.max[1])
            continue;
        int px = to_px(p[0], vp.min[0], vp.max[0], vp.resolution);
        int py = to_px(p[1], vp.min[1], vp.max[1], vp.resolution);
        set_black(img, px, vp.resolution - 1 - py);  // row 0 is the top
    }
    return img;
}

Image rasterize_squares(const std::vector<std::pair<TildeAddress, Square>>& sq,
                        const Viewport& vp) {
    vp.validate();
    Image img = blank(vp.resolution);
    for (const auto& [addr, s] : sq) {
        int x0 = to_px(std::max(s.x, vp.min[0]), vp.min[0], vp.max[0], vp.resolution);
        int x1 = to_px(std::min(s.x + s.side, vp.max[0]), vp.min[0], vp.max[0],
                       vp.resolution);
        int y0 = to_px(std::max(s.y, vp.min[1]), vp.min[1], vp.max[1], vp.resolution);
        int y1 = to_px(std::min(s.y + s.side, vp.max[1]), vp.min[1], vp.max[1],
                       vp.resolution);
        if (s.x > vp.max[0] || s.x + s.side < vp.min[0] || s.y > vp.max[1] ||
            s.y + s.side < vp.min[1])
            continue;
        for (int py = y0; py <= y1; ++py)
            for (int px = x0; px <= x1; ++px)
                set_black(img, px, vp.resolution - 1 - py);
    }
    return img;
}

std::string encode_ppm(const Image& img) {
    char header[64];
    std::snprintf(header, sizeof header, "P6\n%d %d\n255\n", img.width,
                  img.height);
    std::string out(header);
    out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    return out;
}

void atomic_write_file(const std::string& path, const std::string& bytes) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("atomic_write_file: cannot open " + tmp);
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!os) throw std::runtime_error("atomic_write_file: write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic_write_file: rename failed for " + path);
}

}  // namespace hutchinf
