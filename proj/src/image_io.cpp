#include "auif/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace auif {
namespace {

[[noreturn]] void io_error(const std::string& path, const std::string& what) {
    throw std::runtime_error("image I/O error (" + path + "): " + what);
}

float luma(float r, float g, float b) { return 0.299f * r + 0.587f * g + 0.114f * b; }

// ---- PNM (P2/P5 gray, P3/P6 color) -----------------------------------------

int pnm_token(std::istream& is, const std::string& path) {
    // skips whitespace and '#' comments
    while (is) {
        int c = is.peek();
        if (c == '#') {
            std::string line;
            std::getline(is, line);
        } else if (std::isspace(c)) {
            is.get();
        } else {
            break;
        }
    }
    int v;
    if (!(is >> v)) io_error(path, "malformed PNM header");
    return v;
}

Image load_pnm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) io_error(path, "cannot open");
    char p, kind;
    is.get(p).get(kind);
    if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6'))
        io_error(path, "unsupported PNM type");
    const bool color = kind == '3' || kind == '6';
    const bool ascii = kind == '2' || kind == '3';
    const int w = pnm_token(is, path), h = pnm_token(is, path), maxval = pnm_token(is, path);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) io_error(path, "bad PNM dimensions");
    const int channels = color ? 3 : 1;
    const size_t count = static_cast<size_t>(w) * h * channels;
    std::vector<double> vals(count);
    if (ascii) {
        for (size_t i = 0; i < count; ++i) vals[i] = pnm_token(is, path);
    } else {
        is.get();  // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(count * bytes);
        is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<size_t>(is.gcount()) != raw.size()) io_error(path, "truncated PNM payload");
        for (size_t i = 0; i < count; ++i)
            vals[i] = bytes == 2 ? raw[2 * i] * 256.0 + raw[2 * i + 1] : raw[i];  // MSB first
    }
    Image img(h, w);
    for (size_t i = 0; i < img.size(); ++i) {
        float v;
        if (color)
            v = luma(static_cast<float>(vals[3 * i] / maxval),
                     static_cast<float>(vals[3 * i + 1] / maxval),
                     static_cast<float>(vals[3 * i + 2] / maxval));
        else
            v = static_cast<float>(vals[i] / maxval);
        img.pix[i] = v;
    }
    return img;
}

// ---- PNG --------------------------------------------------------------------

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

Image load_png(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
    if (!fp) io_error(path, "cannot open");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) io_error(path, "libpng init failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        io_error(path, "libpng init failure");
    }
    std::vector<png_bytep> rows;
    std::vector<unsigned char> storage;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_error(path, "libpng decode failure");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info), h = png_get_image_height(png, info);
    int depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    const size_t rowbytes = png_get_rowbytes(png, info);
    storage.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = storage.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (channels != 1 && channels != 3) io_error(path, "unsupported channel layout");
    const double maxval = depth == 16 ? 65535.0 : 255.0;
    Image img(static_cast<int>(h), static_cast<int>(w));
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* row = rows[y];
        for (png_uint_32 x = 0; x < w; ++x) {
            double px[3];
            for (int c = 0; c < channels; ++c) {
                size_t i = (static_cast<size_t>(x) * channels + c) * (depth == 16 ? 2 : 1);
                px[c] = depth == 16 ? row[i] * 256.0 + row[i + 1] : row[i];  // PNG is big-endian
            }
            float v = channels == 3 ? luma(static_cast<float>(px[0] / maxval),
                                           static_cast<float>(px[1] / maxval),
                                           static_cast<float>(px[2] / maxval))
                                    : static_cast<float>(px[0] / maxval);
            img.at(static_cast<int>(y), static_cast<int>(x)) = v;
        }
    }
    return img;
}

void save_png(const std::vector<unsigned char>& bytes, int h, int w, const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
    if (!fp) io_error(path, "cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        io_error(path, "libpng init failure");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        io_error(path, "libpng encode failure");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        png_write_row(png, const_cast<png_bytep>(bytes.data() + static_cast<size_t>(y) * w));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::string lower_ext(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

}  // namespace

Image load_gray(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) io_error(path, "cannot open");
    unsigned char sig[8] = {};
    probe.read(reinterpret_cast<char*>(sig), 8);
    probe.close();
    if (sig[0] == 0x89 && sig[1] == 'P' && sig[2] == 'N' && sig[3] == 'G') return load_png(path);
    if (sig[0] == 'P' && (sig[1] == '2' || sig[1] == '3' || sig[1] == '5' || sig[1] == '6'))
        return load_pnm(path);
    io_error(path, "unrecognized image format");
}

size_t save_gray(const Image& img, const std::string& path) {
    if (img.height < 1 || img.width < 1) io_error(path, "empty image");
    size_t clamped = 0;
    std::vector<unsigned char> bytes(img.size());
    for (size_t i = 0; i < img.size(); ++i) {
        float v = img.pix[i];
        if (!(v >= 0.0f && v <= 1.0f)) {
            ++clamped;
            v = std::min(1.0f, std::max(0.0f, v));
        }
        bytes[i] = static_cast<unsigned char>(std::floor(v * 255.0f + 0.5f));  // round half up
    }
    const std::string ext = lower_ext(path);
    if (ext == "pgm") {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) io_error(path, "cannot open for writing");
        os << "P5\n" << img.width << " " << img.height << "\n255\n";
        os.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()));
        if (!os) io_error(path, "write failure");
    } else {
        save_png(bytes, img.height, img.width, path);
    }
    return clamped;
}

}  // namespace auif
