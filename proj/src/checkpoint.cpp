#include "auif/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace auif {

uint32_t crc32_ieee(const unsigned char* data, size_t len, uint32_t seed) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = seed ^ 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

namespace {

constexpr char kMagic[4] = {'A', 'U', 'I', 'F'};
constexpr uint32_t kVersion = 1;

void put_bytes(std::vector<unsigned char>& buf, const void* p, size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    buf.insert(buf.end(), b, b + n);
}

template <class T>
void put_le(std::vector<unsigned char>& buf, T v) {
    for (size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

[[noreturn]] void format_error(size_t offset, const std::string& what) {
    throw std::runtime_error("checkpoint format error at byte " + std::to_string(offset) + ": " +
                             what);
}

struct Reader {
    const std::vector<unsigned char>& buf;
    size_t pos = 0;

    void need(size_t n, const char* what) const {
        if (pos + n > buf.size()) format_error(pos, std::string("truncated while reading ") + what);
    }
    template <class T>
    T le(const char* what) {
        need(sizeof(T), what);
        T v = 0;
        for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[pos + i]) << (8 * i);
        pos += sizeof(T);
        return v;
    }
    std::string str(size_t n, const char* what) {
        need(n, what);
        std::string s(reinterpret_cast<const char*>(buf.data() + pos), n);
        pos += n;
        return s;
    }
    void raw(void* dst, size_t n, const char* what) {
        need(n, what);
        std::memcpy(dst, buf.data() + pos, n);
        pos += n;
    }
};

}  // namespace

void save_checkpoint(const NetworkParamsF& params, const std::string& path) {
    std::vector<unsigned char> buf;
    put_bytes(buf, kMagic, 4);
    put_le<uint32_t>(buf, kVersion);
    put_le<uint32_t>(buf, static_cast<uint32_t>(params.config.num_layers));
    put_le<uint32_t>(buf, static_cast<uint32_t>(params.config.channels));
    put_le<uint32_t>(buf, params.config.ablation);

    auto& mut = const_cast<NetworkParamsF&>(params);
    auto views = all_views(mut);
    put_le<uint32_t>(buf, static_cast<uint32_t>(views.size()));
    for (const auto& v : views) {
        put_le<uint16_t>(buf, static_cast<uint16_t>(v.name.size()));
        put_bytes(buf, v.name.data(), v.name.size());
        buf.push_back(static_cast<unsigned char>(v.dims.size()));
        for (uint64_t d : v.dims) put_le<uint64_t>(buf, d);
        static_assert(sizeof(float) == 4);
        put_bytes(buf, v.data, v.count * sizeof(float));
    }
    put_le<uint32_t>(buf, crc32_ieee(buf.data(), buf.size()));

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!os) throw std::runtime_error("write failure on checkpoint: " + path);
}

NetworkParamsF load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());

    if (buf.size() < 8) format_error(buf.size(), "file shorter than header");
    uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i) stored_crc |= static_cast<uint32_t>(buf[buf.size() - 4 + i]) << (8 * i);
    if (crc32_ieee(buf.data(), buf.size() - 4) != stored_crc)
        format_error(buf.size() - 4, "CRC-32 mismatch");
    buf.resize(buf.size() - 4);

    Reader r{buf};
    if (std::memcmp(buf.data(), kMagic, 4) != 0) format_error(0, "bad magic");
    r.pos = 4;
    uint32_t version = r.le<uint32_t>("version");
    if (version != kVersion)
        format_error(4, "unsupported version " + std::to_string(version));

    NetworkConfig cfg;
    cfg.num_layers = static_cast<int>(r.le<uint32_t>("num_layers"));
    cfg.channels = static_cast<int>(r.le<uint32_t>("channels"));
    cfg.ablation = r.le<uint32_t>("ablation");
    NetworkParamsF params = make_network_skeleton<float>(cfg);

    auto views = all_views(params);
    uint32_t count = r.le<uint32_t>("tensor count");
    if (count != views.size())
        format_error(r.pos, "expected " + std::to_string(views.size()) + " tensors, found " +
                                std::to_string(count));
    for (auto& v : views) {
        size_t at = r.pos;
        uint16_t name_len = r.le<uint16_t>("name length");
        std::string name = r.str(name_len, "tensor name");
        if (name != v.name)
            format_error(at, "expected tensor '" + v.name + "', found '" + name + "'");
        uint8_t rank;
        r.raw(&rank, 1, "rank");
        if (rank != v.dims.size()) format_error(r.pos - 1, "rank mismatch for " + v.name);
        size_t total = 1;
        for (uint8_t i = 0; i < rank; ++i) total *= r.le<uint64_t>("dim");
        if (total != v.count) format_error(at, "element count mismatch for " + v.name);
        r.raw(v.data, v.count * sizeof(float), "payload");
    }
    if (r.pos != buf.size()) format_error(r.pos, "trailing bytes after last tensor");
    return params;
}

}  // namespace auif
