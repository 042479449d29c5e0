#include "sdtk/wav.hpp"

#include "sdtk/error.hpp"
#include "text_util.hpp"

#include <cstdint>
#include <algorithm>
#include <cstring>
#include <fstream>

namespace sdtk {

namespace {

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

Audio read_wav(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0)
        throw Error(path + ": not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* pcm = nullptr;
    std::size_t pcm_size = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t size = le32(data + pos + 4);
        const unsigned char* body = data + pos + 8;
        const std::size_t avail = std::min<std::size_t>(size, bytes.size() - pos - 8);
        if (std::memcmp(data + pos, "fmt ", 4) == 0 && avail >= 16) {
            format = le16(body);
            channels = le16(body + 2);
            rate = le32(body + 4);
            bits = le16(body + 14);
            if (format == 0xFFFE && avail >= 26) format = le16(body + 24);  // WAVE_FORMAT_EXTENSIBLE
        } else if (std::memcmp(data + pos, "data", 4) == 0) {
            pcm = body;
            pcm_size = avail;
        }
        pos += 8 + size + (size & 1);
    }
    if (!pcm || channels == 0 || rate == 0) throw Error(path + ": missing fmt or data chunk");

    Audio audio;
    audio.sample_rate = static_cast<int>(rate);
    if (format == 1 && bits == 16) {
        const std::size_t frame = 2u * channels;
        for (std::size_t i = 0; i + frame <= pcm_size; i += frame)
            audio.samples.push_back(static_cast<std::int16_t>(le16(pcm + i)) / 32768.0);
    } else if (format == 3 && bits == 32) {
        const std::size_t frame = 4u * channels;
        for (std::size_t i = 0; i + frame <= pcm_size; i += frame) {
            std::uint32_t raw = le32(pcm + i);
            float v;
            std::memcpy(&v, &raw, sizeof v);
            audio.samples.push_back(v);
        }
    } else {
        throw Error(path + ": unsupported WAV encoding (need 16-bit PCM or 32-bit float)");
    }
    return audio;
}

void write_wav(const std::string& path, const Audio& audio) {
    const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * 4);
    std::string out = "RIFF";
    put32(out, 36 + data_size);
    out += "WAVEfmt ";
    put32(out, 16);
    put16(out, 3);
    put16(out, 1);
    put32(out, static_cast<std::uint32_t>(audio.sample_rate));
    put32(out, static_cast<std::uint32_t>(audio.sample_rate) * 4);
    put16(out, 4);
    put16(out, 32);
    out += "data";
    put32(out, data_size);
    for (double s : audio.samples) {
        float v = static_cast<float>(s);
        std::uint32_t raw;
        std::memcpy(&raw, &v, sizeof raw);
        put32(out, raw);
    }
    detail::write_file(path, out);
}

}  // namespace sdtk
