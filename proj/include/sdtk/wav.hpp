#pragma once

#include <string>
#include <vector>

namespace sdtk {

/// Mono audio with samples nominally in [-1, 1].
struct Audio {
    int sample_rate = 16000;
    std::vector<double> samples;

    double duration() const { return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0; }
};

/// Reads 16-bit PCM or 32-bit float WAV. Multichannel files yield their first channel.
Audio read_wav(const std::string& path);
/// Writes 32-bit float mono WAV.
void write_wav(const std::string& path, const Audio& audio);

}  // namespace sdtk
