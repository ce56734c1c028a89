#pragma once

#include <filesystem>

#include "reseval/signal.h"

namespace reseval {

// Reads a RIFF/WAVE file: mono, 16 kHz, 16-bit integer PCM (scaled by
// 1/32768) or 32-bit IEEE float. WAVE_FORMAT_EXTENSIBLE headers carrying
// either subformat are accepted.
//
// Throws FormatError naming the unsupported property (channel count, sample
// rate, encoding) and IoError on missing or truncated files.
Signal load_wav(const std::filesystem::path& path);

// Writes 32-bit float mono. The file is written to a temporary sibling and
// renamed into place.
void save_wav(const Signal& signal, const std::filesystem::path& path);

}  // namespace reseval
