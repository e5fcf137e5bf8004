#pragma once

#include <stdexcept>
#include <string>

#include <zlib.h>

namespace commdet {

/// Read a whole file into memory. gzFile transparently inflates gzip input
/// and passes plain text through, so .gz and uncompressed edge lists both
/// work.
inline std::string read_file(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    bool bad = n < 0;
    gzclose(f);
    if (bad) throw std::runtime_error("read error on " + path);
    return out;
}

}  // namespace commdet
