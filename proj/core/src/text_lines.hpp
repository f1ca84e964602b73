#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace icecast {

// Calls fn(line, lineno) for every '\n'-terminated line (1-based numbering).
// A trailing '\r' is stripped; a final unterminated line is still visited.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line, ++lineno);
        pos = end + 1;
    }
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t end = line.find(sep, pos);
        if (end == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
}

}  // namespace icecast
