#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace repnet {

using Timestamp = std::chrono::sys_seconds;

/// Parses an RFC 3339 instant ("2021-03-04T12:00:00Z", fractional seconds and
/// numeric offsets accepted). Fractional seconds are truncated.
/// Throws ValidationError on malformed text.
Timestamp parse_rfc3339(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

}  // namespace repnet
