#pragma once

#include <stdexcept>
#include <string>

namespace floquet {

/// Raised for every contract violation in the library. The message is the
/// short diagnostic string callers match on (e.g. "incompatible base frequency").
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace floquet
