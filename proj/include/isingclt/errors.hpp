#pragma once

#include <stdexcept>
#include <string>

namespace isingclt {

/// A configured resource cap (partition order, enumeration length,
/// enumeration volume) would be exceeded.
class LimitExceeded : public std::length_error {
public:
    explicit LimitExceeded(const std::string& what) : std::length_error(what) {}
};

}  // namespace isingclt
