#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kelleyscope {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input: mismatched grounds, bad dimensions, unparsable files.
struct structural_error : error {
    using error::error;
};

// Well-formed input outside an operation's domain (improper ideal,
// epsilon out of range, zero element where B+ is required, ...).
struct value_error : error {
    using error::error;
};

// A configured enumeration or search budget was exceeded. Never a silent
// truncation: the message names the budget and what hit it.
struct budget_error : error {
    using error::error;
};

// A certificate failed verification; class_index names the offending
// cover class where applicable.
struct certificate_error : error {
    certificate_error(const std::string& what, std::size_t klass)
        : error(what), class_index(klass) {}
    explicit certificate_error(const std::string& what)
        : error(what), class_index(static_cast<std::size_t>(-1)) {}
    std::size_t class_index;
};

} // namespace kelleyscope
