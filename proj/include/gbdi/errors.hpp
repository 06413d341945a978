#pragma once

#include <stdexcept>
#include <string>

namespace gbdi {

/// Base of every error the library throws.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid Config (block/word size mismatch, k not a power of two, ...).
class config_error : public error {
public:
    using error::error;
};

/// Container does not start with the expected magic.
class format_error : public error {
public:
    using error::error;
};

class version_error : public error {
public:
    using error::error;
};

/// Container is structurally invalid (bad parameters, bad mode byte, trailing bytes).
class corruption_error : public error {
public:
    using error::error;
};

/// Container ends before the data it announces.
class truncation_error : public error {
public:
    using error::error;
};

/// Argument outside the domain of a numeric operation.
class domain_error : public error {
public:
    using error::error;
};

} // namespace gbdi
