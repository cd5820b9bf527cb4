#pragma once

#include <stdexcept>
#include <string>

namespace orad {

// Error codes shared with the C API (values must match orlicz_radius.h).
enum class ErrCode : int {
    ok = 0,
    invalid_argument = 1,
    dimension = 2,
    not_hermitian = 3,
    not_psd = 4,
    domain = 5,
    overflow = 6,
    io = 7,
    parse = 8,
    unknown_case = 9,
    not_applicable = 10,
    internal = 11,
};

class Error : public std::runtime_error {
public:
    Error(ErrCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrCode code() const { return code_; }

private:
    ErrCode code_;
};

[[noreturn]] inline void fail(ErrCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace orad
