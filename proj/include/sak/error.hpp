#pragma once

#include <stdexcept>
#include <string>

namespace sak {

enum class Module {
    exact_linalg,
    semiabelian,
    chow,
    heights,
    chern,
    bhc,
    cli,
};

enum class ErrorKind {
    schema,     // malformed input (bad JSON shape, unparsable rational, ...)
    invariant,  // well-formed input violating a declared invariant
    domain,     // runtime failure inside a module (degree cap, divergence, ...)
};

struct Error : std::runtime_error {
    Module module;
    ErrorKind kind;
    std::string path;  // json-pointer-ish location when known

    Error(Module m, ErrorKind k, const std::string& msg, std::string where = {})
        : std::runtime_error(where.empty() ? msg : msg + " at " + where),
          module(m), kind(k), path(std::move(where)) {}
};

inline int exit_code_for(const Error& e) {
    if (e.kind == ErrorKind::schema) return 2;
    if (e.kind == ErrorKind::invariant) return 3;
    switch (e.module) {
        case Module::exact_linalg: return 10;
        case Module::semiabelian: return 11;
        case Module::chow: return 12;
        case Module::heights: return 13;
        case Module::chern: return 14;
        case Module::bhc: return 15;
        case Module::cli: return 19;
    }
    return 19;
}

[[noreturn]] inline void fail(Module m, ErrorKind k, const std::string& msg,
                              const std::string& where = {}) {
    throw Error(m, k, msg, where);
}

}  // namespace sak
