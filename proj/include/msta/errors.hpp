#pragma once

#include <stdexcept>
#include <string>

namespace msta {

// Error kinds map onto process exit codes at the CLI boundary:
// constraint/infeasibility -> 1, usage/format -> 2, resource cap -> 3.
enum class errc {
    invalid_instance,   // bad aperture/tile parameters, divisibility, ...
    infeasible,         // overlapping anchors, encoding out of range
    io_format,          // malformed files, unknown config keys
    resource_limit,     // enumeration/dictionary/repair caps exceeded
    contract,           // precondition violated by caller
};

class error : public std::runtime_error {
  public:
    error(errc k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    errc kind() const { return kind_; }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc k, const std::string& what) { throw error(k, what); }

} // namespace msta
