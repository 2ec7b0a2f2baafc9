#pragma once

#include <stdexcept>
#include <string>

namespace phaseml {

// Execution policy for the data-parallel kernels (sample generation,
// posterior grids). The serial path is the reference implementation; the
// parallel path must reproduce it bit for bit.
enum class Exec { serial, parallel };

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical contract was violated, e.g. a distribution that must be
// normalized is not.
class contract_error : public std::runtime_error {
public:
    explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace phaseml
