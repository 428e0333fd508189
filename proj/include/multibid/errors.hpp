#pragma once

#include <stdexcept>
#include <string>

namespace multibid {

/// Bad input data: malformed instance, config or grid spec. The CLI maps it
/// to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An API called out of contract (charging a stopped ledger, UCB of an
/// unpulled arm, ...).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace multibid
