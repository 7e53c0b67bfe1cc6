#pragma once

#include <stdexcept>
#include <string>

namespace comp_isac {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series or iteration could not reach its accuracy target.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested target or constraint set cannot be met.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& family, const std::string& what)
        : std::runtime_error(what), family_(family) {}

    /// Which constraint family is responsible ("budget", "sinr", "sensing", "joint", ...).
    const std::string& family() const noexcept { return family_; }

private:
    std::string family_;
};

/// Malformed or inconsistent configuration; key() names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace comp_isac
