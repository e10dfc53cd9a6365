#pragma once

#include <stdexcept>
#include <string>

namespace rover {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Raised when a state or derivative goes non-finite during stepping.
class SimulationError : public std::runtime_error {
public:
    SimulationError(double t, const std::string& what)
        : std::runtime_error("t=" + std::to_string(t) + " s: " + what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

} // namespace rover
