#pragma once

#include <stdexcept>
#include <string>

namespace rydpol
{
    // Base class for every error raised by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // A parameter set violates a solver precondition.
    class PreconditionError : public Error
    {
    public:
        using Error::Error;
    };

    // A linear system is numerically singular (condition number above 1e12).
    class SingularSystemError : public Error
    {
    public:
        using Error::Error;
    };

    // The requested grid cannot resolve a feature the solver needs.
    class GridRefinementError : public Error
    {
    public:
        using Error::Error;
    };

    // Non-finite values or runaway growth during a march.
    class NumericalError : public Error
    {
    public:
        using Error::Error;
    };

    // Configuration document problems; the message names the offending key.
    class ConfigError : public Error
    {
    public:
        ConfigError(std::string key, const std::string& what)
            : Error(key.empty() ? what : key + ": " + what), m_key(std::move(key)) {}

        const std::string& key() const noexcept { return m_key; }

    private:
        std::string m_key;
    };
}
