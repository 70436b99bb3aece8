#ifndef FRACFLOW_ERRORS_HPP
#define FRACFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracflow
{

// Caller supplied inconsistent arguments (order mismatch, wrong mode, ...).
class usage_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure tied to a point: domain escape, pole, degenerate value.
// `stage` is the step index inside a multi-step evaluation, or -1 when the
// failure is not part of a chain.
class domain_error : public std::runtime_error
{
public:
    domain_error(const std::string &msg, double value, int stage = -1)
        : std::runtime_error(msg), m_value(value), m_stage(stage)
    {
    }

    double value() const noexcept
    {
        return m_value;
    }
    int stage() const noexcept
    {
        return m_stage;
    }

private:
    double m_value;
    int m_stage;
};

class pole_error : public domain_error
{
public:
    using domain_error::domain_error;
};

// A quantity used as a divisor vanished (R = 0, x_t(x) = 0, ...).
class degenerate_error : public domain_error
{
public:
    using domain_error::domain_error;
};

// Linear-solve pivot below the resonance tolerance.
class resonance_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Float64 evaluation produced a non-finite value.
class range_error : public domain_error
{
public:
    using domain_error::domain_error;
};

} // namespace fracflow

#endif
