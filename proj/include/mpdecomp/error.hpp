#pragma once

#include <stdexcept>
#include <string>

namespace mpd {

/// Malformed or inconsistent input: bad files, dimension mismatches,
/// homogeneity violations.
class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition, e.g. a non-admissible
/// row or column addition.
class contract_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Rows or columns share a grade and tie perturbation was not requested.
class tied_grades_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Always a bug.
class internal_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// The brute-force oracle refuses instances above its enumeration budget.
class budget_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace mpd
