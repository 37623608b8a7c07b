#pragma once

#include <stdexcept>
#include <string>

namespace pairtime {

// Base class for every error the library raises. Subclasses let the CLI map
// failures onto exit codes without string matching.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error
{
public:
	using Error::Error;
};

class UnitError : public Error
{
public:
	using Error::Error;
};

class DomainError : public Error
{
public:
	using Error::Error;
};

class ConfigError : public Error
{
public:
	using Error::Error;
};

class FitError : public Error
{
public:
	using Error::Error;
};

class IoError : public Error
{
public:
	using Error::Error;
};

class OracleFailure : public Error
{
public:
	using Error::Error;
};

} // namespace pairtime
