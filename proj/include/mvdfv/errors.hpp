#ifndef MVDFV_ERRORS_HPP
#define MVDFV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// geometry

class DegenerateTriangle : public Error
{
public:
    using Error::Error;
};

class TooFewVertices : public Error
{
public:
    using Error::Error;
};

class NegativeArea : public Error
{
public:
    using Error::Error;
};

class NonIntersecting : public Error
{
public:
    using Error::Error;
};

class NonOrthogonal : public Error
{
public:
    NonOrthogonal(const std::string& what, double cosine) : Error(what), cosine_(cosine) {}
    double cosine() const { return cosine_; }

private:
    double cosine_;
};

// mesh ingestion

/// Any failure while reading an MSH stream. line() is 1-based.
class ParseError : public Error
{
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class UnsupportedVersion : public ParseError
{
public:
    using ParseError::ParseError;
};

class MalformedSection : public ParseError
{
public:
    using ParseError::ParseError;
};

class NonPlanarNode : public ParseError
{
public:
    using ParseError::ParseError;
};

class NoTriangles : public ParseError
{
public:
    using ParseError::ParseError;
};

/// Topological or covering invariant of a TriMesh does not hold.
class InvalidMesh : public Error
{
public:
    using Error::Error;
};

class NonAcuteMesh : public Error
{
public:
    using Error::Error;
};

class ZeroLengthDiagonal : public Error
{
public:
    using Error::Error;
};

class MeshMismatch : public Error
{
public:
    using Error::Error;
};

// discretisation and solve

class NonSpdTensor : public Error
{
public:
    NonSpdTensor(const std::string& what, std::size_t cell) : Error(what), cell_(cell) {}
    std::size_t cell() const { return cell_; }

private:
    std::size_t cell_;
};

class NegativeReaction : public Error
{
public:
    using Error::Error;
};

/// Failures of the iterative solver. The CLI maps these to exit code 2.
class SolverError : public Error
{
public:
    using Error::Error;
};

class NotConverged : public SolverError
{
public:
    NotConverged(const std::string& what, std::size_t iterations, double residual)
        : SolverError(what), iterations_(iterations), residual_(residual)
    {
    }
    std::size_t iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

class BreakdownNonSpd : public SolverError
{
public:
    using SolverError::SolverError;
};

class InsufficientLevels : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace mvd

#endif
