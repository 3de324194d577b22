#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace msk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two consecutive vertices coincide (r_i = 0).
class DegenerateEdgeError : public Error {
public:
    DegenerateEdgeError(int edge_index, const std::string& msg)
        : Error(msg), edge_index(edge_index) {}
    int edge_index;
};

/// A turning angle is too close to +-pi; tan(phi/2) and 1/cos(phi/2) blow up.
class SharpAngleError : public Error {
public:
    SharpAngleError(int vertex_index, const std::string& msg)
        : Error(msg), vertex_index(vertex_index) {}
    int vertex_index;
};

/// A curve failed a structural invariant (too few vertices, self-intersection, ...).
class InvalidCurveError : public Error {
public:
    using Error::Error;
};

/// Zero (or sub-threshold) pivot during LU elimination.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(int pivot_index, const std::string& msg)
        : Error(msg), pivot_index(pivot_index) {}
    int pivot_index;
};

/// A charge or dummy point landed on the wrong side of the interface.
class PlacementError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested exactly at a singular point of a kernel.
class SingularEvaluationError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the given curve (e.g. area of an open curve).
class UnsupportedOperationError : public Error {
public:
    using Error::Error;
};

/// Topology surgery produced an invalid polygon.
class SurgeryError : public Error {
public:
    using Error::Error;
};

/// Endpoint contact angle collapsed; the 1/sin(theta) endpoint law diverges.
class TangentialContactError : public Error {
public:
    using Error::Error;
};

/// A finite-difference stencil crosses a singular point.
class StencilError : public Error {
public:
    using Error::Error;
};

/// Bad run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-fatal diagnostics (conditioning warnings etc.) are reported here.
/// Default sink writes to stderr; tests may capture it.
using DiagnosticSink = std::function<void(const std::string&)>;
void set_diagnostic_sink(DiagnosticSink sink);
void emit_diagnostic(const std::string& message);

}  // namespace msk
