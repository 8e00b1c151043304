#pragma once

#include <stdexcept>
#include <string>

namespace permutonlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An exhaustive operation was asked to exceed its configured bound.
class BoundExceeded : public Error {
public:
    explicit BoundExceeded(const std::string& what) : Error(what) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

/// A point set handed to a Traversal constructor is not a traversal of the shape.
class NotATraversal : public Error {
public:
    explicit NotATraversal(const std::string& what) : Error(what) {}
};

/// Inverse growth rules hit an inconsistent label triple.
class ReconstructionFailure : public Error {
public:
    explicit ReconstructionFailure(const std::string& what) : Error(what) {}
};

class PreconditionViolated : public Error {
public:
    explicit PreconditionViolated(const std::string& what) : Error(what) {}
};

/// The inner shape-Wilf map produced an image outside the target class,
/// or recoloring the output changed the extracted shape.
class InnerBijectionFailure : public Error {
public:
    explicit InnerBijectionFailure(const std::string& what) : Error(what) {}
};

class InvalidRect : public Error {
public:
    explicit InvalidRect(const std::string& what) : Error(what) {}
};

class InvalidDelta : public Error {
public:
    explicit InvalidDelta(const std::string& what) : Error(what) {}
};

class LayerOverflow : public Error {
public:
    explicit LayerOverflow(const std::string& what) : Error(what) {}
};

} // namespace permutonlab
