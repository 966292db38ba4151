#pragma once

#include <stdexcept>
#include <string>

namespace honeycomb {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedSymbol : Error {
    using Error::Error;
};

struct TermOutOfRange : Error {
    using Error::Error;
};

struct NotAPolyhedron : Error {
    using Error::Error;
};

struct UnsupportedGeometry : Error {
    using Error::Error;
};

// Two generalized spheres that do not intersect have no dihedral angle.
struct Disjoint : Error {
    using Error::Error;
};

struct DegenerateArc : Error {
    using Error::Error;
};

struct NoMaterialCenter : Error {
    using Error::Error;
};

struct EmptyGrid : Error {
    using Error::Error;
};

struct EmptyMesh : Error {
    using Error::Error;
};

}  // namespace honeycomb
