#pragma once

#include <stdexcept>
#include <string>

namespace motpairs {

// Base class for every failure the library can signal.  Each concrete error
// names the identity or precondition that broke, so callers can report it.
struct EngineError : std::runtime_error {
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

// Requested an exact division a / b and b does not divide a over Z[u,v].
struct NonExactDivision : EngineError {
    explicit NonExactDivision(const std::string& what) : EngineError(what) {}
};

// A certificate refers to a named class that is not present in the cache.
struct UnresolvedName : EngineError {
    explicit UnresolvedName(const std::string& what) : EngineError(what) {}
};

// Certificate text does not parse; carries a byte offset.
struct ParseError : EngineError {
    ParseError(const std::string& what, std::size_t position)
        : EngineError(what + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

// The Euler-characteristic formula produced a negative Ext^1 dimension,
// which means the configuration is outside the vanishing regime.
struct NegativeExtDim : EngineError {
    explicit NegativeExtDim(const std::string& what) : EngineError(what) {}
};

// A stratum shape that the closed-form fiber catalogue does not cover.
struct UnsupportedShape : EngineError {
    explicit UnsupportedShape(const std::string& what) : EngineError(what) {}
};

// A moduli-space class was requested exactly at a critical sigma value.
struct WallValue : EngineError {
    explicit WallValue(const std::string& what) : EngineError(what) {}
};

// A recursion step needs an ingredient that no available route can supply.
struct MissingIngredient : EngineError {
    explicit MissingIngredient(const std::string& what) : EngineError(what) {}
};

// msbundle_class called with gcd(n, d) != 1.
struct NotCoprime : EngineError {
    explicit NotCoprime(const std::string& what) : EngineError(what) {}
};

// Bad user input on the command line or in a run configuration.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace motpairs
