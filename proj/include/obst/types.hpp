#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace obst {

/// Peer identifier. Doubles as the BST search key; valid ids are >= 1.
using PeerId = std::int32_t;

inline constexpr PeerId kNoPeer = 0;

struct Edge {
    PeerId a = kNoPeer;
    PeerId b = kNoPeer;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Canonical undirected edge with a < b.
inline Edge make_edge(PeerId u, PeerId v) { return u < v ? Edge{u, v} : Edge{v, u}; }

struct Request {
    PeerId source = kNoPeer;
    PeerId dest = kNoPeer;

    friend bool operator==(const Request&, const Request&) = default;
    friend auto operator<=>(const Request&, const Request&) = default;
};

using RequestSequence = std::vector<Request>;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: malformed files, out-of-range parameters, unknown ids.
class InputError : public Error {
public:
    using Error::Error;
};

/// A data structure failed its own consistency checks.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace obst
