#pragma once

#include "json.hpp"

#include "bpl/density.hpp"
#include "bpl/diffeomorphism.hpp"
#include "bpl/forward.hpp"
#include "bpl/space.hpp"
#include "bpl/units.hpp"

namespace bpl {

using Json = nlohmann::json;

/// Unit names as accepted by UnitSignature::parse ("second/meter", "1").
UnitSignature unit_from_json(const Json& j);
std::vector<UnitSignature> units_from_json(const Json& j);
Json to_json(const UnitSignature& u);

/// [[lo, hi], ...]; null or "inf" strings mark infinite ends.
Box box_from_json(const Json& j);
Json to_json(const Box& b);

/// Kinds:
///   {"kind": "uniform-box", "bounds": [[lo, hi], ...], "units": [...]}
///   {"kind": "gaussian-iid", "mean": [...], "sigma": s, "units": [...]}
///   {"kind": "constant", "bounds": ..., "value": c, "improper": bool, "units": [...]}
///   {"kind": "discrete", "atoms": [[value, probability], ...]}
///   {"kind": "product", "factors": [density, ...]}
///   {"kind": "pushforward", "base": density, "map": diffeomorphism}
/// Failures raise InvalidArgument naming the offending key.
Density density_from_json(const Json& j);

///   {"kind": "identity", "dim": n}
///   {"kind": "reciprocal", "dim": n, "excluded_radius": r}
///   {"kind": "affine", "scale": [...], "shift": [...]}
///   {"kind": "compose", "maps": [first, second, ...]}
Diffeomorphism diffeomorphism_from_json(const Json& j);

///   {"kind": "tomography-slowness" | "tomography-velocity", "rays": [[a, b], [c, d]]}
///   {"kind": "one-block" | "two-block", "L": l}
///   {"kind": "linear", "k": k}
///   {"kind": "identity"}
ForwardModel forward_from_json(const Json& j);

DiscreteDistribution discrete_from_json(const Json& j);

}  // namespace bpl
