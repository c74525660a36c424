#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kfreelat {

// Lattice points are handled through their integer coordinate vectors in a
// fixed basis; the geometry lives in the Gram matrix of the Lattice.
using Coord = std::int64_t;
using Point = std::vector<Coord>;

// Hole centers grow like the product of the assigned prime powers and leave
// the int64 range already for modest window radii, hence the big-integer
// variants.
using BigInt = boost::multiprecision::cpp_int;
using BigPoint = std::vector<BigInt>;

BigPoint to_big(const Point& p);

// Exact conversion; returns false if any component does not fit in int64.
bool to_small(const BigPoint& p, Point& out);

}  // namespace kfreelat
