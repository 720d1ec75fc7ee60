#ifndef SPARSEPACK_INSTANCE_IO_HPP_
#define SPARSEPACK_INSTANCE_IO_HPP_

#include <string>

#include "sparsepack/instance.hpp"

namespace sparsepack {

// JSON schema:
//   { "kind": "kp"|"mkp"|"gap", "n": int, "m": int,
//     "capacities": [..m..],
//     "items": [ { "values": [..m..], "weights": [..m..] }, .. ] }
// For kp/mkp, a scalar "value"/"weight" per item is accepted and broadcast
// across knapsacks; serialization emits the scalar form for those kinds.
// Round-trips are lossless for finite doubles.
std::string instance_to_json(const GapInstance& inst);
GapInstance instance_from_json(const std::string& text);

GapInstance load_instance(const std::string& path);
void save_instance(const GapInstance& inst, const std::string& path);

}  // namespace sparsepack

#endif  // SPARSEPACK_INSTANCE_IO_HPP_
