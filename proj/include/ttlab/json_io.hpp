#pragma once

#include <json.hpp>

#include "ttlab/bitstream.hpp"
#include "ttlab/index_set.hpp"

namespace ttlab {

// Rebuilds a stream from its description; inverse of BitStream::describe()
// for every node kind in the library. Throws std::invalid_argument on an
// unknown kind or a malformed description.
BitStream stream_from_json(const nlohmann::json& j);

// Inverse of IndexSet::describe().
IndexSet index_set_from_json(const nlohmann::json& j);

} // namespace ttlab
