#pragma once

#include <string>

#include "qclab/flip_complex.hpp"

namespace qclab::test {

inline std::string data_path(const std::string& name) { return std::string(QCLAB_DATA_DIR) + "/" + name; }

inline FlipComplex load(const std::string& name) { return FlipComplex(load_spec_file(data_path(name))); }

// Reference single-vertex spec with two loops and the commutator boundary.
inline std::string wedge_spec(const std::string& scale, const std::string& fiber, const std::string& collar) {
  std::string piece = R"({"spine": {"vertices": 1, "edges": [[0,0,"a"],[0,0,"b"]]},
      "boundary_cycles": [["a","b","a^-1","b^-1"]], "base_scale": ")" + scale +
                      R"(", "fiber_period": ")" + fiber + R"(", "collar_width": ")" + collar + "\"}";
  return R"({"pieces": [)" + piece + "," + piece + R"(], "gluings": [{"from": [0,0], "to": [1,0]}]})";
}

}  // namespace qclab::test
