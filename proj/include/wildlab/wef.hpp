#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "wildlab/field.hpp"
#include "wildlab/flow_state.hpp"

namespace wildlab {

// WEF1 field snapshot container. On disk: ASCII header
//   WEF1 d=<d> n=<n> fields=<count> time=<t>
// then per field a line `<name> <scalar|vector|symtensor>` followed by raw
// little-endian float64 samples in row-major grid order with components
// interleaved last (vector: x,y[,z]; symtensor packed upper triangle
// xx,xy,yy in 2D and xx,xy,xz,yy,yz,zz in 3D). Scalars are written first,
// then vectors, then tensors.
struct WefSnapshot {
    TorusGrid grid;
    double time = 0.0;
    std::vector<std::pair<std::string, ScalarField>> scalars;
    std::vector<std::pair<std::string, VectorField>> vectors;
    std::vector<std::pair<std::string, SymTensorField>> tensors;
};

void save_wef(const std::filesystem::path& path, const WefSnapshot& snap);
WefSnapshot load_wef(const std::filesystem::path& path);

// FlowState convenience wrappers (fields named "rho" and "m").
void save_state(const std::filesystem::path& path, const FlowState& state);
FlowState load_state(const std::filesystem::path& path);

}  // namespace wildlab
