#pragma once

#include <filesystem>
#include <vector>

#include "sapdrl/numkit/branch_net.hpp"
#include "sapdrl/numkit/mlp.hpp"

namespace sapdrl::numkit {

/// Parameter files: flat little-endian binary. Header is the magic "SAPN"
/// and a u32 version. Version 1 holds one fully connected net: u32 layer
/// count, then (u32 fanIn, u32 units) per layer, then per layer the raw
/// f64 weights (row-major units x fanIn) followed by the f64 biases.
/// Version 2 holds a two-branch net as three version-1 bodies in the order
/// state branch, action branch, joint head. Activations are not stored:
/// the loader re-attaches them from the architecture it expects.
void saveMlp(const Mlp& net, const std::filesystem::path& path);
void saveBranchNet(const BranchNet& net, const std::filesystem::path& path);

/// Loads parameters into a network of the given topology. Throws
/// CheckpointError when the file is unreadable or the dims disagree.
void loadMlp(Mlp& into, const std::filesystem::path& path);
void loadBranchNet(BranchNet& into, const std::filesystem::path& path);

/// Reads just the per-layer (fanIn, units) dims of a version-1 file.
std::vector<std::pair<std::uint32_t, std::uint32_t>> peekMlpDims(const std::filesystem::path& path);

}  // namespace sapdrl::numkit
