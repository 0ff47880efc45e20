#include "sapdrl/numkit/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "sapdrl/errors.hpp"

namespace sapdrl::numkit {

namespace {

constexpr char kMagic[4] = {'S', 'A', 'P', 'N'};

void writeU32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t readU32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw CheckpointError("checkpoint truncated");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void writeF64(std::ostream& os, const double* data, std::size_t count) {
  static_assert(sizeof(double) == 8);
  // host is little-endian on every supported target
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

void readF64(std::istream& is, double* data, std::size_t count) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
  if (!is) throw CheckpointError("checkpoint truncated");
}

void writeMlpBody(std::ostream& os, const Mlp& net) {
  writeU32(os, static_cast<std::uint32_t>(net.layerCount()));
  for (std::size_t l = 0; l < net.layerCount(); ++l) {
    writeU32(os, static_cast<std::uint32_t>(net.weights(l).cols()));
    writeU32(os, static_cast<std::uint32_t>(net.weights(l).rows()));
  }
  for (std::size_t l = 0; l < net.layerCount(); ++l) {
    writeF64(os, net.weights(l).data().data(), net.weights(l).size());
    writeF64(os, net.bias(l).data(), net.bias(l).size());
  }
}

void readMlpBody(std::istream& is, Mlp& into, const std::filesystem::path& path) {
  const std::uint32_t layers = readU32(is);
  if (layers != into.layerCount())
    throw CheckpointError(path.string() + ": layer count " + std::to_string(layers) +
                          ", expected " + std::to_string(into.layerCount()));
  for (std::uint32_t l = 0; l < layers; ++l) {
    const std::uint32_t fanIn = readU32(is);
    const std::uint32_t units = readU32(is);
    if (fanIn != into.weights(l).cols() || units != into.weights(l).rows())
      throw CheckpointError(path.string() + ": layer " + std::to_string(l) + " is " +
                            std::to_string(units) + "x" + std::to_string(fanIn) +
                            ", expected " + std::to_string(into.weights(l).rows()) + "x" +
                            std::to_string(into.weights(l).cols()));
  }
  for (std::uint32_t l = 0; l < layers; ++l) {
    readF64(is, into.weights(l).data().data(), into.weights(l).size());
    readF64(is, into.bias(l).data(), into.bias(l).size());
  }
}

std::ofstream openOut(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError("cannot write " + path.string());
  return os;
}

std::ifstream openIn(const std::filesystem::path& path, std::uint32_t expectVersion) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot read " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw CheckpointError(path.string() + ": bad magic");
  const std::uint32_t version = readU32(is);
  if (version != expectVersion)
    throw CheckpointError(path.string() + ": version " + std::to_string(version) +
                          ", expected " + std::to_string(expectVersion));
  return is;
}

}  // namespace

void saveMlp(const Mlp& net, const std::filesystem::path& path) {
  auto os = openOut(path);
  os.write(kMagic, 4);
  writeU32(os, 1);
  writeMlpBody(os, net);
  if (!os) throw CheckpointError("write failed: " + path.string());
}

void saveBranchNet(const BranchNet& net, const std::filesystem::path& path) {
  auto os = openOut(path);
  os.write(kMagic, 4);
  writeU32(os, 2);
  writeMlpBody(os, net.stateBranch());
  writeMlpBody(os, net.actionBranch());
  writeMlpBody(os, net.joint());
  if (!os) throw CheckpointError("write failed: " + path.string());
}

void loadMlp(Mlp& into, const std::filesystem::path& path) {
  auto is = openIn(path, 1);
  readMlpBody(is, into, path);
}

void loadBranchNet(BranchNet& into, const std::filesystem::path& path) {
  auto is = openIn(path, 2);
  readMlpBody(is, into.stateBranch(), path);
  readMlpBody(is, into.actionBranch(), path);
  readMlpBody(is, into.joint(), path);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> peekMlpDims(const std::filesystem::path& path) {
  auto is = openIn(path, 1);
  const std::uint32_t layers = readU32(is);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dims;
  for (std::uint32_t l = 0; l < layers; ++l) {
    const std::uint32_t fanIn = readU32(is);
    const std::uint32_t units = readU32(is);
    dims.emplace_back(fanIn, units);
  }
  return dims;
}

}  // namespace sapdrl::numkit
