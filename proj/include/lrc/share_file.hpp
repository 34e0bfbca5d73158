#pragma once

// On-disk share format. All integers little-endian.
//
//   offset  size  field
//   0       4     magic "LRC1"
//   4       1     version (1)
//   5       1     flags: bit 0 is_parity, bit 1 forced (uncertified) parameters
//   6       4     n
//   10      4     M
//   14      4     r
//   18      4     delta
//   22      4     alpha
//   26      4     s            (q = 2^s)
//   30      4     m
//   34      4     N
//   38      4     node_id
//   42      4     group_id
//   46      8     original_byte_length
//   54      4     stripe_index
//   58      4     stripe_count
//   62            payload: alpha elements of ceil(s*m/8) bytes each

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lrc/gf.hpp"
#include "lrc/lrc.hpp"

namespace lrc::cli {

inline constexpr std::array<std::uint8_t, 4> kShareMagic = {'L', 'R', 'C', '1'};
inline constexpr std::uint8_t kShareVersion = 1;
inline constexpr std::size_t kShareHeaderSize = 62;

struct ShareHeader {
  std::uint32_t n = 0;
  std::uint32_t M = 0;
  std::uint32_t r = 0;
  std::uint32_t delta = 0;
  std::uint32_t alpha = 0;
  std::uint32_t s = 0;
  std::uint32_t m = 0;
  std::uint32_t N = 0;
  std::uint32_t node_id = 0;
  std::uint32_t group_id = 0;
  bool is_parity = false;
  bool forced = false;
  std::uint64_t original_byte_length = 0;
  std::uint32_t stripe_index = 0;
  std::uint32_t stripe_count = 1;

  /// True when both headers describe the same codeword layout and file.
  bool same_code(const ShareHeader& other) const noexcept;
  friend bool operator==(const ShareHeader&, const ShareHeader&) = default;
};

struct ShareFile {
  ShareHeader header;
  std::vector<gf::FieldElem> payload;
};

ShareHeader make_header(const CodeParams& params, const mds::NodeBlock& block, std::uint64_t original_byte_length,
                        std::uint32_t stripe_index, std::uint32_t stripe_count);

std::vector<std::uint8_t> serialize(const ShareFile& share, const gf::ExtField& field);
ShareHeader parse_header(std::span<const std::uint8_t> bytes);
ShareFile parse_share(std::span<const std::uint8_t> bytes, const gf::ExtField& field);

/// Re-derives code parameters from a header and checks they match it.
CodeParams params_from_header(const ShareHeader& header);

/// Reads `count` symbols from the little-endian bit stream `bytes` starting
/// at `bit_offset`, s*m bits per symbol; bits past the end read as zero.
std::vector<gf::FieldElem> bits_to_symbols(const gf::ExtField& field, std::span<const std::uint8_t> bytes,
                                           std::uint64_t bit_offset, int count);
/// Appends the symbols' bits to `bits` starting at `bit_offset`, growing it as needed.
void symbols_to_bits(const gf::ExtField& field, std::span<const gf::FieldElem> symbols,
                     std::vector<std::uint8_t>& bits, std::uint64_t bit_offset);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

std::filesystem::path stripe_dir(const std::filesystem::path& root, std::uint32_t stripe);
std::filesystem::path share_path(const std::filesystem::path& root, std::uint32_t stripe, int node_id);

}  // namespace lrc::cli
