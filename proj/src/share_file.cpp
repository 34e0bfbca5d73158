#include "lrc/share_file.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "lrc/error.hpp"

namespace lrc::cli {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t get(int width) {
    if (pos_ + static_cast<std::size_t>(width) > bytes_.size())
      throw Error(ErrorCode::kFormat, "share file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

bool ShareHeader::same_code(const ShareHeader& o) const noexcept {
  return n == o.n && M == o.M && r == o.r && delta == o.delta && alpha == o.alpha && s == o.s && m == o.m &&
         N == o.N && forced == o.forced && original_byte_length == o.original_byte_length &&
         stripe_count == o.stripe_count;
}

ShareHeader make_header(const CodeParams& p, const mds::NodeBlock& block, std::uint64_t original_byte_length,
                        std::uint32_t stripe_index, std::uint32_t stripe_count) {
  ShareHeader h;
  h.n = static_cast<std::uint32_t>(p.n);
  h.M = static_cast<std::uint32_t>(p.M);
  h.r = static_cast<std::uint32_t>(p.r);
  h.delta = static_cast<std::uint32_t>(p.delta);
  h.alpha = static_cast<std::uint32_t>(p.alpha);
  h.s = static_cast<std::uint32_t>(p.s);
  h.m = static_cast<std::uint32_t>(p.m);
  h.N = static_cast<std::uint32_t>(p.N);
  h.node_id = static_cast<std::uint32_t>(block.node_id);
  h.group_id = static_cast<std::uint32_t>(block.group_id);
  h.is_parity = block.is_parity;
  h.forced = !p.certified();
  h.original_byte_length = original_byte_length;
  h.stripe_index = stripe_index;
  h.stripe_count = stripe_count;
  return h;
}

std::vector<std::uint8_t> serialize(const ShareFile& share, const gf::ExtField& field) {
  const ShareHeader& h = share.header;
  if (share.payload.size() != h.alpha) throw Error(ErrorCode::kShapeMismatch, "payload does not hold alpha symbols");
  std::vector<std::uint8_t> out(kShareMagic.begin(), kShareMagic.end());
  out.push_back(kShareVersion);
  out.push_back(static_cast<std::uint8_t>((h.is_parity ? 1u : 0u) | (h.forced ? 2u : 0u)));
  for (std::uint32_t v : {h.n, h.M, h.r, h.delta, h.alpha, h.s, h.m, h.N, h.node_id, h.group_id}) put_u32(out, v);
  put_u64(out, h.original_byte_length);
  put_u32(out, h.stripe_index);
  put_u32(out, h.stripe_count);
  const std::size_t width = field.bytes_per_element();
  for (const gf::FieldElem& e : share.payload) {
    const std::size_t at = out.size();
    out.resize(at + width);
    field.write(e, std::span<std::uint8_t>(out.data() + at, width));
  }
  return out;
}

ShareHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kShareHeaderSize) throw Error(ErrorCode::kFormat, "share file shorter than its header");
  if (!std::equal(kShareMagic.begin(), kShareMagic.end(), bytes.begin()))
    throw Error(ErrorCode::kFormat, "bad share magic");
  if (bytes[4] != kShareVersion) throw Error(ErrorCode::kFormat, "unsupported share version");
  const std::uint8_t flags = bytes[5];
  if (flags & ~3u) throw Error(ErrorCode::kFormat, "unknown share flags");
  Reader rd(bytes.subspan(6));
  ShareHeader h;
  h.is_parity = flags & 1u;
  h.forced = flags & 2u;
  h.n = rd.u32();
  h.M = rd.u32();
  h.r = rd.u32();
  h.delta = rd.u32();
  h.alpha = rd.u32();
  h.s = rd.u32();
  h.m = rd.u32();
  h.N = rd.u32();
  h.node_id = rd.u32();
  h.group_id = rd.u32();
  h.original_byte_length = rd.get(8);
  h.stripe_index = rd.u32();
  h.stripe_count = rd.u32();
  if (h.stripe_count == 0 || h.stripe_index >= h.stripe_count) throw Error(ErrorCode::kFormat, "bad stripe index");
  if (h.node_id >= h.n) throw Error(ErrorCode::kFormat, "node id out of range");
  return h;
}

ShareFile parse_share(std::span<const std::uint8_t> bytes, const gf::ExtField& field) {
  ShareFile share;
  share.header = parse_header(bytes);
  const ShareHeader& h = share.header;
  if (h.s != static_cast<std::uint32_t>(field.base().bits()) || h.m != static_cast<std::uint32_t>(field.degree()))
    throw Error(ErrorCode::kParamMismatch, "share field does not match");
  const std::size_t width = field.bytes_per_element();
  if (bytes.size() != kShareHeaderSize + width * h.alpha)
    throw Error(ErrorCode::kFormat, "payload length does not match alpha * element size");
  for (std::uint32_t t = 0; t < h.alpha; ++t)
    share.payload.push_back(field.read(bytes.subspan(kShareHeaderSize + t * width, width)));
  return share;
}

CodeParams params_from_header(const ShareHeader& h) {
  if (h.s < 1 || h.s > static_cast<std::uint32_t>(gf::kMaxBaseBits)) throw Error(ErrorCode::kFormat, "bad s");
  DeriveOptions opt;
  opt.force = h.forced;
  opt.ext_degree = static_cast<int>(h.m);
  CodeParams p = derive_params(static_cast<int>(h.n), static_cast<int>(h.M), static_cast<int>(h.r),
                               static_cast<int>(h.delta), static_cast<int>(h.alpha), 1u << h.s, opt);
  if (p.N != static_cast<int>(h.N) || p.certified() == h.forced)
    throw Error(ErrorCode::kFormat, "share header disagrees with derived parameters");
  return p;
}

std::vector<gf::FieldElem> bits_to_symbols(const gf::ExtField& field, std::span<const std::uint8_t> bytes,
                                           std::uint64_t bit_offset, int count) {
  const int s = field.base().bits();
  std::vector<gf::FieldElem> out;
  out.reserve(static_cast<std::size_t>(count));
  std::uint64_t bit = bit_offset;
  const std::uint64_t total = static_cast<std::uint64_t>(bytes.size()) * 8;
  for (int i = 0; i < count; ++i) {
    gf::FieldElem e = field.zero();
    for (int j = 0; j < field.degree(); ++j) {
      gf::BaseElem v = 0;
      for (int b = 0; b < s; ++b, ++bit)
        if (bit < total && ((bytes[bit / 8] >> (bit % 8)) & 1)) v |= static_cast<gf::BaseElem>(1u << b);
      e[j] = v;
    }
    out.push_back(e);
  }
  return out;
}

void symbols_to_bits(const gf::ExtField& field, std::span<const gf::FieldElem> symbols,
                     std::vector<std::uint8_t>& bits, std::uint64_t bit_offset) {
  const int s = field.base().bits();
  const std::uint64_t end = bit_offset + static_cast<std::uint64_t>(symbols.size()) * field.bits_per_element();
  if (bits.size() * 8 < end) bits.resize(static_cast<std::size_t>((end + 7) / 8), 0);
  std::uint64_t bit = bit_offset;
  for (const gf::FieldElem& e : symbols) {
    for (int j = 0; j < field.degree(); ++j) {
      for (int b = 0; b < s; ++b, ++bit) {
        const auto mask = static_cast<std::uint8_t>(1u << (bit % 8));
        if ((e[j] >> b) & 1)
          bits[bit / 8] |= mask;
        else
          bits[bit / 8] &= static_cast<std::uint8_t>(~mask);
      }
    }
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

std::filesystem::path stripe_dir(const std::filesystem::path& root, std::uint32_t stripe) {
  char name[32];
  std::snprintf(name, sizeof(name), "stripe_%06u", stripe);
  return root / name;
}

std::filesystem::path share_path(const std::filesystem::path& root, std::uint32_t stripe, int node_id) {
  return stripe_dir(root, stripe) / ("node_" + std::to_string(node_id) + ".lrc");
}

}  // namespace lrc::cli
