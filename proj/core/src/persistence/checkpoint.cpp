#include "daaclab/persistence/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "daaclab/common/error.hpp"
#include "daaclab/common/hash.hpp"

namespace daaclab::persistence {

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

namespace {

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    out_.append(static_cast<const char*>(data), n);
  }
  template <typename T>
  void pod(T value) {
    bytes(&value, sizeof(T));
  }
  void text32(std::string_view s) {
    pod(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) {
      throw FormatError(pos_, std::string("truncated while reading ") + what);
    }
  }
  template <typename T>
  T pod(const char* what) {
    need(sizeof(T), what);
    T value;
    std::memcpy(&value, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string text(std::uint64_t n, const char* what) {
    need(n, what);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string text32(const char* what) {
    return text(pod<std::uint32_t>(what), what);
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

template <typename Record>
const Record* find(const std::vector<Record>& records, std::string_view name) {
  for (const Record& r : records) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::uint64_t checksum(std::string_view bytes) {
  return fnv1a64(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
}

}  // namespace

const TensorRecord& Checkpoint::tensor(std::string_view name) const {
  if (const auto* r = find(tensors, name)) return *r;
  throw FormatError(0, "checkpoint has no tensor '" + std::string(name) + "'");
}

const RngRecord& Checkpoint::rng(std::string_view name) const {
  if (const auto* r = find(rngs, name)) return *r;
  throw FormatError(0, "checkpoint has no rng state '" + std::string(name) + "'");
}

std::int64_t Checkpoint::counter(std::string_view name) const {
  if (const auto* r = find(counters, name)) return r->value;
  throw FormatError(0, "checkpoint has no counter '" + std::string(name) + "'");
}

bool Checkpoint::has_tensor(std::string_view name) const {
  return find(tensors, name) != nullptr;
}

std::string encode_checkpoint(const Checkpoint& c) {
  Writer w;
  w.bytes(kCheckpointMagic.data(), kCheckpointMagic.size());
  w.pod<std::uint32_t>(c.version);
  w.pod<std::uint64_t>(c.config_text.size());
  w.bytes(c.config_text.data(), c.config_text.size());

  w.pod(static_cast<std::uint32_t>(c.tensors.size()));
  for (const TensorRecord& t : c.tensors) {
    std::uint64_t count = 1;
    for (const std::uint64_t d : t.shape) count *= d;
    if (count != t.values.size()) {
      throw DimensionError("encode_checkpoint: tensor '" + t.name +
                           "' shape does not match its values");
    }
    w.text32(t.name);
    w.pod(static_cast<std::uint32_t>(t.shape.size()));
    for (const std::uint64_t d : t.shape) w.pod(d);
    w.bytes(t.values.data(), t.values.size() * sizeof(double));
  }
  w.pod(static_cast<std::uint32_t>(c.rngs.size()));
  for (const RngRecord& r : c.rngs) {
    w.text32(r.name);
    for (const std::uint64_t s : r.state) w.pod(s);
  }
  w.pod(static_cast<std::uint32_t>(c.counters.size()));
  for (const CounterRecord& r : c.counters) {
    w.text32(r.name);
    w.pod(r.value);
  }
  w.pod(checksum(w.str()));
  return std::move(w.str());
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  const std::string magic = r.text(kCheckpointMagic.size(), "magic");
  if (magic != kCheckpointMagic) throw IntegrityError("not a DAACLAB1 checkpoint");
  Checkpoint c;
  const std::size_t version_at = r.pos();
  c.version = r.pod<std::uint32_t>("version");
  if (c.version != kCheckpointVersion) {
    throw FormatError(version_at, "unsupported checkpoint version " +
                                      std::to_string(c.version));
  }
  c.config_text = r.text(r.pod<std::uint64_t>("config length"), "config echo");

  const auto tensors = r.pod<std::uint32_t>("tensor count");
  for (std::uint32_t i = 0; i < tensors; ++i) {
    TensorRecord t;
    t.name = r.text32("tensor name");
    const auto rank = r.pod<std::uint32_t>("tensor rank");
    std::uint64_t count = 1;
    for (std::uint32_t k = 0; k < rank; ++k) {
      t.shape.push_back(r.pod<std::uint64_t>("tensor shape"));
      count *= t.shape.back();
    }
    r.need(count * sizeof(double), "tensor values");
    t.values.resize(count);
    for (std::uint64_t k = 0; k < count; ++k) t.values[k] = r.pod<double>("tensor values");
    c.tensors.push_back(std::move(t));
  }
  const auto rngs = r.pod<std::uint32_t>("rng count");
  for (std::uint32_t i = 0; i < rngs; ++i) {
    RngRecord rec;
    rec.name = r.text32("rng name");
    for (auto& s : rec.state) s = r.pod<std::uint64_t>("rng state");
    c.rngs.push_back(std::move(rec));
  }
  const auto counters = r.pod<std::uint32_t>("counter count");
  for (std::uint32_t i = 0; i < counters; ++i) {
    CounterRecord rec;
    rec.name = r.text32("counter name");
    rec.value = r.pod<std::int64_t>("counter value");
    c.counters.push_back(std::move(rec));
  }
  const std::size_t payload_end = r.pos();
  const auto stored = r.pod<std::uint64_t>("checksum");
  if (stored != checksum(bytes.substr(0, payload_end))) {
    throw IntegrityError("checkpoint checksum mismatch");
  }
  if (r.pos() != bytes.size()) {
    throw FormatError(r.pos(), "trailing bytes after checksum");
  }
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() +
                  "': " + ec.message());
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_file_atomic(path, encode_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace daaclab::persistence
