#ifndef XQZ_ERRORS_HPP
#define XQZ_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xqz {

// Malformed serialized data (bad magic, truncation, out-of-range
// fields). `offset` is the byte position at which decoding failed.
class CorruptStreamError : public std::runtime_error {
 public:
  explicit CorruptStreamError(const std::string& what)
      : std::runtime_error(what), offset_(0) {}
  CorruptStreamError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) +
                           ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace xqz

#endif  // XQZ_ERRORS_HPP
