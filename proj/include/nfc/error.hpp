// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_ERROR_HPP
#define NFC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nfc {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input or violated precondition: the caller can fix it.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A structural invariant the library itself maintains was observed broken.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InvariantError(what);
}

}  // namespace nfc

#endif
