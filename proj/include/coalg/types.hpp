#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coalg {

using StateId = std::uint32_t;
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

// Stack contents and stack patterns, topmost symbol first.
using StackSym = std::uint32_t;
using Stack = std::vector<StackSym>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value fed to a core operation is structurally broken (wrong monad payload,
// atom out of range, weights not summing to one, ...).
struct InvariantViolation : Error {
  using Error::Error;
};

// A machine description is well-formed syntax but semantically inconsistent.
struct ValidationError : Error {
  using Error::Error;
};

struct SyntaxError : Error {
  SyntaxError(const std::string& msg, std::size_t line, std::size_t col)
      : Error(msg), line(line), col(col) {}
  std::size_t line;
  std::size_t col;
};

struct CapExceededError : Error {
  explicit CapExceededError(std::uint64_t count)
      : Error("state cap exceeded at " + std::to_string(count) + " states"),
        count(count) {}
  std::uint64_t count;
};

struct NotGreibachError : Error {
  using Error::Error;
};

struct UnknownStateError : Error {
  using Error::Error;
};

struct FileError : Error {
  using Error::Error;
};

inline bool is_prefix(const Stack& p, const Stack& s) {
  return p.size() <= s.size() && std::equal(p.begin(), p.end(), s.begin());
}

inline bool is_proper_prefix(const Stack& p, const Stack& s) {
  return p.size() < s.size() && std::equal(p.begin(), p.end(), s.begin());
}

inline Stack concat(const Stack& a, const Stack& b) {
  Stack r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

// Suffix of s starting at position n.
inline Stack drop(const Stack& s, std::size_t n) {
  return Stack(s.begin() + static_cast<std::ptrdiff_t>(n), s.end());
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace coalg
