#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ddsim {

enum class Axis { x, y, z };

char axis_name(Axis a);

/// A rotation axis with orientation, e.g. -y.
struct SignedAxis {
  Axis axis = Axis::z;
  int sign = 1;  // +1 or -1
};

enum class Letter : std::uint8_t { E = 0, X = 1, Y = 2, Z = 3 };

Letter letter_for(Axis a);

/// Product of two single-site Pauli letters: a*b = i^phase * letter.
struct LetterProduct {
  int phase;
  Letter letter;
};
LetterProduct multiply_letters(Letter a, Letter b);

/// Tensor product of single-site Pauli matrices (E is the 2x2 identity).
/// Site 0 is the leftmost character and the most significant tensor factor.
class PauliWord {
 public:
  static constexpr std::size_t kMaxSites = 64;

  PauliWord() = default;
  explicit PauliWord(std::size_t n_sites);
  static PauliWord from_string(std::string_view text);
  static PauliWord single(std::size_t n_sites, std::size_t site, Letter letter);

  std::size_t size() const { return n_; }
  Letter at(std::size_t site) const;
  void set(std::size_t site, Letter letter);
  bool is_identity() const { return x_ == 0 && z_ == 0; }
  std::size_t weight() const;

  /// Bit mask of sites carrying X or Y, with site 0 at bit (n-1).
  std::uint64_t flip_mask() const;

  std::string str() const;

  // Lexicographic in the letter order E < X < Y < Z, site 0 first.
  friend bool operator<(const PauliWord& a, const PauliWord& b);
  friend bool operator==(const PauliWord& a, const PauliWord& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

 private:
  std::size_t n_ = 0;
  std::uint64_t x_ = 0;  // bit `site` set for X, Y
  std::uint64_t z_ = 0;  // bit `site` set for Z, Y
};

/// a*b = i^phase * word.
struct WordProduct {
  int phase;
  PauliWord word;
};
WordProduct multiply_words(const PauliWord& a, const PauliWord& b);

}  // namespace ddsim
