#include "ddsim/pauli.hpp"

#include <bit>

#include "ddsim/errors.hpp"

namespace ddsim {

char axis_name(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    default: return 'z';
  }
}

Letter letter_for(Axis a) {
  switch (a) {
    case Axis::x: return Letter::X;
    case Axis::y: return Letter::Y;
    default: return Letter::Z;
  }
}

LetterProduct multiply_letters(Letter a, Letter b) {
  if (a == Letter::E) return {0, b};
  if (b == Letter::E) return {0, a};
  if (a == b) return {0, Letter::E};
  // X, Y, Z are 1, 2, 3; the remaining letter is the xor of the two.
  const auto c = static_cast<Letter>(static_cast<int>(a) ^ static_cast<int>(b));
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  // Cyclic order X->Y->Z->X gives +i, anti-cyclic gives -i.
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? 1 : 3, c};
}

PauliWord::PauliWord(std::size_t n_sites) : n_(n_sites) {
  if (n_sites > kMaxSites) {
    throw ArgumentError("PauliWord supports at most 64 sites");
  }
}

PauliWord PauliWord::from_string(std::string_view text) {
  PauliWord w(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'E': case 'I': case '_': break;
      case 'X': w.set(i, Letter::X); break;
      case 'Y': w.set(i, Letter::Y); break;
      case 'Z': w.set(i, Letter::Z); break;
      default: throw ArgumentError(std::string("invalid Pauli letter '") + text[i] + "'");
    }
  }
  return w;
}

PauliWord PauliWord::single(std::size_t n_sites, std::size_t site, Letter letter) {
  PauliWord w(n_sites);
  w.set(site, letter);
  return w;
}

Letter PauliWord::at(std::size_t site) const {
  if (site >= n_) throw ArgumentError("site index out of range");
  const bool x = (x_ >> site) & 1u;
  const bool z = (z_ >> site) & 1u;
  if (x && z) return Letter::Y;
  if (x) return Letter::X;
  if (z) return Letter::Z;
  return Letter::E;
}

void PauliWord::set(std::size_t site, Letter letter) {
  if (site >= n_) throw ArgumentError("site index out of range");
  const std::uint64_t bit = std::uint64_t{1} << site;
  x_ &= ~bit;
  z_ &= ~bit;
  if (letter == Letter::X || letter == Letter::Y) x_ |= bit;
  if (letter == Letter::Z || letter == Letter::Y) z_ |= bit;
}

std::size_t PauliWord::weight() const { return static_cast<std::size_t>(std::popcount(x_ | z_)); }

std::uint64_t PauliWord::flip_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t s = 0; s < n_; ++s) {
    if ((x_ >> s) & 1u) mask |= std::uint64_t{1} << (n_ - 1 - s);
  }
  return mask;
}

std::string PauliWord::str() const {
  static constexpr char kNames[] = {'E', 'X', 'Y', 'Z'};
  std::string out(n_, 'E');
  for (std::size_t i = 0; i < n_; ++i) out[i] = kNames[static_cast<int>(at(i))];
  return out;
}

bool operator<(const PauliWord& a, const PauliWord& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (std::size_t i = 0; i < a.n_; ++i) {
    const auto la = a.at(i);
    const auto lb = b.at(i);
    if (la != lb) return la < lb;
  }
  return false;
}

WordProduct multiply_words(const PauliWord& a, const PauliWord& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("Pauli words have different lengths");
  }
  WordProduct out{0, PauliWord(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = multiply_letters(a.at(i), b.at(i));
    out.phase += p.phase;
    out.word.set(i, p.letter);
  }
  out.phase %= 4;
  return out;
}

}  // namespace ddsim
