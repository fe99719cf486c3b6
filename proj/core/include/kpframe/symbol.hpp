#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace kpf {

enum class SymbolKind : std::uint8_t {
  BCoeff = 0,           // b^i_{jk}: coefficient of the basis form w_i in w_{jk}
  ChangeParam = 1,      // a_j, l_{jk}
  ParamDerivative = 2,  // a_{j;i}, l_{jk;i}
  NormalFormParam = 3,  // w_1, w_2, s_i
  EmbeddingForm = 4,    // real component of theta_{jk}
  Coordinate = 5,       // real component of X_j
  Generic = 6,          // plain variable, used by tests and tools
};

enum class ParamFamily : std::uint8_t { A = 0, L = 1 };
enum class NormalParam : std::uint8_t { W = 0, S = 1 };

// A symbol is a packed 64-bit key: kind, frame generation, four small indices.
// Equal kind and indices means identical symbol; ordering is the key order.
class Symbol {
 public:
  constexpr Symbol() = default;

  static Symbol b(int j, int k, int i, int generation = 0);
  static Symbol a(int j);
  static Symbol l(int j, int k);
  static Symbol derivative(const Symbol& param, int i);
  static Symbol w(int index);
  static Symbol s(int index);
  static Symbol form_component(int j, int k, int component);
  static Symbol coordinate(int j, int component);
  static Symbol generic(int index);

  SymbolKind kind() const { return static_cast<SymbolKind>(key_ >> 56); }
  int generation() const { return static_cast<int>((key_ >> 48) & 0xff); }
  int index(int slot) const { return static_cast<int>((key_ >> (8 * (3 - slot))) & 0xff); }

  // For ParamDerivative: the parameter it differentiates.
  Symbol base_param() const;

  std::uint64_t key() const { return key_; }
  std::string to_string() const;
  static Symbol parse(std::string_view text);

  friend constexpr bool operator==(Symbol x, Symbol y) { return x.key_ == y.key_; }
  friend constexpr auto operator<=>(Symbol x, Symbol y) { return x.key_ <=> y.key_; }

 private:
  static Symbol pack(SymbolKind kind, int generation, int i0, int i1, int i2, int i3);
  std::uint64_t key_ = 0;
};

// Rejects a b-symbol whose indices fall outside an ambient frame of size dim = N+1.
void validate_b_symbol(const Symbol& s, int dim, int basis_count);

}  // namespace kpf

template <>
struct std::hash<kpf::Symbol> {
  std::size_t operator()(const kpf::Symbol& s) const noexcept { return std::hash<std::uint64_t>{}(s.key()); }
};
