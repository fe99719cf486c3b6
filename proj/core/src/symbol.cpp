#include "kpframe/symbol.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace kpf {

namespace {

constexpr std::array<std::string_view, 8> kComponentNames = {"alpha", "beta",  "gamma", "delta",
                                                             "epsilon", "zeta", "eta",  "theta"};

void check_index(int v, const char* what) {
  if (v < 0 || v > 255) throw std::out_of_range(std::string("symbol index out of range: ") + what);
}

// Parses a decimal integer from the front of text and advances it.
int take_int(std::string_view& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr == text.data()) throw std::invalid_argument("expected integer in symbol");
  text.remove_prefix(static_cast<std::size_t>(ptr - text.data()));
  return value;
}

void expect(std::string_view& text, char c) {
  if (text.empty() || text.front() != c) throw std::invalid_argument(std::string("expected '") + c + "' in symbol");
  text.remove_prefix(1);
}

}  // namespace

Symbol Symbol::pack(SymbolKind kind, int generation, int i0, int i1, int i2, int i3) {
  check_index(generation, "generation");
  check_index(i0, "0");
  check_index(i1, "1");
  check_index(i2, "2");
  check_index(i3, "3");
  Symbol s;
  s.key_ = (std::uint64_t(kind) << 56) | (std::uint64_t(generation) << 48) | (std::uint64_t(i0) << 24) |
           (std::uint64_t(i1) << 16) | (std::uint64_t(i2) << 8) | std::uint64_t(i3);
  return s;
}

Symbol Symbol::b(int j, int k, int i, int generation) {
  if (i < 1) throw std::out_of_range("b-symbol basis index must be >= 1");
  return pack(SymbolKind::BCoeff, generation, j, k, i, 0);
}

Symbol Symbol::a(int j) { return pack(SymbolKind::ChangeParam, 0, int(ParamFamily::A), j, 0, 0); }

Symbol Symbol::l(int j, int k) { return pack(SymbolKind::ChangeParam, 0, int(ParamFamily::L), j, k, 0); }

Symbol Symbol::derivative(const Symbol& param, int i) {
  if (param.kind() != SymbolKind::ChangeParam)
    throw std::invalid_argument("only change parameters have derivative symbols: " + param.to_string());
  if (i < 1) throw std::out_of_range("derivative basis index must be >= 1");
  return pack(SymbolKind::ParamDerivative, param.generation(), param.index(0), param.index(1), param.index(2), i);
}

Symbol Symbol::base_param() const {
  if (kind() != SymbolKind::ParamDerivative) throw std::logic_error("not a derivative symbol");
  return pack(SymbolKind::ChangeParam, generation(), index(0), index(1), index(2), 0);
}

Symbol Symbol::w(int index) {
  if (index < 1 || index > 2) throw std::out_of_range("w index must be 1 or 2");
  return pack(SymbolKind::NormalFormParam, 0, int(NormalParam::W), index, 0, 0);
}

Symbol Symbol::s(int index) {
  if (index < 1 || index > 8) throw std::out_of_range("s index must be in 1..8");
  return pack(SymbolKind::NormalFormParam, 0, int(NormalParam::S), index, 0, 0);
}

Symbol Symbol::form_component(int j, int k, int component) {
  if (component < 0 || component >= 8) throw std::out_of_range("form component must be in 0..7");
  return pack(SymbolKind::EmbeddingForm, 0, component, j, k, 0);
}

Symbol Symbol::coordinate(int j, int component) {
  if (component < 0 || component >= 8) throw std::out_of_range("coordinate component must be in 0..7");
  return pack(SymbolKind::Coordinate, 0, component, j, 0, 0);
}

Symbol Symbol::generic(int index) { return pack(SymbolKind::Generic, 0, index, 0, 0, 0); }

std::string Symbol::to_string() const {
  auto n = [](int v) { return std::to_string(v); };
  std::string out;
  switch (kind()) {
    case SymbolKind::BCoeff:
      out = "b" + n(index(0)) + "," + n(index(1)) + "^" + n(index(2));
      if (generation() > 0) out += "@" + n(generation());
      return out;
    case SymbolKind::ChangeParam:
      if (index(0) == int(ParamFamily::A)) return "a" + n(index(1));
      return "l" + n(index(1)) + "," + n(index(2));
    case SymbolKind::ParamDerivative:
      return base_param().to_string() + ";" + n(index(3));
    case SymbolKind::NormalFormParam:
      return (index(0) == int(NormalParam::W) ? "w" : "s") + n(index(1));
    case SymbolKind::EmbeddingForm:
      return std::string(kComponentNames[std::size_t(index(0))]) + "_" + n(index(1)) + n(index(2));
    case SymbolKind::Coordinate:
      return "x" + n(index(1)) + "." + n(index(0));
    case SymbolKind::Generic:
      return "x" + n(index(0));
  }
  return "?";
}

Symbol Symbol::parse(std::string_view text) {
  const std::string original(text);
  try {
    if (text.empty()) throw std::invalid_argument("empty symbol");
    for (std::size_t c = 0; c < kComponentNames.size(); ++c) {
      const auto& name = kComponentNames[c];
      if (text.size() == name.size() + 3 && text.substr(0, name.size()) == name && text[name.size()] == '_') {
        const int j = text[name.size() + 1] - '0';
        const int k = text[name.size() + 2] - '0';
        if (j < 0 || j > 9 || k < 0 || k > 9) throw std::invalid_argument("bad form component indices");
        return form_component(j, k, int(c));
      }
    }
    const char head = text.front();
    text.remove_prefix(1);
    Symbol result;
    switch (head) {
      case 'b': {
        const int j = take_int(text);
        expect(text, ',');
        const int k = take_int(text);
        expect(text, '^');
        const int i = take_int(text);
        int gen = 0;
        if (!text.empty()) {
          expect(text, '@');
          gen = take_int(text);
        }
        result = b(j, k, i, gen);
        break;
      }
      case 'a':
      case 'l': {
        const int j = take_int(text);
        if (head == 'a') {
          result = a(j);
        } else {
          expect(text, ',');
          result = l(j, take_int(text));
        }
        if (!text.empty()) {
          expect(text, ';');
          result = derivative(result, take_int(text));
        }
        break;
      }
      case 'w':
        result = w(take_int(text));
        break;
      case 's':
        result = s(take_int(text));
        break;
      case 'x': {
        const int first = take_int(text);
        if (!text.empty()) {
          expect(text, '.');
          result = coordinate(first, take_int(text));
        } else {
          result = generic(first);
        }
        break;
      }
      default:
        throw std::invalid_argument("unknown symbol prefix");
    }
    if (!text.empty()) throw std::invalid_argument("trailing characters");
    return result;
  } catch (const std::exception& e) {
    throw std::invalid_argument("cannot parse symbol '" + original + "': " + e.what());
  }
}

void validate_b_symbol(const Symbol& s, int dim, int basis_count) {
  if (s.kind() != SymbolKind::BCoeff) return;
  if (s.index(0) >= dim || s.index(1) >= dim || s.index(2) > basis_count)
    throw std::out_of_range("b-symbol " + s.to_string() + " outside frame of size " + std::to_string(dim));
}

}  // namespace kpf
